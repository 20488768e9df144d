#pragma once

#include <chrono>
#include <stdexcept>

// Cooperative per-instance time budget for the verification harness. Heavy
// enumeration loops call budget_check(); exceeding the deadline raises
// BudgetExceeded, which the harness reports as a status distinct from FAIL.

namespace strat {

struct BudgetExceeded : std::runtime_error {
  BudgetExceeded() : std::runtime_error("time budget exceeded") {}
};

namespace detail {
inline thread_local std::chrono::steady_clock::time_point budget_deadline{};
inline thread_local bool budget_armed = false;
}  // namespace detail

inline void budget_arm(double seconds) {
  detail::budget_armed = true;
  detail::budget_deadline =
      std::chrono::steady_clock::now() +
      std::chrono::microseconds(static_cast<long long>(seconds * 1e6));
}

inline void budget_disarm() { detail::budget_armed = false; }

inline void budget_check() {
  if (detail::budget_armed &&
      std::chrono::steady_clock::now() > detail::budget_deadline)
    throw BudgetExceeded();
}

}  // namespace strat
