#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stratlas/atlas.hpp"

// Command-line front end, exposed as a library so the test suites can run
// the exact code paths of the tool. Exit codes: 0 success, 1 verification
// failure (or internal inconsistency), 2 usage error, 3 I/O error.

namespace strat {

struct JobContext {
  std::unique_ptr<AffineWeyl> w;
  AffineWeyl::Sigma sigma;
  CocharClass mu;
};

// datum: a built-in label or raw JSON text (starting with '{').
// sigma: "", "trivial", "flip", or "perm:i,j,..." (0-based simple indices).
// mu: native coordinates; for GSp built-ins the 2g weight-slot form is
// accepted too and converted.
JobContext make_job_context(const std::string& datum, const IVec& mu,
                            const std::string& sigma);

// Named parahoric types: "iwahori", "hyperspecial", or "j0,j1,...".
ParahoricType parse_parahoric(const AffineWeyl& w, const std::string& text);

// All sigma-stable proper subsets of the affine nodes, deterministic order.
std::vector<ParahoricType> all_parahorics(const AffineWeyl& w,
                                          const AffineWeyl::Sigma& s);

std::string cmd_enumerate(JobContext& ctx, const std::string& parahoric);
std::string cmd_atlas(JobContext& ctx, const ParahoricType& k,
                      const std::string& format, bool use_cache,
                      const std::string& cache_dir);

struct CheckResult {
  std::string instance;
  std::string check;
  std::string status;  // PASS | FAIL | BUDGET
  std::string detail;
};

struct VerifyJob {
  std::string datum;
  IVec mu;
  std::string sigma;
  std::vector<std::string> parahorics;  // empty means all sigma-stable types
};

std::vector<VerifyJob> parse_matrix_json(const std::string& text);
std::vector<VerifyJob> default_matrix();

std::vector<CheckResult> run_verification(const std::vector<VerifyJob>& jobs,
                                          double budget_seconds = 0.0);
std::string format_report(const std::vector<CheckResult>& results);

int run_cli(int argc, const char* const* argv);

}  // namespace strat
