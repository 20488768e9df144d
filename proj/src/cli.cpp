#include "stratlas/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "stratlas/budget.hpp"

namespace strat {

namespace {

IVec parse_int_list(const std::string& text) {
  IVec out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) throw std::invalid_argument("empty entry in integer list");
    out.push_back(std::stoll(part));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IVec adapt_mu(const RootDatum& rd, const IVec& mu) {
  if (static_cast<int>(mu.size()) == rd.rank()) return mu;
  if (rd.family() == Family::GSp) {
    int g = rd.rank() - 1;
    if (static_cast<int>(mu.size()) == 2 * g) {
      // weight-slot form (a_1, ..., a_2g): mirrored pairs share the multiplier
      i64 c = mu[0] + mu[2 * g - 1];
      for (int i = 0; i < g; ++i)
        if (mu[i] + mu[2 * g - 1 - i] != c)
          throw std::invalid_argument(
              "GSp cocharacter in weight-slot form must have constant paired sums");
      IVec native(mu.begin(), mu.begin() + g);
      native.push_back(c);
      return native;
    }
  }
  throw std::invalid_argument("mu has the wrong number of coordinates");
}

nlohmann::ordered_json element_json(const AffineWeyl& w, AffineWeyl::Elt e) {
  nlohmann::ordered_json j;
  j["elt"] = w.to_string(e);
  j["length"] = w.length(e);
  return j;
}

}  // namespace

JobContext make_job_context(const std::string& datum, const IVec& mu,
                            const std::string& sigma) {
  JobContext ctx;
  nlohmann::json datum_doc;
  RootDatum rd = [&] {
    if (!datum.empty() && datum.front() == '{') {
      datum_doc = nlohmann::json::parse(datum);
      return RootDatum::from_json_text(datum);
    }
    return RootDatum::from_label(datum);
  }();
  ctx.w = std::make_unique<AffineWeyl>(std::move(rd));

  std::string sigma_spec = sigma;
  if (sigma_spec.empty() && datum_doc.contains("sigma")) {
    // user data may carry the diagram permutation inline
    std::string parts;
    for (const auto& v : datum_doc.at("sigma"))
      parts += (parts.empty() ? "" : ",") + std::to_string(v.get<int>());
    sigma_spec = "perm:" + parts;
  }
  if (sigma_spec.empty()) sigma_spec = "trivial";
  if (sigma_spec.rfind("perm:", 0) == 0) {
    IVec perm64 = parse_int_list(sigma_spec.substr(5));
    std::vector<int> perm(perm64.begin(), perm64.end());
    ctx.sigma = ctx.w->sigma_from_perm(perm);
  } else {
    ctx.sigma = ctx.w->sigma_from_name(sigma_spec);
  }
  ctx.mu = make_cochar_class(*ctx.w, ctx.sigma, adapt_mu(ctx.w->datum(), mu));
  return ctx;
}

ParahoricType parse_parahoric(const AffineWeyl& w, const std::string& text) {
  ParahoricType k;
  if (text.empty() || text == "iwahori") return k;
  if (text == "hyperspecial") {
    for (int j = 1; j <= w.datum().n_simple(); ++j) k.nodes.push_back(j);
    w.validate_parahoric(k);
    return k;
  }
  IVec nodes = parse_int_list(text);
  for (i64 j : nodes) k.nodes.push_back(static_cast<int>(j));
  std::sort(k.nodes.begin(), k.nodes.end());
  w.validate_parahoric(k);
  return k;
}

std::vector<ParahoricType> all_parahorics(const AffineWeyl& w,
                                          const AffineWeyl::Sigma& s) {
  std::vector<ParahoricType> out;
  int n = w.n_affine();
  for (int mask = 0; mask < (1 << n); ++mask) {
    ParahoricType k;
    for (int j = 0; j < n; ++j)
      if (mask & (1 << j)) k.nodes.push_back(j);
    try {
      w.validate_parahoric(k);
    } catch (const std::invalid_argument&) {
      continue;
    }
    if (!w.sigma_stable(s, k)) continue;
    out.push_back(std::move(k));
  }
  std::sort(out.begin(), out.end(), [](const ParahoricType& a, const ParahoricType& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() < b.nodes.size();
    return a.nodes < b.nodes;
  });
  return out;
}

std::string cmd_enumerate(JobContext& ctx, const std::string& parahoric) {
  AffineWeyl& w = *ctx.w;
  AdmSet adm = admissible_set(w, ctx.mu);
  nlohmann::ordered_json j;
  j["datum"] = nlohmann::ordered_json::parse(w.datum().to_json_text());
  j["mu"] = ctx.mu.mu_dom;
  j["tau"] = w.to_string(tau_of_mu(w, ctx.mu));
  nlohmann::ordered_json adm_json;
  adm_json["size"] = adm.elements.size();
  adm_json["elements"] = nlohmann::ordered_json::array();
  for (AffineWeyl::Elt e : adm.elements)
    adm_json["elements"].push_back(element_json(w, e));
  j["adm"] = std::move(adm_json);

  nlohmann::ordered_json straight = nlohmann::ordered_json::array();
  for (AffineWeyl::Elt e : adm.elements)
    if (is_straight(w, ctx.sigma, e)) {
      nlohmann::ordered_json row = element_json(w, e);
      NewtonPair p = newton_pair(w, ctx.sigma, e);
      row["nu"] = to_strings(p.nu);
      row["kappa"] = p.kappa;
      straight.push_back(std::move(row));
    }
  j["straight"] = std::move(straight);

  BofG bg = b_of_g_mu(w, ctx.sigma, adm, true);
  nlohmann::ordered_json bj = nlohmann::ordered_json::array();
  for (const StraightClass& cls : bg.classes) {
    nlohmann::ordered_json row;
    row["nu"] = to_strings(cls.invariants.nu);
    row["kappa"] = cls.invariants.kappa;
    row["representative"] = w.to_string(cls.rep);
    bj.push_back(std::move(row));
  }
  j["b_of_g_mu"] = std::move(bj);

  if (!parahoric.empty()) {
    ParahoricType k = parse_parahoric(w, parahoric);
    if (!w.sigma_stable(ctx.sigma, k))
      throw std::invalid_argument("parahoric type is not sigma-stable");
    AdmK admk = admissible_K(w, adm, k, ctx.sigma);
    nlohmann::ordered_json kj;
    kj["nodes"] = k.nodes;
    kj["cosets"] = nlohmann::ordered_json::array();
    for (const AdmKCoset& c : admk.cosets) {
      nlohmann::ordered_json row;
      row["min_rep"] = w.to_string(c.min_rep);
      row["max_min_rep"] = w.to_string(c.max_min_rep);
      kj["cosets"].push_back(std::move(row));
    }
    kj["ekor_index"] = nlohmann::ordered_json::array();
    for (AffineWeyl::Elt e : ekor_index_set(w, adm, k, ctx.sigma, true))
      kj["ekor_index"].push_back(element_json(w, e));
    j["adm_K"] = std::move(kj);
  }
  return j.dump(2) + "\n";
}

std::string cmd_atlas(JobContext& ctx, const ParahoricType& k,
                      const std::string& format, bool use_cache,
                      const std::string& cache_dir) {
  AffineWeyl& w = *ctx.w;
  std::optional<StratAtlas> atlas;
  if (use_cache) atlas = cache_load(w, ctx.sigma, ctx.mu, k, cache_dir);
  if (!atlas) {
    atlas = build_atlas(w, ctx.sigma, ctx.mu, k);
    if (use_cache) cache_store(w, *atlas, cache_dir);
  }
  if (format == "dot") return atlas_to_dot(w, *atlas);
  if (format == "json") return atlas_to_json(w, *atlas).dump(2) + "\n";
  throw std::invalid_argument("unknown format: " + format);
}

std::vector<VerifyJob> parse_matrix_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);
  std::vector<VerifyJob> jobs;
  for (const auto& row : doc) {
    VerifyJob job;
    if (row.at("datum").is_string())
      job.datum = row.at("datum").get<std::string>();
    else
      job.datum = row.at("datum").dump();
    job.mu = row.at("mu").get<IVec>();
    job.sigma = row.value("sigma", std::string("trivial"));
    if (row.contains("parahorics") && row.at("parahorics").is_array())
      for (const auto& p : row.at("parahorics")) {
        if (p.is_string()) {
          job.parahorics.push_back(p.get<std::string>());
        } else {
          std::string s;
          for (const auto& v : p) s += (s.empty() ? "" : ",") + std::to_string(v.get<int>());
          job.parahorics.push_back(s.empty() ? "iwahori" : s);
        }
      }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

std::vector<VerifyJob> default_matrix() {
  std::vector<VerifyJob> jobs;
  auto push = [&](const std::string& datum, IVec mu) {
    jobs.push_back(VerifyJob{datum, std::move(mu), "trivial", {}});
  };
  push("GL(2)", {1, 0});
  push("GL(3)", {1, 0, 0});
  push("GL(3)", {1, 1, 0});
  push("GL(4)", {1, 0, 0, 0});
  push("GL(4)", {1, 1, 0, 0});
  push("GL(4)", {1, 1, 1, 0});
  push("GSp(4)", {1, 1, 1});
  push("GSp(6)", {1, 1, 1, 1});
  return jobs;
}

namespace {

struct InstanceData {
  JobContext ctx;
  AdmSet adm;
  BofG bg;
  AffineWeyl::Elt tau = 0;
};

// the per-(datum, mu, sigma) checks
void run_global_checks(InstanceData& d, const std::string& tag,
                       std::vector<CheckResult>& out) {
  AffineWeyl& w = *d.ctx.w;
  auto run = [&](const std::string& name, auto&& body) {
    CheckResult r{tag, name, "PASS", ""};
    try {
      if (auto fail = body()) {
        r.status = "FAIL";
        r.detail = *fail;
      }
    } catch (const BudgetExceeded&) {
      r.status = "BUDGET";
    }
    out.push_back(std::move(r));
  };

  run("tau-minimal", [&]() -> std::optional<std::string> {
    if (!d.adm.contains(d.tau)) return "tau not admissible";
    for (AffineWeyl::Elt e : d.adm.elements) {
      budget_check();
      if (!w.bruhat_leq(d.tau, e))
        return "tau not below " + w.to_string(e);
      if (w.length(e) == 0 && e != d.tau)
        return "second length-zero admissible element " + w.to_string(e);
    }
    return std::nullopt;
  });

  run("straight-order-iso", [&]() -> std::optional<std::string> {
    for (const StraightClass& a : d.bg.classes)
      for (const StraightClass& b : d.bg.classes) {
        budget_check();
        bool via_ideals = leq_straight(w, d.ctx.sigma, a, b);
        bool via_invariants = leq_newton(w.datum(), a.invariants, b.invariants);
        if (via_ideals != via_invariants)
          return "order mismatch between " + a.invariants.to_string() + " and " +
                 b.invariants.to_string();
      }
    return std::nullopt;
  });

  run("newton-extremes", [&]() -> std::optional<std::string> {
    if (d.bg.minimum < 0) return "no unique minimum";
    if (d.bg.maximum < 0) return "no unique maximum";
    return std::nullopt;
  });
}

void run_parahoric_checks(InstanceData& d, const ParahoricType& k,
                          const std::string& tag, std::vector<CheckResult>& out) {
  AffineWeyl& w = *d.ctx.w;
  auto run = [&](const std::string& name, auto&& body) {
    CheckResult r{tag, name, "PASS", ""};
    try {
      if (auto fail = body()) {
        r.status = "FAIL";
        r.detail = *fail;
      }
    } catch (const BudgetExceeded&) {
      r.status = "BUDGET";
    }
    out.push_back(std::move(r));
  };

  run("index-intersection", [&]() -> std::optional<std::string> {
    try {
      ekor_index_set(w, d.adm, k, d.ctx.sigma, true);
    } catch (const std::logic_error& e) {
      return std::string(e.what());
    }
    return std::nullopt;
  });

  run("newton-surjective", [&]() -> std::optional<std::string> {
    std::vector<AffineWeyl::Elt> index = ekor_index_set(w, d.adm, k, d.ctx.sigma);
    std::vector<StraightClass> hit = straight_classes_in(w, d.ctx.sigma, index);
    for (const StraightClass& cls : d.bg.classes) {
      bool found = false;
      for (const StraightClass& h : hit)
        if (h.invariants == cls.invariants) found = true;
      if (!found)
        return "class " + cls.invariants.to_string() + " missed by the index set";
    }
    return std::nullopt;
  });

  run("closure-identity", [&]() -> std::optional<std::string> {
    std::vector<AffineWeyl::Elt> index = ekor_index_set(w, d.adm, k, d.ctx.sigma);
    PartialConjCtx ctx(w, k, d.ctx.sigma);
    for (AffineWeyl::Elt x : index) {
      budget_check();
      std::set<AffineWeyl::Elt> lhs;
      for (AffineWeyl::Elt e : d.adm.elements)
        if (w.bruhat_leq(e, x))
          for (AffineWeyl::Elt y : ctx.sigma_k(e)) lhs.insert(y);
      std::vector<AffineWeyl::Elt> rhs = ctx.ekor_closure(x, d.adm);
      std::vector<AffineWeyl::Elt> lhs_sorted(lhs.begin(), lhs.end());
      w.sort_canonical(lhs_sorted);
      if (lhs_sorted != rhs)
        return "closure identity fails at " + w.to_string(x);
    }
    return std::nullopt;
  });
}

}  // namespace

std::vector<CheckResult> run_verification(const std::vector<VerifyJob>& jobs,
                                          double budget_seconds) {
  std::vector<CheckResult> out;
  for (const VerifyJob& job : jobs) {
    std::string mu_text;
    for (std::size_t i = 0; i < job.mu.size(); ++i)
      mu_text += (i ? "," : "") + std::to_string(job.mu[i]);
    std::string base_tag = job.datum + " mu=(" + mu_text + ") sigma=" + job.sigma;
    if (budget_seconds > 0) budget_arm(budget_seconds);
    try {
      InstanceData d{make_job_context(job.datum, job.mu, job.sigma), {}, {}, 0};
      d.adm = admissible_set(*d.ctx.w, d.ctx.mu);
      d.bg = b_of_g_mu(*d.ctx.w, d.ctx.sigma, d.adm, true);
      d.tau = tau_of_mu(*d.ctx.w, d.ctx.mu);
      run_global_checks(d, base_tag, out);
      std::vector<ParahoricType> ks;
      if (job.parahorics.empty()) {
        ks = all_parahorics(*d.ctx.w, d.ctx.sigma);
      } else {
        for (const std::string& p : job.parahorics)
          ks.push_back(parse_parahoric(*d.ctx.w, p));
      }
      for (const ParahoricType& k : ks) {
        if (budget_seconds > 0) budget_arm(budget_seconds);
        run_parahoric_checks(d, k, base_tag + " K=" + k.describe(), out);
      }
    } catch (const BudgetExceeded&) {
      out.push_back(CheckResult{base_tag, "instance", "BUDGET", ""});
    } catch (const std::logic_error& e) {
      out.push_back(CheckResult{base_tag, "instance", "FAIL", e.what()});
    }
    budget_disarm();
  }
  return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::string out;
  int pass = 0, fail = 0, budget = 0;
  for (const CheckResult& r : results) {
    out += "[" + r.instance + "] " + r.check + " " + r.status;
    if (!r.detail.empty()) out += " -- " + r.detail;
    out += "\n";
    if (r.status == "PASS") ++pass;
    if (r.status == "FAIL") ++fail;
    if (r.status == "BUDGET") ++budget;
  }
  out += "checks: " + std::to_string(pass) + " passed, " + std::to_string(fail) +
         " failed, " + std::to_string(budget) + " over budget\n";
  return out;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"stratification atlases for extended affine Weyl groups"};
  app.require_subcommand(1);

  std::string datum, mu_text, sigma = "trivial", parahoric, format = "json";
  std::string out_path, matrix_path;
  bool no_cache = false;
  double budget_seconds = 0;
  const char* env_cache = std::getenv("STRATLAS_CACHE_DIR");
  std::string cache_dir = env_cache ? env_cache : ".stratlas-cache";

  auto add_common = [&](CLI::App* cmd, bool need_mu) {
    cmd->add_option("--datum", datum, "built-in label (GL(n), SL(n), GSp(2g)) or @file.json")
        ->required();
    auto* mu_opt = cmd->add_option("--mu", mu_text, "cocharacter, comma-separated integers");
    if (need_mu) mu_opt->required();
    cmd->add_option("--sigma", sigma, "trivial | flip | perm:i,j,...");
    cmd->add_option("--out", out_path, "write output to a file instead of stdout");
  };

  CLI::App* enumerate = app.add_subcommand("enumerate", "admissible sets and straight classes");
  add_common(enumerate, true);
  enumerate->add_option("--parahoric", parahoric, "iwahori | hyperspecial | j0,j1,...");

  CLI::App* atlas = app.add_subcommand("atlas", "the three stratification posets");
  add_common(atlas, true);
  atlas->add_option("--parahoric", parahoric, "iwahori | hyperspecial | j0,j1,...");
  atlas->add_option("--format", format, "json | dot");
  atlas->add_flag("--no-cache", no_cache, "skip the atlas cache");

  CLI::App* verify = app.add_subcommand("verify", "run the combinatorial checks");
  verify->add_option("--matrix", matrix_path, "JSON file with the instance matrix");
  verify->add_option("--budget-seconds", budget_seconds, "per-instance time budget");
  verify->add_option("--out", out_path, "write the report to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  };

  try {
    std::string datum_text = datum;
    if (!datum.empty() && datum.front() == '@') datum_text = read_file(datum.substr(1));

    if (enumerate->parsed()) {
      JobContext ctx = make_job_context(datum_text, parse_int_list(mu_text), sigma);
      emit(cmd_enumerate(ctx, parahoric));
      return 0;
    }
    if (atlas->parsed()) {
      JobContext ctx = make_job_context(datum_text, parse_int_list(mu_text), sigma);
      ParahoricType k = parse_parahoric(*ctx.w, parahoric);
      if (!ctx.w->sigma_stable(ctx.sigma, k))
        throw std::invalid_argument("parahoric type is not sigma-stable");
      emit(cmd_atlas(ctx, k, format, !no_cache, cache_dir));
      return 0;
    }
    if (verify->parsed()) {
      std::vector<VerifyJob> jobs = matrix_path.empty()
                                        ? default_matrix()
                                        : parse_matrix_json(read_file(matrix_path));
      std::vector<CheckResult> results = run_verification(jobs, budget_seconds);
      emit(format_report(results));
      for (const CheckResult& r : results)
        if (r.status == "FAIL") return 1;
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::logic_error& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace strat
