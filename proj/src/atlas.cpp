#include "stratlas/atlas.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "stratlas/budget.hpp"

namespace strat {

namespace {

constexpr const char* kFormatVersion = "stratlas-atlas-1";

u64 fnv1a(const std::string& s) {
  u64 h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(u64 v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

nlohmann::ordered_json covers_json(const std::vector<std::pair<int, int>>& covers) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (auto& [lo, hi] : covers) arr.push_back({lo, hi});
  return arr;
}

}  // namespace

std::vector<std::pair<int, int>> hasse_covers(
    int n, const std::vector<std::pair<int, int>>& leq_pairs) {
  std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
  for (auto& [a, b] : leq_pairs)
    if (a != b) lt[a][b] = true;
  std::vector<std::pair<int, int>> covers;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (!lt[a][b]) continue;
      bool direct = true;
      for (int c = 0; c < n && direct; ++c)
        if (lt[a][c] && lt[c][b]) direct = false;
      if (direct) covers.emplace_back(a, b);
    }
  return covers;
}

StratAtlas build_atlas(AffineWeyl& w, const AffineWeyl::Sigma& s,
                       const CocharClass& mu, const ParahoricType& k,
                       const AtlasOptions& opts) {
  StratAtlas a;
  a.datum_json = w.datum().to_json_text();
  a.datum_name = w.datum().name();
  a.mu = mu.mu_dom;
  a.sigma_g = s.g;
  a.parahoric = k;

  AdmSet adm = admissible_set(w, mu);

  // Double-coset poset via Bruhat order on the shortest representatives.
  AdmK admk = admissible_K(w, adm, k, s);
  for (const AdmKCoset& c : admk.cosets)
    a.kr.push_back(KrNode{c.min_rep, c.max_min_rep, w.length(c.max_min_rep)});
  {
    std::vector<std::pair<int, int>> leq;
    int n = static_cast<int>(a.kr.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && w.bruhat_leq(a.kr[i].min_rep, a.kr[j].min_rep))
          leq.emplace_back(i, j);
    a.kr_covers = hasse_covers(n, leq);
  }

  // Newton poset.
  BofG bg = b_of_g_mu(w, s, adm, opts.verify);
  for (const StraightClass& cls : bg.classes) {
    NewtonNode node;
    node.b = cls.invariants;
    node.defect = defect(w.datum(), cls.invariants.nu);
    if (auto pred = newton_dim_prediction(w.datum(), mu, cls.invariants)) {
      node.dim = pred->value;
      node.dim_integral = pred->integral;
    }
    node.leaf_dim = leaf_dim_prediction(w.datum(), cls.invariants);
    a.newton.push_back(std::move(node));
  }
  a.newton_covers = hasse_covers(static_cast<int>(bg.classes.size()), bg.leq_pairs);

  // Refinement poset on Adm ∩ ᴷW̃.
  std::vector<AffineWeyl::Elt> index = ekor_index_set(w, adm, k, s, opts.verify);
  PartialConjCtx ctx(w, k, s);
  for (AffineWeyl::Elt x : index) {
    EkorNode node;
    node.x = x;
    node.length = w.length(x);
    node.straight = is_straight(w, s, x);
    if (node.straight) {
      NewtonPair p = newton_pair(w, s, x);
      for (std::size_t i = 0; i < bg.classes.size(); ++i)
        if (bg.classes[i].invariants == p) node.newton_idx = static_cast<int>(i);
      if (!node.newton_idx)
        throw std::logic_error("straight index element outside the Newton poset");
    }
    a.ekor.push_back(std::move(node));
  }
  {
    std::vector<std::pair<int, int>> leq;
    int n = static_cast<int>(a.ekor.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && ctx.leq_k_sigma(a.ekor[i].x, a.ekor[j].x))
          leq.emplace_back(i, j);
    a.ekor_covers = hasse_covers(n, leq);
  }

  // Index map to the double-coset level.
  for (const EkorNode& node : a.ekor) {
    AffineWeyl::Elt dmin = w.coset_min_double(k, node.x);
    int found = -1;
    for (std::size_t i = 0; i < a.kr.size(); ++i)
      if (a.kr[i].min_rep == dmin) found = static_cast<int>(i);
    if (found < 0) throw std::logic_error("index element outside its coset poset");
    a.ekor_to_kr.push_back(found);
  }
  return a;
}

bool StratAtlas::same_content(const StratAtlas& o, const AffineWeyl& w) const {
  auto elt_eq = [&](AffineWeyl::Elt a, AffineWeyl::Elt b) {
    return w.to_string(a) == w.to_string(b);
  };
  if (kr.size() != o.kr.size() || ekor.size() != o.ekor.size() ||
      newton.size() != o.newton.size())
    return false;
  for (std::size_t i = 0; i < kr.size(); ++i)
    if (!elt_eq(kr[i].min_rep, o.kr[i].min_rep) ||
        !elt_eq(kr[i].max_min_rep, o.kr[i].max_min_rep) || kr[i].dim != o.kr[i].dim)
      return false;
  for (std::size_t i = 0; i < ekor.size(); ++i)
    if (!elt_eq(ekor[i].x, o.ekor[i].x) || ekor[i].length != o.ekor[i].length ||
        ekor[i].straight != o.ekor[i].straight ||
        ekor[i].newton_idx != o.ekor[i].newton_idx)
      return false;
  for (std::size_t i = 0; i < newton.size(); ++i)
    if (!(newton[i].b == o.newton[i].b) || newton[i].defect != o.newton[i].defect ||
        newton[i].dim != o.newton[i].dim || newton[i].leaf_dim != o.newton[i].leaf_dim)
      return false;
  return kr_covers == o.kr_covers && ekor_covers == o.ekor_covers &&
         newton_covers == o.newton_covers && ekor_to_kr == o.ekor_to_kr;
}

nlohmann::ordered_json atlas_to_json(const AffineWeyl& w, const StratAtlas& a) {
  nlohmann::ordered_json j;
  j["format"] = kFormatVersion;
  j["datum"] = nlohmann::ordered_json::parse(a.datum_json);
  j["mu"] = a.mu;
  j["sigma"] = a.sigma_g;
  j["parahoric"] = a.parahoric.nodes;

  nlohmann::ordered_json kr;
  kr["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.kr.size(); ++i) {
    nlohmann::ordered_json node;
    node["id"] = i;
    node["min_rep"] = w.to_string(a.kr[i].min_rep);
    node["max_min_rep"] = w.to_string(a.kr[i].max_min_rep);
    node["dim"] = a.kr[i].dim;
    kr["nodes"].push_back(std::move(node));
  }
  kr["covers"] = covers_json(a.kr_covers);
  j["kr"] = std::move(kr);

  nlohmann::ordered_json ek;
  ek["nodes"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.ekor.size(); ++i) {
    nlohmann::ordered_json node;
    node["id"] = i;
    node["elt"] = w.to_string(a.ekor[i].x);
    node["length"] = a.ekor[i].length;
    node["straight"] = a.ekor[i].straight;
    if (a.ekor[i].newton_idx)
      node["newton_class"] = *a.ekor[i].newton_idx;
    else
      node["newton_class"] = nullptr;
    ek["nodes"].push_back(std::move(node));
  }
  ek["covers"] = covers_json(a.ekor_covers);
  j["ekor"] = std::move(ek);

  nlohmann::ordered_json nw;
  nw["nodes"] = nlohmann::ordered_json::array();
  for (const NewtonNode& n : a.newton) {
    nlohmann::ordered_json node;
    node["nu"] = to_strings(n.b.nu);
    node["kappa"] = n.b.kappa;
    if (n.dim) {
      node["dim"] = to_string(*n.dim);
      node["dim_integral"] = n.dim_integral;
    } else {
      node["dim"] = nullptr;
    }
    if (n.defect)
      node["defect"] = *n.defect;
    else
      node["defect"] = nullptr;
    node["leaf_dim"] = to_string(n.leaf_dim);
    nw["nodes"].push_back(std::move(node));
  }
  nw["covers"] = covers_json(a.newton_covers);
  j["newton"] = std::move(nw);

  nlohmann::ordered_json maps;
  maps["ekor_to_kr"] = a.ekor_to_kr;
  nlohmann::ordered_json e2n = nlohmann::ordered_json::array();
  for (const EkorNode& n : a.ekor) {
    if (n.newton_idx)
      e2n.push_back(*n.newton_idx);
    else
      e2n.push_back(nullptr);
  }
  maps["straight_ekor_to_newton"] = std::move(e2n);
  j["maps"] = std::move(maps);
  return j;
}

std::string atlas_to_dot(const AffineWeyl& w, const StratAtlas& a) {
  std::string out;
  auto emit = [&out](const std::string& name, const std::vector<std::string>& labels,
                     const std::vector<std::pair<int, int>>& covers) {
    out += "digraph " + name + " {\n  rankdir=BT;\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
      out += "  n" + std::to_string(i) + " [label=\"" + labels[i] + "\"];\n";
    for (auto& [lo, hi] : covers)
      out += "  n" + std::to_string(lo) + " -> n" + std::to_string(hi) + ";\n";
    out += "}\n";
  };
  std::vector<std::string> kr_labels, ek_labels, nw_labels;
  for (const KrNode& n : a.kr)
    kr_labels.push_back(w.to_string(n.min_rep) + "\\ndim " + std::to_string(n.dim));
  for (const EkorNode& n : a.ekor)
    ek_labels.push_back(w.to_string(n.x) + (n.straight ? "\\nstraight" : ""));
  for (const NewtonNode& n : a.newton) {
    std::string l = "nu=(";
    for (std::size_t i = 0; i < n.b.nu.size(); ++i) {
      if (i) l += ",";
      l += n.b.nu[i].get_str();
    }
    l += ")";
    nw_labels.push_back(std::move(l));
  }
  emit("kr", kr_labels, a.kr_covers);
  emit("ekor", ek_labels, a.ekor_covers);
  emit("newton", nw_labels, a.newton_covers);
  return out;
}

std::vector<std::vector<int>> change_parahoric(AffineWeyl& w,
                                               const AffineWeyl::Sigma& s,
                                               const StratAtlas& fine,
                                               const StratAtlas& coarse) {
  for (int j : fine.parahoric.nodes)
    if (!coarse.parahoric.contains(j))
      throw std::invalid_argument("change_parahoric wants nested parahoric types");
  PartialConjCtx ctx(w, coarse.parahoric, s);
  std::vector<std::vector<int>> out;
  for (const EkorNode& node : fine.ekor) {
    std::vector<int> images;
    for (AffineWeyl::Elt x : ctx.sigma_k(node.x)) {
      int found = -1;
      for (std::size_t i = 0; i < coarse.ekor.size(); ++i)
        if (coarse.ekor[i].x == x) found = static_cast<int>(i);
      if (found < 0)
        throw std::logic_error("sigma_k image outside the coarse index set");
      images.push_back(found);
    }
    out.push_back(std::move(images));
  }
  return out;
}

std::string atlas_cache_key(const StratAtlas& a) {
  std::string material = std::string(kFormatVersion) + "|" + a.datum_json + "|";
  for (i64 x : a.mu) material += std::to_string(x) + ",";
  material += "|";
  for (const IVec& row : a.sigma_g)
    for (i64 x : row) material += std::to_string(x) + ",";
  material += "|";
  for (int x : a.parahoric.nodes) material += std::to_string(x) + ",";
  return hex(fnv1a(material));
}

void cache_store(const AffineWeyl& w, const StratAtlas& a, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create cache directory " + dir);
  fs::path final_path = fs::path(dir) / (atlas_cache_key(a) + ".json");
  fs::path tmp_path = final_path;
  tmp_path += ".tmp";
  {
    std::ofstream out(tmp_path);
    if (!out) throw std::runtime_error("cannot write " + tmp_path.string());
    out << atlas_to_json(w, a).dump(2) << "\n";
  }
  fs::rename(tmp_path, final_path, ec);
  if (ec) throw std::runtime_error("cannot move cache file into " + final_path.string());
}

std::optional<StratAtlas> cache_load(AffineWeyl& w, const AffineWeyl::Sigma& s,
                                     const CocharClass& mu, const ParahoricType& k,
                                     const std::string& dir) {
  namespace fs = std::filesystem;
  StratAtlas probe;
  probe.datum_json = w.datum().to_json_text();
  probe.mu = mu.mu_dom;
  probe.sigma_g = s.g;
  probe.parahoric = k;
  fs::path path = fs::path(dir) / (atlas_cache_key(probe) + ".json");
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (...) {
    return std::nullopt;
  }
  if (j.value("format", "") != kFormatVersion) return std::nullopt;

  StratAtlas a = probe;
  a.datum_name = w.datum().name();
  auto parse_elt = [&](const std::string& text) {
    auto e = w.parse(text);
    if (!e) throw std::runtime_error("cache file holds an unparsable element");
    return *e;
  };
  auto parse_covers = [](const nlohmann::json& arr) {
    std::vector<std::pair<int, int>> out;
    for (const auto& pair : arr) out.emplace_back(pair.at(0), pair.at(1));
    return out;
  };
  try {
    for (const auto& node : j.at("kr").at("nodes")) {
      KrNode n;
      n.min_rep = parse_elt(node.at("min_rep"));
      n.max_min_rep = parse_elt(node.at("max_min_rep"));
      n.dim = node.at("dim").get<i64>();
      a.kr.push_back(n);
    }
    a.kr_covers = parse_covers(j.at("kr").at("covers"));
    for (const auto& node : j.at("ekor").at("nodes")) {
      EkorNode n;
      n.x = parse_elt(node.at("elt"));
      n.length = node.at("length").get<i64>();
      n.straight = node.at("straight").get<bool>();
      if (!node.at("newton_class").is_null())
        n.newton_idx = node.at("newton_class").get<int>();
      a.ekor.push_back(n);
    }
    a.ekor_covers = parse_covers(j.at("ekor").at("covers"));
    for (const auto& node : j.at("newton").at("nodes")) {
      NewtonNode n;
      for (const auto& q : node.at("nu"))
        n.b.nu.push_back(rat_from_string(q.get<std::string>()));
      n.b.kappa = node.at("kappa").get<IVec>();
      if (!node.at("dim").is_null()) {
        n.dim = rat_from_string(node.at("dim").get<std::string>());
        n.dim_integral = node.at("dim_integral").get<bool>();
      }
      if (!node.at("defect").is_null()) n.defect = node.at("defect").get<i64>();
      n.leaf_dim = rat_from_string(node.at("leaf_dim").get<std::string>());
      a.newton.push_back(n);
    }
    a.newton_covers = parse_covers(j.at("newton").at("covers"));
    a.ekor_to_kr = j.at("maps").at("ekor_to_kr").get<std::vector<int>>();
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const std::exception&) {
    return std::nullopt;  // treat malformed cache entries as misses
  }
  return a;
}

}  // namespace strat
