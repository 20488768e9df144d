#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stratlas/partial_conj.hpp"

// The stratification atlas of one (datum, μ, σ, K): the double-coset poset,
// the refinement poset on Adm ∩ ᴷW̃, the Newton poset, the maps between
// them, and the predicted dimensions. Plus JSON/DOT serialization and a
// content-addressed disk cache.

namespace strat {

struct KrNode {
  AffineWeyl::Elt min_rep;
  AffineWeyl::Elt max_min_rep;
  i64 dim;  // length of max_min_rep
};

struct EkorNode {
  AffineWeyl::Elt x;
  i64 length;  // the predicted stratum dimension
  bool straight;
  std::optional<int> newton_idx;  // straight indices only
};

struct NewtonNode {
  NewtonPair b;
  std::optional<i64> defect;
  std::optional<Rat> dim;  // needs the defect
  bool dim_integral = true;
  Rat leaf_dim;
};

struct StratAtlas {
  // construction inputs, for serialization and cache identity
  std::string datum_json;
  std::string datum_name;
  IVec mu;
  IMat sigma_g;
  ParahoricType parahoric;

  std::vector<KrNode> kr;
  std::vector<std::pair<int, int>> kr_covers;  // (lower, upper)
  std::vector<EkorNode> ekor;
  std::vector<std::pair<int, int>> ekor_covers;
  std::vector<NewtonNode> newton;
  std::vector<std::pair<int, int>> newton_covers;

  std::vector<int> ekor_to_kr;  // node index map

  bool same_content(const StratAtlas& o, const AffineWeyl& w) const;
};

struct AtlasOptions {
  bool verify = false;  // run the cross-checking oracles during the build
};

StratAtlas build_atlas(AffineWeyl& w, const AffineWeyl::Sigma& s,
                       const CocharClass& mu, const ParahoricType& k,
                       const AtlasOptions& opts = {});

nlohmann::ordered_json atlas_to_json(const AffineWeyl& w, const StratAtlas& a);
std::string atlas_to_dot(const AffineWeyl& w, const StratAtlas& a);

// π_{K',K} on index sets for K' ⊆ K: each EKOR index of the finer level is
// sent to Σ_K of it; entries are node indices into coarse.ekor.
std::vector<std::vector<int>> change_parahoric(AffineWeyl& w,
                                               const AffineWeyl::Sigma& s,
                                               const StratAtlas& fine,
                                               const StratAtlas& coarse);

// Content-addressed cache keyed on the construction inputs and the format
// version. Returns the key used.
std::string atlas_cache_key(const StratAtlas& a);
void cache_store(const AffineWeyl& w, const StratAtlas& a, const std::string& dir);
std::optional<StratAtlas> cache_load(AffineWeyl& w, const AffineWeyl::Sigma& s,
                                     const CocharClass& mu, const ParahoricType& k,
                                     const std::string& dir);

// Covers of an arbitrary relation: transitive reduction of its strict part.
std::vector<std::pair<int, int>> hasse_covers(
    int n, const std::vector<std::pair<int, int>>& leq_pairs);

}  // namespace strat
