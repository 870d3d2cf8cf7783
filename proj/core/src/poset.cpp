#include "eposets/poset.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "eposets/operators.hpp"

namespace eposets {

void GradedPoset::build_ups() {
  ups.assign(static_cast<size_t>(d) + 1, {});
  for (int i = 0; i <= d; ++i) ups[static_cast<size_t>(i)].resize(levels[static_cast<size_t>(i)].size());
  for (int i = 1; i <= d; ++i) {
    const auto& cv = covers[static_cast<size_t>(i)];
    for (std::uint32_t x = 0; x < cv.size(); ++x)
      for (std::uint32_t y : cv[x]) ups[static_cast<size_t>(i) - 1][y].push_back(x);
  }
}

void GradedPoset::validate() const {
  if (d < 1) throw InvalidPosetError("poset must have d >= 1");
  if (levels.size() != static_cast<size_t>(d) + 1 || covers.size() != static_cast<size_t>(d) + 1)
    throw InvalidPosetError("levels/covers tables must span ranks 0..d");
  if (levels[0].size() != 1) throw InvalidPosetError("poset must have a unique minimal element");
  for (int i = 1; i <= d; ++i) {
    const auto& cv = covers[static_cast<size_t>(i)];
    if (cv.size() != levels[static_cast<size_t>(i)].size())
      throw InvalidPosetError("covers table size mismatch at level " + std::to_string(i));
    for (const auto& below_ids : cv) {
      if (below_ids.empty())
        throw InvalidPosetError("element with no covered face at level " + std::to_string(i));
      for (std::uint32_t y : below_ids)
        if (y >= levels[static_cast<size_t>(i) - 1].size())
          throw InvalidPosetError("cover edge to nonexistent element at level " + std::to_string(i));
    }
  }
  // Purity: every non-top element is covered by something one level up.
  if (ups.empty()) throw InvalidPosetError("ups not built");
  for (int i = 0; i < d; ++i)
    for (const auto& parents : ups[static_cast<size_t>(i)])
      if (parents.empty())
        throw InvalidPosetError("non-maximal element at level " + std::to_string(i) +
                                " violates purity");
}

std::vector<std::uint32_t> GradedPoset::below(int k, std::uint32_t x, int i) const {
  if (i > k) return {};
  std::set<std::uint32_t> frontier{x};
  for (int lvl = k; lvl > i; --lvl) {
    std::set<std::uint32_t> next;
    for (std::uint32_t e : frontier)
      for (std::uint32_t y : covers[static_cast<size_t>(lvl)][e]) next.insert(y);
    frontier = std::move(next);
  }
  return {frontier.begin(), frontier.end()};
}

std::vector<std::uint32_t> GradedPoset::above(int i, std::uint32_t x, int k) const {
  if (k < i) return {};
  std::set<std::uint32_t> frontier{x};
  for (int lvl = i; lvl < k; ++lvl) {
    std::set<std::uint32_t> next;
    for (std::uint32_t e : frontier)
      for (std::uint32_t y : ups[static_cast<size_t>(lvl)][e]) next.insert(y);
    frontier = std::move(next);
  }
  return {frontier.begin(), frontier.end()};
}

std::pair<GradedPoset, Measure> build_downward_closure(const WeightedFaces& top,
                                                       const FacetRule& facets,
                                                       FamilyKind kind,
                                                       std::string family_name) {
  if (top.faces.empty()) throw EmptyInputError("no top faces given");
  if (top.faces.size() != top.weights.size())
    throw DimensionMismatchError("weights count does not match face count");
  double total = 0.0;
  for (double w : top.weights) {
    if (w < 0.0) throw Error("negative face weight");
    total += w;
  }
  if (total <= 0.0) throw AllZeroWeightsError("all face weights are zero");

  GradedPoset poset;
  poset.d = top.rank;
  poset.kind = kind;
  poset.family = std::move(family_name);
  poset.levels.assign(static_cast<size_t>(top.rank) + 1, {});
  poset.covers.assign(static_cast<size_t>(top.rank) + 1, {});

  // Keep only positive-weight tops; everything in their closure then carries
  // positive induced mass, which the D operators require.
  std::map<FaceKey, std::uint32_t> top_ids;
  std::vector<double> top_weights;
  for (size_t f = 0; f < top.faces.size(); ++f) {
    if (top.weights[f] <= 0.0) continue;
    auto [it, fresh] = top_ids.emplace(top.faces[f], static_cast<std::uint32_t>(top_ids.size()));
    if (fresh) {
      poset.levels[static_cast<size_t>(top.rank)].push_back(top.faces[f]);
      top_weights.push_back(top.weights[f]);
    } else {
      top_weights[it->second] += top.weights[f];
    }
  }

  // Close downward one level at a time, deduplicating by face key.
  for (int lvl = top.rank; lvl >= 1; --lvl) {
    std::map<FaceKey, std::uint32_t> next_ids;
    auto& cv = poset.covers[static_cast<size_t>(lvl)];
    cv.resize(poset.levels[static_cast<size_t>(lvl)].size());
    for (std::uint32_t x = 0; x < poset.levels[static_cast<size_t>(lvl)].size(); ++x) {
      std::vector<FaceKey> subs = facets(poset.levels[static_cast<size_t>(lvl)][x], lvl);
      if (subs.empty()) throw InvalidPosetError("face with no facets above rank 0");
      std::set<std::uint32_t> covered;
      for (auto& s : subs) {
        auto [it, fresh] = next_ids.emplace(s, static_cast<std::uint32_t>(next_ids.size()));
        if (fresh) poset.levels[static_cast<size_t>(lvl) - 1].push_back(std::move(s));
        covered.insert(it->second);
      }
      cv[x].assign(covered.begin(), covered.end());
    }
  }
  if (poset.levels[0].size() != 1)
    throw InvalidPosetError("closure did not terminate in a unique minimal element");

  poset.build_ups();
  poset.validate();

  Eigen::VectorXd pi_d(static_cast<long>(top_weights.size()));
  for (size_t f = 0; f < top_weights.size(); ++f) pi_d[static_cast<long>(f)] = top_weights[f];
  pi_d /= pi_d.sum();
  Measure measure = induce_measure(poset, pi_d);
  measure.source = "closure-weights";
  return {std::move(poset), std::move(measure)};
}

RegularityProfile regularity_profile(const GradedPoset& poset) {
  const int d = poset.d;
  RegularityProfile prof;
  prof.d = d;
  prof.R1.assign(static_cast<size_t>(d) + 1, 0);
  for (int i = 1; i <= d; ++i) {
    const auto& cv = poset.covers[static_cast<size_t>(i)];
    size_t deg = cv.front().size();
    for (std::uint32_t x = 0; x < cv.size(); ++x)
      if (cv[x].size() != deg)
        throw NotDownwardRegularError("level " + std::to_string(i) + ": element " +
                                      std::to_string(x) + " has down-degree " +
                                      std::to_string(cv[x].size()) + " versus " +
                                      std::to_string(deg));
    prof.R1[static_cast<size_t>(i)] = static_cast<long>(deg);
  }

  prof.m.assign(static_cast<size_t>(d) + 1, {});
  prof.R.assign(static_cast<size_t>(d) + 1, {});
  for (int k = 0; k <= d; ++k) {
    prof.m[static_cast<size_t>(k)].assign(static_cast<size_t>(k) + 1, 1);
    prof.R[static_cast<size_t>(k)].assign(static_cast<size_t>(k) + 1, 1);
  }

  // Chain counts by downward DP from each x in X(k); middle regularity holds
  // iff the count is identical over every comparable pair at each (k, i).
  for (int k = 1; k <= d; ++k) {
    for (int i = 0; i < k; ++i) {
      BigInt chain_count = -1;
      BigInt below_count = -1;
      for (std::uint32_t x = 0; x < poset.levels[static_cast<size_t>(k)].size(); ++x) {
        std::vector<BigInt> paths(poset.levels[static_cast<size_t>(k)].size(), 0);
        paths[x] = 1;
        for (int lvl = k; lvl > i; --lvl) {
          std::vector<BigInt> next(poset.levels[static_cast<size_t>(lvl) - 1].size(), 0);
          for (std::uint32_t e = 0; e < paths.size(); ++e) {
            if (paths[e] == 0) continue;
            for (std::uint32_t y : poset.covers[static_cast<size_t>(lvl)][e]) next[y] += paths[e];
          }
          paths = std::move(next);
        }
        BigInt nonzero = 0;
        for (std::uint32_t y = 0; y < paths.size(); ++y) {
          if (paths[y] == 0) continue;
          ++nonzero;
          if (chain_count < 0)
            chain_count = paths[y];
          else if (paths[y] != chain_count)
            throw NotMiddleRegularError("m(" + std::to_string(k) + "," + std::to_string(i) +
                                        ") differs across pairs: element " + std::to_string(x) +
                                        " over " + std::to_string(y));
        }
        if (below_count < 0)
          below_count = nonzero;
        else if (nonzero != below_count)
          throw NotMiddleRegularError("R(" + std::to_string(k) + "," + std::to_string(i) +
                                      ") differs across elements at id " + std::to_string(x));
      }
      prof.m[static_cast<size_t>(k)][static_cast<size_t>(i)] = chain_count;
      prof.R[static_cast<size_t>(k)][static_cast<size_t>(i)] = below_count;
    }
  }

  // Cross-check the closed form R(k,i) = prod_{j=i+1}^k R(j) / m(k,i).
  for (int k = 1; k <= d; ++k)
    for (int i = 0; i < k; ++i) {
      BigInt prod = 1;
      for (int j = i + 1; j <= k; ++j) prod *= prof.R1[static_cast<size_t>(j)];
      if (prod % prof.m[static_cast<size_t>(k)][static_cast<size_t>(i)] != 0 ||
          prod / prof.m[static_cast<size_t>(k)][static_cast<size_t>(i)] !=
              prof.R[static_cast<size_t>(k)][static_cast<size_t>(i)])
        throw NotMiddleRegularError("chain/regularity identity failed at (" + std::to_string(k) +
                                    "," + std::to_string(i) + ")");
    }
  return prof;
}

const BigInt& RegularityProfile::r(int k, int i) const {
  static const BigInt zero = 0;
  if (i > k) return zero;
  return R[static_cast<size_t>(k)][static_cast<size_t>(i)];
}

double RegularityProfile::r_d(int k, int i) const { return to_double(r(k, i)); }

BigInt RegularityProfile::r_max(int k) const {
  BigInt mx = 0;
  for (int i = 0; i <= k; ++i) mx = std::max(mx, r(k, i));
  return mx;
}

Measure induce_measure(const GradedPoset& poset, const Eigen::VectorXd& pi_d) {
  const int d = poset.d;
  if (pi_d.size() != poset.level_size(d))
    throw DimensionMismatchError("pi_d length does not match |X(d)|");
  if (std::abs(pi_d.sum() - 1.0) > 1e-12) throw NotNormalizedError("pi_d does not sum to 1");

  Measure measure;
  measure.pi.assign(static_cast<size_t>(d) + 1, {});
  measure.pi[static_cast<size_t>(d)] = pi_d;
  for (int i = d - 1; i >= 0; --i) {
    const auto& cv = poset.covers[static_cast<size_t>(i) + 1];
    const double r_down = static_cast<double>(cv.front().size());
    Eigen::VectorXd pi = Eigen::VectorXd::Zero(poset.level_size(i));
    const Eigen::VectorXd& up = measure.pi[static_cast<size_t>(i) + 1];
    for (std::uint32_t y = 0; y < cv.size(); ++y)
      for (std::uint32_t x : cv[y]) pi[x] += up[static_cast<long>(y)];
    pi /= r_down;
    for (long x = 0; x < pi.size(); ++x)
      if (pi[x] <= 0.0)
        throw ZeroMassError("element " + std::to_string(x) + " at level " + std::to_string(i) +
                            " carries zero mass");
    measure.pi[static_cast<size_t>(i)] = std::move(pi);
  }
  measure.source = "induced";
  return measure;
}

LazinessReport non_laziness(const GradedPoset& poset, const Measure& measure, int i) {
  if (i < 1 || i > poset.d) throw LevelBoundsError("non_laziness: level out of range");
  LinearMap up = up_operator(poset, measure, i - 1);
  LinearMap down = down_operator(poset, measure, i);
  Eigen::MatrixXd walk = up.m * down.m;
  LazinessReport rep;
  for (long x = 0; x < walk.rows(); ++x) {
    if (walk(x, x) > rep.beta) {
      rep.beta = walk(x, x);
      rep.argmax_id = static_cast<std::uint32_t>(x);
    }
  }
  rep.max_transition = walk.maxCoeff();
  return rep;
}

std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("EPOSET_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 200000;
}

}  // namespace eposets
