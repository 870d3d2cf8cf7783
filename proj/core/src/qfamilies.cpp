#include "eposets/qfamilies.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace eposets {

namespace {

std::vector<FaceKey> simplicial_facets(const FaceKey& face, int rank) {
  (void)rank;
  std::vector<FaceKey> subs;
  subs.reserve(face.size());
  for (size_t drop = 0; drop < face.size(); ++drop) {
    FaceKey sub;
    sub.reserve(face.size() - 1);
    for (size_t v = 0; v < face.size(); ++v)
      if (v != drop) sub.push_back(face[v]);
    subs.push_back(std::move(sub));
  }
  if (subs.empty()) subs.push_back({});  // rank-1 faces cover the empty face
  return subs;
}

// Hyperplanes of the row space of a canonical basis B (rank x n): one per
// monic functional on the coordinate space, realized as kernel-basis times B.
std::vector<FqMatrix> subspace_facets_of(const FqMatrix& basis) {
  const int q = basis.q();
  const int k = basis.rows();
  const int n = basis.cols();
  std::vector<FqMatrix> result;
  if (k == 0) return result;
  std::vector<std::uint8_t> lambda(static_cast<size_t>(k), 0);
  // Enumerate functionals with first nonzero entry 1.
  for (int pivot = 0; pivot < k; ++pivot) {
    std::vector<int> free_pos;
    for (int j = pivot + 1; j < k; ++j) free_pos.push_back(j);
    std::vector<std::uint8_t> tail(free_pos.size(), 0);
    while (true) {
      std::fill(lambda.begin(), lambda.end(), 0);
      lambda[static_cast<size_t>(pivot)] = 1;
      for (size_t t = 0; t < free_pos.size(); ++t) lambda[static_cast<size_t>(free_pos[t])] = tail[t];
      // Kernel of lambda inside F_q^k: e_j - lambda_j e_pivot for j != pivot.
      FqMatrix sub(q, n);
      for (int j = 0; j < k; ++j) {
        if (j == pivot) continue;
        std::vector<std::uint8_t> row(static_cast<size_t>(n), 0);
        for (int c = 0; c < n; ++c) {
          int v = basis.at(j, c) + (q - lambda[static_cast<size_t>(j)]) * basis.at(pivot, c);
          row[static_cast<size_t>(c)] = static_cast<std::uint8_t>(v % q);
        }
        sub.append_row(row);
      }
      sub.reduce();
      result.push_back(std::move(sub));
      // odometer over the tail entries
      size_t t = free_pos.size();
      while (t > 0) {
        if (++tail[t - 1] < q) break;
        tail[t - 1] = 0;
        --t;
      }
      if (t == 0) break;
    }
  }
  return result;
}

// All k-dimensional subspaces of F_q^n as canonical RREF matrices, ordered
// lexicographically by pivot columns, then by free entries row-major.
std::vector<FqMatrix> enumerate_subspaces(int q, int n, int k) {
  std::vector<FqMatrix> out;
  if (k == 0) {
    out.emplace_back(q, n);
    return out;
  }
  std::vector<int> pivots(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) pivots[static_cast<size_t>(i)] = i;
  while (true) {
    // Free positions: (r, c) with c > pivot[r] and c not itself a pivot.
    std::vector<std::pair<int, int>> free_pos;
    std::set<int> pivot_set(pivots.begin(), pivots.end());
    for (int r = 0; r < k; ++r)
      for (int c = pivots[static_cast<size_t>(r)] + 1; c < n; ++c)
        if (!pivot_set.count(c)) free_pos.emplace_back(r, c);
    std::vector<std::uint8_t> fill(free_pos.size(), 0);
    while (true) {
      FqMatrix m(q, n, std::vector<std::uint8_t>(static_cast<size_t>(k) * n, 0));
      for (int r = 0; r < k; ++r) m.at(r, pivots[static_cast<size_t>(r)]) = 1;
      for (size_t t = 0; t < free_pos.size(); ++t)
        m.at(free_pos[t].first, free_pos[t].second) = fill[t];
      out.push_back(std::move(m));
      size_t t = free_pos.size();
      while (t > 0) {
        if (++fill[t - 1] < q) break;
        fill[t - 1] = 0;
        --t;
      }
      if (t == 0) break;
    }
    // next pivot combination in lexicographic order
    int r = k - 1;
    while (r >= 0 && pivots[static_cast<size_t>(r)] == n - k + r) --r;
    if (r < 0) break;
    ++pivots[static_cast<size_t>(r)];
    for (int s = r + 1; s < k; ++s) pivots[static_cast<size_t>(s)] = pivots[static_cast<size_t>(s) - 1] + 1;
  }
  return out;
}

}  // namespace

FaceKey matrix_to_face(const FqMatrix& m) {
  FaceKey key;
  key.reserve(m.data().size());
  for (std::uint8_t v : m.data()) key.push_back(v);
  return key;
}

FqMatrix face_to_matrix(const GradedPoset& poset, int level, std::uint32_t id) {
  if (poset.kind != FamilyKind::QSimplicial) throw Error("face_to_matrix: not a q-simplicial poset");
  const FaceKey& key = poset.levels[static_cast<size_t>(level)][id];
  std::vector<std::uint8_t> data;
  data.reserve(key.size());
  for (std::uint32_t v : key) data.push_back(static_cast<std::uint8_t>(v));
  return FqMatrix(poset.q, poset.ambient, std::move(data));
}

std::pair<GradedPoset, Measure> hypergraph_closure(int n,
                                                   const std::vector<std::vector<std::uint32_t>>& faces,
                                                   const std::vector<double>& weights) {
  if (faces.empty()) throw EmptyInputError("hypergraph_closure: no faces");
  const size_t rank = faces.front().size();
  WeightedFaces top;
  top.rank = static_cast<int>(rank);
  for (const auto& f : faces) {
    if (f.size() != rank)
      throw MixedRankError("hypergraph_closure: faces of different rank");
    FaceKey key{f.begin(), f.end()};
    std::sort(key.begin(), key.end());
    if (std::adjacent_find(key.begin(), key.end()) != key.end())
      throw Error("hypergraph_closure: repeated vertex in face");
    for (std::uint32_t v : key)
      if (v >= static_cast<std::uint32_t>(n)) throw Error("hypergraph_closure: vertex id out of range");
    top.faces.push_back(std::move(key));
  }
  top.weights = weights;
  auto built = build_downward_closure(top, simplicial_facets, FamilyKind::Simplicial,
                                      "hypergraph-closure");
  built.first.ambient = n;
  return built;
}

std::pair<GradedPoset, Measure> complete_complex(int n, int d) {
  if (d > n || d < 1) throw LevelBoundsError("complete_complex: need 1 <= d <= n");
  if (binomial(n, d) > enumeration_budget())
    throw BudgetExceededError("complete_complex level size " + binomial(n, d).str());
  std::vector<std::vector<std::uint32_t>> faces;
  std::vector<std::uint32_t> face(static_cast<size_t>(d));
  for (int i = 0; i < d; ++i) face[static_cast<size_t>(i)] = static_cast<std::uint32_t>(i);
  while (true) {
    faces.push_back(face);
    int r = d - 1;
    while (r >= 0 && face[static_cast<size_t>(r)] == static_cast<std::uint32_t>(n - d + r)) --r;
    if (r < 0) break;
    ++face[static_cast<size_t>(r)];
    for (int s = r + 1; s < d; ++s) face[static_cast<size_t>(s)] = face[static_cast<size_t>(s) - 1] + 1;
  }
  auto built = hypergraph_closure(n, faces, std::vector<double>(faces.size(), 1.0));
  built.first.family = "complete";
  built.first.ambient = n;
  return built;
}

std::pair<GradedPoset, Measure> grassmann_poset(int q, int n, int d) {
  if (!is_prime(q)) throw NonPrimeQError("grassmann_poset: q = " + std::to_string(q) + " is not prime");
  if (d > n || d < 1) throw LevelBoundsError("grassmann_poset: need 1 <= d <= n");
  for (int k = 0; k <= d; ++k) {
    BigInt size = gaussian_binomial(n, k, q);
    if (size > enumeration_budget())
      throw BudgetExceededError("grassmann_poset level " + std::to_string(k) + " has " +
                                size.str() + " elements");
  }

  GradedPoset poset;
  poset.d = d;
  poset.kind = FamilyKind::QSimplicial;
  poset.q = q;
  poset.ambient = n;
  poset.family = "grassmann";
  poset.levels.assign(static_cast<size_t>(d) + 1, {});
  poset.covers.assign(static_cast<size_t>(d) + 1, {});

  std::vector<std::map<FaceKey, std::uint32_t>> index(static_cast<size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    auto spaces = enumerate_subspaces(q, n, k);
    if (BigInt(static_cast<long>(spaces.size())) != gaussian_binomial(n, k, q))
      throw Error("subspace enumeration does not match the Gaussian binomial");
    for (std::uint32_t id = 0; id < spaces.size(); ++id) {
      FaceKey key = matrix_to_face(spaces[id]);
      index[static_cast<size_t>(k)].emplace(key, id);
      poset.levels[static_cast<size_t>(k)].push_back(std::move(key));
    }
  }
  for (int k = 1; k <= d; ++k) {
    auto& cv = poset.covers[static_cast<size_t>(k)];
    cv.resize(poset.levels[static_cast<size_t>(k)].size());
    for (std::uint32_t x = 0; x < cv.size(); ++x) {
      FqMatrix basis = face_to_matrix(poset, k, x);
      std::set<std::uint32_t> covered;
      for (const FqMatrix& sub : subspace_facets_of(basis))
        covered.insert(index[static_cast<size_t>(k) - 1].at(matrix_to_face(sub)));
      cv[x].assign(covered.begin(), covered.end());
    }
  }
  poset.build_ups();
  poset.validate();

  Eigen::VectorXd pi_d = Eigen::VectorXd::Constant(poset.level_size(d),
                                                   1.0 / poset.level_size(d));
  Measure measure = induce_measure(poset, pi_d);
  measure.source = "uniform";
  return {std::move(poset), std::move(measure)};
}

std::pair<GradedPoset, Measure> subspace_closure(int q, int n,
                                                 const std::vector<FqMatrix>& spaces,
                                                 const std::vector<double>& weights) {
  if (!is_prime(q)) throw NonPrimeQError("subspace_closure: q must be prime");
  if (spaces.empty()) throw EmptyInputError("subspace_closure: no spaces");
  WeightedFaces top;
  top.rank = spaces.front().rows();
  for (const auto& s : spaces) {
    if (s.rows() != top.rank) throw MixedRankError("subspace_closure: mixed dimensions");
    if (s.q() != q || s.cols() != n) throw DimensionMismatchError("subspace_closure: bad matrix shape");
    FqMatrix canon = s;
    canon.reduce();
    if (canon.rows() != top.rank) throw Error("subspace_closure: dependent basis rows");
    top.faces.push_back(matrix_to_face(canon));
  }
  top.weights = weights;
  FacetRule rule = [q, n](const FaceKey& key, int rank) {
    std::vector<std::uint8_t> data(key.begin(), key.end());
    FqMatrix basis(q, n, std::move(data));
    (void)rank;
    std::vector<FaceKey> subs;
    for (const FqMatrix& sub : subspace_facets_of(basis)) subs.push_back(matrix_to_face(sub));
    if (subs.empty()) subs.push_back({});
    return subs;
  };
  auto built = build_downward_closure(top, rule, FamilyKind::QSimplicial, "subspace-closure");
  built.first.q = q;
  built.first.ambient = n;
  return built;
}

Measure perturbed_measure(const GradedPoset& poset, const Measure& measure, double rho,
                          std::uint64_t seed) {
  if (rho < 0.0 || rho >= 1.0) throw Error("perturbed_measure: need 0 <= rho < 1");
  std::mt19937_64 rng(seed);
  Eigen::VectorXd pi_d = measure.pi[static_cast<size_t>(poset.d)];
  for (long x = 0; x < pi_d.size(); ++x) {
    // 53-bit uniform in [0,1); kept explicit for bit-reproducibility.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    pi_d[x] *= 1.0 + rho * (2.0 * u - 1.0);
  }
  pi_d /= pi_d.sum();
  Measure out = induce_measure(poset, pi_d);
  std::ostringstream src;
  src << measure.source << "+rho=" << rho << ",seed=" << seed;
  out.source = src.str();
  return out;
}

double grassmann_delta(int i, int n, int q) {
  if (i < 1 || i > n - 1) throw LevelBoundsError("grassmann_delta: need 1 <= i <= n-1");
  const BigInt num = (q_power(q, i) - 1) * (q_power(q, n - i + 1) - 1);
  const BigInt den = (q_power(q, i + 1) - 1) * (q_power(q, n - i) - 1);
  return to_double(num) / to_double(den);
}

double qeposet_delta(int i, int q) {
  if (i < 1) throw LevelBoundsError("qeposet_delta: need i >= 1");
  return static_cast<double>(q) * to_double(q_power(q, i) - 1) / to_double(q_power(q, i + 1) - 1);
}

double complete_complex_delta(int i, int n) {
  if (i < 1 || i > n - 1) throw LevelBoundsError("complete_complex_delta: need 1 <= i <= n-1");
  return static_cast<double>(i) * (n - i + 1) / (static_cast<double>(i + 1) * (n - i));
}

double colink_density(int q, int d, int i, int j, int k) {
  if (!(0 <= j && j <= i && i <= k && k <= d))
    throw LevelBoundsError("colink_density: need 0 <= j <= i <= k <= d");
  if (d - k + 1 - i < 0) throw LevelBoundsError("colink_density: co-link too small");
  double alpha = 1.0;
  for (int t = 0; t < k - j; ++t)
    alpha *= to_double(q_power(q, d - i - j - t) - 1) / to_double(q_power(q, d - j - t) - 1);
  return alpha;
}

}  // namespace eposets
