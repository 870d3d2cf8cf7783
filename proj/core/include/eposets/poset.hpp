#pragma once

// Pure, regular, measured graded posets with a unique minimal element.
// Levels X(0)..X(d) hold face descriptors; cover relations connect adjacent
// levels only. Rank 0 is the unique minimum (empty face / zero subspace), so
// a simplicial face with k vertices and a k-dimensional subspace both sit at
// rank k.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eposets/errors.hpp"
#include "eposets/qcomb.hpp"

namespace eposets {

/// Family-specific face encoding. Simplicial: sorted vertex ids.
/// q-simplicial: RREF basis entries flattened row-major (row count = rank).
using FaceKey = std::vector<std::uint32_t>;

enum class FamilyKind { Simplicial, QSimplicial, Custom };

struct GradedPoset {
  int d = 0;
  FamilyKind kind = FamilyKind::Custom;
  int q = 0;        // field size, q-simplicial only
  int ambient = 0;  // ambient dimension n (q-simplicial) / vertex count (simplicial)
  std::string family;

  std::vector<std::vector<FaceKey>> levels;  // levels[i], i = 0..d
  /// covers[i][x] = sorted ids of elements of X(i-1) covered by x in X(i); covers[0] empty.
  std::vector<std::vector<std::vector<std::uint32_t>>> covers;
  /// ups[i][x] = sorted ids of elements of X(i+1) covering x in X(i); ups[d] empty.
  std::vector<std::vector<std::vector<std::uint32_t>>> ups;

  int level_size(int i) const { return static_cast<int>(levels.at(static_cast<size_t>(i)).size()); }

  /// Fills ups from covers.
  void build_ups();

  /// Checks |X(0)| = 1, purity, rank consistency of cover ids.
  void validate() const;

  /// Ids of all rank-i elements below x in X(k) (i <= k).
  std::vector<std::uint32_t> below(int k, std::uint32_t x, int i) const;
  /// Ids of all rank-k elements above x in X(i) (i <= k).
  std::vector<std::uint32_t> above(int i, std::uint32_t x, int k) const;
};

/// Per-level distributions pi_0..pi_d induced from the top level.
struct Measure {
  std::vector<Eigen::VectorXd> pi;
  std::string source;
};

/// Down-degrees R(i), chain counts m(k,i) and the extended regularity table
/// R(k,i) = prod R(j) / m(k,i), all exact integers.
struct RegularityProfile {
  int d = 0;
  std::vector<BigInt> R1;             // R1[i] = R(i), i = 1..d; R1[0] unused
  std::vector<std::vector<BigInt>> m; // m[k][i], 0 <= i <= k <= d
  std::vector<std::vector<BigInt>> R; // R[k][i]; R(i,i)=1, R(j,i)=0 for j<i

  const BigInt& r(int k, int i) const;
  double r_d(int k, int i) const;
  BigInt r_max(int k) const;
};

/// Top-level faces with weights; all faces must have the same rank d.
struct WeightedFaces {
  int rank = 0;
  std::vector<FaceKey> faces;
  std::vector<double> weights;
};

/// Returns the codimension-1 sub-faces of a face; rank reaches 0 at the
/// unique minimal key (empty face).
using FacetRule = std::function<std::vector<FaceKey>(const FaceKey&, int rank)>;

/// Downward closure of weighted top faces under a facet rule. Faces with zero
/// weight are dropped before closure, so every element keeps positive mass.
std::pair<GradedPoset, Measure> build_downward_closure(const WeightedFaces& top,
                                                       const FacetRule& facets,
                                                       FamilyKind kind,
                                                       std::string family_name);

/// Exhaustively verifies downward and middle regularity and builds the table.
RegularityProfile regularity_profile(const GradedPoset& poset);

/// Induces pi_i(x) = (1/R(i+1,i)) sum_{y covering x} pi_{i+1}(y) from pi_d.
Measure induce_measure(const GradedPoset& poset, const Eigen::VectorXd& pi_d);

/// Laziness of the lower walk at level i: max return probability, together
/// with the max transition probability (equal by the anti-concentration
/// identity; checked by callers/tests).
struct LazinessReport {
  double beta = 0.0;            // max diagonal of U_{i-1} D_i
  double max_transition = 0.0;  // max entry of U_{i-1} D_i
  std::uint32_t argmax_id = 0;
};

LazinessReport non_laziness(const GradedPoset& poset, const Measure& measure, int i);

/// Largest level size allowed during enumeration; EPOSET_BUDGET overrides.
std::uint64_t enumeration_budget();

}  // namespace eposets
