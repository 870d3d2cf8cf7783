#pragma once

// Higher-order walks: balanced U/D words, their affine combinations, canonical
// walks, and partial-swap walks on q-simplicial complexes (built both by
// restriction and by q-binomial inversion).

#include <memory>
#include <string>
#include <vector>

#include "eposets/context.hpp"
#include "eposets/qcomb.hpp"

namespace eposets {

enum class Step : std::uint8_t { Up, Down };

/// A balanced U/D word at level k. word[0] is applied first (rightmost
/// operator of the composition); down positions are counted in application
/// order starting from 1.
struct PureWalkDescriptor {
  int level = 0;
  std::vector<Step> word;

  int height() const;
  std::vector<int> down_positions() const;
  /// Balanced, and intermediate levels stay inside [0, d].
  bool valid(int d) const;
  std::string to_string() const;
};

/// Upper canonical walk word: j ups then j downs.
PureWalkDescriptor canonical_up_descriptor(int k, int j);
/// Lower canonical walk word: j downs then j ups (down positions 1..j).
PureWalkDescriptor canonical_down_descriptor(int k, int j);

struct WalkTerm {
  double coeff = 1.0;
  PureWalkDescriptor walk;
};

/// A stochastic, pi-self-adjoint affine combination of pure walks on C_k.
/// Combinations failing stochasticity or self-adjointness are representable
/// but flagged; only validated walks feed the expansion analysis.
struct HDWalk {
  int level = 0;
  std::vector<WalkTerm> terms;
  Eigen::MatrixXd matrix;
  int height = 0;     // max pure height with alpha != 0
  double weight = 0;  // sum |alpha_Y|
  std::string name;

  bool stochastic = false;
  bool self_adjoint = false;
  double stochastic_defect = 0.0;
  double min_entry = 0.0;
  double self_adjoint_defect = 0.0;

  bool validated() const { return stochastic && self_adjoint; }
};

/// Realizes the word as a matrix product of averaging operators.
Eigen::MatrixXd realize_pure_walk(const PosetContext& ctx, const PureWalkDescriptor& desc);

/// Affine combination of pure walks (coefficients must sum to 1 within 1e-12).
HDWalk hd_walk(const PosetContext& ctx, std::vector<WalkTerm> terms, std::string name = {});

HDWalk identity_walk(const PosetContext& ctx, int k);
/// Upper canonical walk through level k+j and back.
HDWalk canonical_up(const PosetContext& ctx, int k, int j);
/// Lower canonical walk through level k-j and back.
HDWalk canonical_down(const PosetContext& ctx, int k, int j);

/// Partial-swap walk by restriction: zero all transitions whose subspace
/// intersection exceeds dimension k-j, then renormalize rows. Throws
/// EmptySupportError naming the offending face if a row loses all support.
HDWalk swap_walk_restriction(const PosetContext& ctx, int k, int j);

/// Partial-swap walk as the alternating q-binomial combination of the upper
/// canonical walks of heights 0..j.
HDWalk swap_walk_inversion(const PosetContext& ctx, int k, int j);

/// Forward map a_j = sum_{i=1}^{j} (-1)^i (j choose i)_q b_i.
std::vector<BigInt> q_binomial_forward(const std::vector<BigInt>& b, long q);
/// Inverse map b_j = sum_{i=1}^{j} (-1)^i q^{C(j-i,2)} (j choose i)_q a_i.
std::vector<BigInt> q_binomial_inversion(const std::vector<BigInt>& a, long q);

/// Walk descriptor grammar: "N:k=2,j=1" (upper canonical), "Nd:k=3,j=2"
/// (lower canonical), "S:k=2,j=1" (partial swap), "UD:k=2" (lower walk),
/// "I:k=2" (identity), "mix:[0.5*N:k=2,j=1;0.5*I]".
HDWalk parse_walk(const PosetContext& ctx, const std::string& descriptor);

/// Cached variants (cache key carries the construction route).
std::shared_ptr<const HDWalk> get_walk(const PosetContext& ctx, const std::string& descriptor);

}  // namespace eposets
