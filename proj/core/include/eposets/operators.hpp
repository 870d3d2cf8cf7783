#pragma once

// Averaging operators U_i, D_i and their compositions, materialized as dense
// matrices acting on level functions. All adjointness/symmetry notions are
// with respect to the pi-weighted inner product, so "self-adjoint" is tested
// via diag(pi) M = M^T diag(pi), never via M^T = M.

#include <Eigen/Dense>

#include "eposets/poset.hpp"

namespace eposets {

/// A real-valued function on one level X(k).
struct LevelFunction {
  int level = 0;
  Eigen::VectorXd values;
};

/// Dense operator between levels; rows indexed by the target level.
struct LinearMap {
  int from_level = 0;
  int to_level = 0;
  Eigen::MatrixXd m;

  LevelFunction apply(const LevelFunction& f) const {
    if (f.level != from_level) throw LevelMismatchError("operator applied at wrong level");
    return LevelFunction{to_level, m * f.values};
  }
};

/// U_i : C_i -> C_{i+1}, (U_i f)(y) = mean of f over the faces covered by y.
LinearMap up_operator(const GradedPoset& poset, const Measure& measure, int i);

/// D_{i+1} : C_{i+1} -> C_i, the pi-weighted conditional expectation.
LinearMap down_operator(const GradedPoset& poset, const Measure& measure, int i_plus_1);

/// <f,g> = sum_tau pi_k(tau) f(tau) g(tau).
double inner_product(const Measure& measure, const LevelFunction& f, const LevelFunction& g);
double norm(const Measure& measure, const LevelFunction& f);
double expectation(const Measure& measure, const LevelFunction& f);
double variance(const Measure& measure, const LevelFunction& f);

/// U^k_i as the matrix product U_{k-1} ... U_i (identity when i = k).
LinearMap compose_up(const GradedPoset& poset, const Measure& measure, int i, int k);

/// U^k_i built directly as the 1/R(k,i)-normalized containment matrix;
/// middle regularity makes this equal to the product form.
LinearMap compose_up_direct(const GradedPoset& poset, const Measure& measure,
                            const RegularityProfile& reg, int i, int k);

/// D^k_i = D_{i+1} ... D_k (identity when i = k).
LinearMap compose_down(const GradedPoset& poset, const Measure& measure, int k, int i);

/// max_{x,y} |pi(x) M(x,y) - M(y,x) pi(y)|, the weighted self-adjointness defect.
double self_adjointness_defect(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m);

/// max_x |row sum - 1|.
double stochasticity_defect(const Eigen::MatrixXd& m);

/// Similarity transform diag(sqrt pi) M diag(1/sqrt pi), explicitly
/// symmetrized. Shares eigenvalues with M; eigenvectors map back through
/// diag(1/sqrt pi).
Eigen::MatrixXd symmetrized_conjugate(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m);

/// Eigenvalues of a pi-self-adjoint operator, ascending.
Eigen::VectorXd spectrum(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m);

/// Spectral norm of (a general) M with respect to the pi-weighted geometry.
double weighted_spectral_norm(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m);

}  // namespace eposets
