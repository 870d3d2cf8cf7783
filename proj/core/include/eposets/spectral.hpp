#pragma once

// Eposet parameter estimation, closed-form approximate eigenvalues of
// higher-order walks, the level-set decomposition of C_k, eigenstrip
// verification, and the regularity/spectrum comparisons.

#include <optional>
#include <string>
#include <vector>

#include "eposets/context.hpp"
#include "eposets/walks.hpp"

namespace eposets {

/// The vector delta_1..delta_{d-1} and residual gamma of the two-sided
/// upper/lower walk relation, plus the derived quantities used throughout.
/// delta[0] is pinned to 0 so that constants always get eigenvalue 1.
struct EposetParams {
  int d = 0;
  Eigen::VectorXd delta;                // index i = 0..d-1, delta[0] = 0
  double gamma = 0.0;
  std::vector<double> per_level_gamma;  // residual at levels 1..d-1

  bool empty() const { return d < 2; }

  /// delta^m_j = prod_{i=m-j}^{m} delta_i (1 when j < 0).
  double delta_pow(int m, int j) const;
  /// gamma^k_j = gamma * sum_{i=-1}^{j-1} delta^k_i.
  double gamma_pow(int k, int j) const;
  /// rho^k_ell = prod_{i=1}^{k-ell} (1 - delta^{k-i}_{k-ell-i}).
  double rho(int k, int ell) const;
  double rho_min(int k) const;
};

/// argmin over delta in [0,1] of the weighted spectral norm of
/// D_{i+1}U_i - (1-delta) I - delta U_{i-1}D_i, per level; gamma is the worst
/// residual. Ternary search to 1e-10 (the norm is convex in delta).
EposetParams estimate_eposet_params(const PosetContext& ctx);

/// Residual norms of the two-sided relation at a supplied delta vector
/// (delta indexed 1..d-1 in positions 1..d-1).
std::vector<double> eposet_residuals(const PosetContext& ctx, const Eigen::VectorXd& delta);

/// Closed-form parameter vectors (gamma = 0 families).
EposetParams grassmann_params(int q, int n, int d);
EposetParams qeposet_params(int q, int d);
EposetParams complete_complex_params(int n, int d);

/// Approximate eigenvalue of a pure balanced walk on the ell-th component:
/// the product over down positions i_s of (1 - delta^{k-2s+i_s}_{k-2s+i_s-ell}).
double pure_walk_eigenvalue(const PureWalkDescriptor& desc, const EposetParams& params, int ell);

/// lambda_ell(M) = sum_Y alpha_Y lambda_{Y,delta,ell} with strip radius
/// c_ell = slack (h+k) h R(k,ell) w(M) gamma.
struct WalkEigenvalues {
  Eigen::VectorXd lambda;  // ell = 0..k
  Eigen::VectorXd radius;
  bool monotonic = false;  // lambda_0 >= lambda_1 >= ...
};
WalkEigenvalues hd_walk_eigenvalues(const PosetContext& ctx, const HDWalk& walk,
                                    const EposetParams& params, double slack = 10.0);

/// Exact Grassmann closed forms (gamma = 0), for cross-checking:
/// upper canonical walk on G_q(n, .) at level k of height j, component ell.
double grassmann_canonical_eigenvalue(int q, int n, int k, int j, int ell);
/// Partial-swap walk eigenvalue via the inversion combination.
double grassmann_swap_eigenvalue(int q, int n, int k, int j, int ell);
/// The n-independent q-expanding-poset swap form (k-j choose ell)_q / (k choose ell)_q.
double qeposet_swap_eigenvalue(int q, int k, int j, int ell);

/// f restricted to its unique per-level components: f = sum_i U^k_i g_i with
/// g_i in Ker(D_i).
struct Decomposition {
  int level = 0;
  std::vector<LevelFunction> components;  // f_i at level k
  std::vector<LevelFunction> witnesses;   // g_i at level i
  double recomposition_residual = 0.0;    // ||f - sum f_i|| / ||f||
  std::vector<double> witness_residuals;  // ||D_i g_i|| / ||g_i||
};

/// Kernel bases of the down operators and the stacked lifted solver, cached
/// per (instance, level). Singular values below cutoff * sigma_max count as
/// zero when extracting Ker(D_i).
class LevelDecomposer {
 public:
  LevelDecomposer(const PosetContext& ctx, int k, double svd_cutoff = 1e-10);

  int level() const { return k_; }
  int dim(int i) const { return dims_.at(static_cast<size_t>(i)); }
  int total_dim() const;

  Decomposition decompose(const LevelFunction& f) const;

  /// Weighted-orthonormal basis of the lifted block V^i (columns, in sqrt(pi)
  /// coordinates); used for principal angle reports.
  const Eigen::MatrixXd& block_basis(int i) const { return blocks_.at(static_cast<size_t>(i)); }

 private:
  const PosetContext& ctx_;
  int k_;
  std::vector<int> dims_;
  std::vector<Eigen::MatrixXd> blocks_;     // sqrt(pi)-coordinates, orthonormal columns
  std::vector<Eigen::MatrixXd> witnesses_;  // kernel basis * R^{-1}, per block
  Eigen::MatrixXd stacked_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
  Eigen::VectorXd sqrt_pi_;
};

/// Spectrum containment in strips [lambda_i +- c_i], per-strip multiplicities
/// against the decomposition dimensions, stripped-threshold rank over a grid
/// of eta, and principal angles between eigenstrips and lifted components.
struct StripReport {
  std::string walk;
  int level = 0;
  double gamma = 0.0;
  double slack = 0.0;
  Eigen::VectorXd lambda;            // strip centers, descending
  Eigen::VectorXd radius;
  std::vector<int> expected_count;   // dim V^i per strip
  std::vector<int> found_count;      // eigenvalues assigned per strip
  Eigen::VectorXd eigenvalues;       // true spectrum, ascending
  bool disjoint = false;
  bool contained = false;
  double max_deviation = 0.0;        // worst |mu - nearest lambda|
  double slack_needed = 0.0;         // minimal slack multiplier for containment
  std::vector<std::pair<double, int>> st_rank;  // (eta, R_eta)
  std::vector<double> principal_angles;         // per strip, report-only

  int st_rank_at(double eta) const;
};

StripReport verify_eigenstripping(const PosetContext& ctx, const HDWalk& walk,
                                  const EposetParams& params, const LevelDecomposer& decomposer,
                                  double slack = 10.0);

/// Tabulates the regularity-ratio predictions against the closed-form
/// approximate eigenvalues and rho, with the laziness-scale tolerance.
struct RegularitySpectrumRow {
  std::string quantity;
  double value = 0.0;
  double reference = 0.0;
  double gap = 0.0;
};
struct RegularitySpectrumReport {
  int k = 0;
  int i = 0;
  double beta = 0.0;  // max lower-walk laziness over the touched levels
  std::vector<RegularitySpectrumRow> rows;
  bool ok = false;    // every gap <= slack * beta
};
RegularitySpectrumReport verify_regularity_spectrum(const PosetContext& ctx,
                                                    const EposetParams& params, int k, int i,
                                                    double slack = 10.0);

/// Component norm-sum bound, norm transfer ratio against rho, and cross-term
/// orthogonality residuals for one decomposed function.
struct NormSumReport {
  double norm_sum = 0.0;
  double norm_sum_bound = 0.0;
  std::vector<double> ratio;       // <f_l,f_l>/<g_l,g_l>
  std::vector<double> rho;         // rho^k_l
  double worst_ratio_gap = 0.0;
  double worst_cross = 0.0;        // max |<f_l,f_i>| / (||f_l|| ||f_i||)
  double cross_bound = 0.0;
  bool ok = false;
};
NormSumReport norm_sum_check(const PosetContext& ctx, const LevelFunction& f,
                             const Decomposition& decomposition, const EposetParams& params,
                             double slack = 10.0);

}  // namespace eposets
