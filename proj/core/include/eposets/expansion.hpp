#pragma once

// Edge expansion of sets under higher-order walks, links and co-links,
// l2/l-infinity pseudorandomness, level-i projection inequalities, expansion
// lower bounds, and the co-link tightness computation on the Grassmann.

#include <string>
#include <vector>

#include "eposets/fq.hpp"
#include "eposets/spectral.hpp"

namespace eposets {

/// A subset of X(k) with its indicator and pi_k-density.
struct FaceSet {
  int level = 0;
  std::vector<std::uint32_t> ids;
  std::string name;

  LevelFunction indicator(const PosetContext& ctx) const;
  double density(const PosetContext& ctx) const;
};

/// Phi(S) = 1 - <1_S, M 1_S> / <1_S, 1_S>.
double edge_expansion(const PosetContext& ctx, const HDWalk& walk, const FaceSet& set);
/// The same quantity from transition-probability row sums out of S.
double edge_expansion_rowsum(const PosetContext& ctx, const HDWalk& walk, const FaceSet& set);

/// All rank-k elements above tau in X(i).
FaceSet link(const PosetContext& ctx, int i, std::uint32_t tau, int k);
/// All rank-k subspaces contained in W (q-simplicial posets only); W is a
/// canonical subspace of the ambient space, not necessarily a poset element.
FaceSet colink(const PosetContext& ctx, const FqMatrix& w, int k);

/// eps_l2[i] = Var(D^k_i f) / |E[f]|, eps_linf[i] = ||D^k_i f - E[f]||_inf,
/// and the i-local constant sign flags, for 1 <= i <= ell. Entries are the
/// tightest values the instance admits.
struct PseudorandomnessProfile {
  int ell = 0;
  std::vector<double> eps_l2;    // index 0 unused
  std::vector<double> eps_linf;
  std::vector<bool> local_constant_sign;
};
PseudorandomnessProfile pseudorandomness(const PosetContext& ctx, const LevelFunction& f, int ell);

/// <f, f_i> for i = 0..k.
std::vector<double> level_projection(const PosetContext& ctx, const LevelFunction& f,
                                     const Decomposition& decomposition);

/// Level-i projection bounds checked against the measured pseudorandomness.
/// The l2 route is asserted in its exact form |<f,f_i>| <= eps_i |E[f]| / rho^k_i
/// (plus the gamma term); the regularity-substituted R(k,i) variant and both
/// l-infinity variants are evaluated and reported alongside.
struct LevelProjectionRow {
  int i = 0;
  double projection = 0.0;
  double l2_bound_rho = 0.0;      // eps_l2 |E[f]| / rho + slack gamma ||f||^2
  double l2_bound_regularity = 0.0;  // R(k,i) eps_l2 |E[f]|, zero-gamma form
  double linf_bound_general = 0.0;   // (R + c gamma) eps_inf^2 + c gamma ||f||^2
  double linf_bound_signed = 0.0;    // (R eps_inf + c gamma) |E[f]|
  bool l2_rho_ok = false;
  bool l2_regularity_ok = false;
  bool linf_general_ok = false;
  bool linf_signed_ok = false;
};
std::vector<LevelProjectionRow> verify_level_projections(const PosetContext& ctx,
                                                         const LevelFunction& f,
                                                         const Decomposition& decomposition,
                                                         const PseudorandomnessProfile& profile,
                                                         const EposetParams& params,
                                                         double slack = 10.0);

/// Link expansion against 1 - lambda_i(M), with the cross-level mass report.
struct LinkExpansionReport {
  int i = 0;
  std::uint32_t tau = 0;
  double phi = 0.0;
  double one_minus_lambda = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;  // slack * (beta + gamma radius)
  std::vector<double> level_mass;  // <1_S, 1_{S,j}> / <1_S,1_S>
  double worst_cross = 0.0;        // max_{a != b} |<1_{S,a}, 1_{S,b}>| / <1_S,1_S>
  bool ok = false;
};
LinkExpansionReport link_expansion_check(const PosetContext& ctx, const HDWalk& walk,
                                         const EposetParams& params, int i, std::uint32_t tau,
                                         const LevelDecomposer& decomposer, double slack = 10.0);

/// The variance-based expansion lower bound at threshold eta, with
/// r = R_eta(M) - 1 strips contributing.
struct ExpansionBoundReport {
  double eta = 0.0;
  int r = 0;
  double alpha = 0.0;
  double bound = 0.0;         // zero-gamma evaluation
  double actual = 0.0;
  double slack_needed = 0.0;  // minimal gamma-slack multiplier; 0 when bound <= actual
  bool ok = false;            // bound <= actual (+ float tolerance)
};
ExpansionBoundReport expansion_lower_bound(const PosetContext& ctx, const HDWalk& walk,
                                           const FaceSet& set, double eta,
                                           const EposetParams& params,
                                           const PseudorandomnessProfile& profile,
                                           const LevelDecomposer& decomposer,
                                           double slack = 10.0);

/// Swap-walk specialization of the expansion bound for q-expanding posets:
/// 1 - alpha - sum_{i<=ell} (k-j choose i)_q eps_i - q^{-(ell+1) j}.
double qeposet_swap_expansion_bound(int q, int k, int j, int ell, const std::vector<double>& eps,
                                    double alpha);

/// Co-link structure report: projection ratio at level i, support beyond
/// level i, the lower-walk return probability against its closed form, and
/// the c-tightness flag.
struct ColinkReport {
  int i = 0;
  int k = 0;
  double density = 0.0;          // E[1_S]
  double ratio = 0.0;            // <1_S, 1_{S,i}> / <1_S, 1_S>
  double beyond_level_mass = 0.0;  // max_{j > i} |<1_S, 1_{S,j}>| / <1_S, 1_S>
  double return_probability = 0.0;
  double return_closed_form = 0.0;
  double alpha_i = 0.0;          // co-link density within i-links (closed form)
  double eps_linf = 0.0;         // measured
  double bound = 0.0;            // (k choose i)_q alpha_i
  bool tight = false;            // ratio > c * bound
  bool support_ok = false;       // beyond_level_mass <= 1e-9
  bool return_ok = false;        // |return - closed form| <= 1e-10
};
ColinkReport colink_tightness(const PosetContext& ctx, const FqMatrix& w, int k, int i, double c,
                              const LevelDecomposer& decomposer);

/// Verifies |Var(D^k_i f) / E[f]| <= ||D^k_i f - E[f]||_inf for functions
/// with i-local constant sign.
struct ReductionReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};
ReductionReport reduction_linf_to_l2(const PosetContext& ctx, const LevelFunction& f, int i);

/// Uniformly random subset of X(k) of the requested density (each id kept
/// independently); deterministic in the seed.
FaceSet random_set(const PosetContext& ctx, int k, double density, std::uint64_t seed);

}  // namespace eposets
