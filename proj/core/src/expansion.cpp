#include "eposets/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "eposets/qfamilies.hpp"

namespace eposets {

LevelFunction FaceSet::indicator(const PosetContext& ctx) const {
  LevelFunction f{level, Eigen::VectorXd::Zero(ctx.poset().level_size(level))};
  for (std::uint32_t id : ids) f.values[id] = 1.0;
  return f;
}

double FaceSet::density(const PosetContext& ctx) const {
  double alpha = 0.0;
  const Eigen::VectorXd& pi = ctx.pi(level);
  for (std::uint32_t id : ids) alpha += pi[id];
  return alpha;
}

double edge_expansion(const PosetContext& ctx, const HDWalk& walk, const FaceSet& set) {
  if (set.ids.empty()) throw EmptySetError("edge_expansion: empty set");
  if (walk.level != set.level) throw LevelMismatchError("edge_expansion: walk/set level mismatch");
  LevelFunction ind = set.indicator(ctx);
  const double mass = inner_product(ctx.measure(), ind, ind);
  LevelFunction walked{set.level, walk.matrix * ind.values};
  return 1.0 - inner_product(ctx.measure(), ind, walked) / mass;
}

double edge_expansion_rowsum(const PosetContext& ctx, const HDWalk& walk, const FaceSet& set) {
  if (set.ids.empty()) throw EmptySetError("edge_expansion_rowsum: empty set");
  std::vector<bool> member(static_cast<size_t>(ctx.poset().level_size(set.level)), false);
  for (std::uint32_t id : set.ids) member[id] = true;
  const Eigen::VectorXd& pi = ctx.pi(set.level);
  double mass = 0.0, escaped = 0.0;
  for (std::uint32_t v : set.ids) {
    mass += pi[v];
    double out = 0.0;
    for (long y = 0; y < walk.matrix.cols(); ++y)
      if (!member[static_cast<size_t>(y)]) out += walk.matrix(v, y);
    escaped += pi[v] * out;
  }
  return escaped / mass;
}

FaceSet link(const PosetContext& ctx, int i, std::uint32_t tau, int k) {
  if (!(0 <= i && i <= k && k <= ctx.d())) throw LevelBoundsError("link: need i <= k <= d");
  FaceSet set;
  set.level = k;
  set.ids = ctx.poset().above(i, tau, k);
  set.name = "link(i=" + std::to_string(i) + ",tau=" + std::to_string(tau) + ",k=" + std::to_string(k) + ")";
  return set;
}

FaceSet colink(const PosetContext& ctx, const FqMatrix& w, int k) {
  const GradedPoset& poset = ctx.poset();
  if (poset.kind != FamilyKind::QSimplicial) throw Error("colink: poset is not q-simplicial");
  if (k > poset.d) throw LevelBoundsError("colink: level out of range");
  if (w.cols() != poset.ambient || w.q() != poset.q)
    throw DimensionMismatchError("colink: subspace does not live in the ambient space");
  if (k > w.rows()) throw LevelBoundsError("colink: level exceeds dim(W)");
  FaceSet set;
  set.level = k;
  for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(poset.level_size(k)); ++v)
    if (w.contains(face_to_matrix(poset, k, v))) set.ids.push_back(v);
  set.name = "colink(dimW=" + std::to_string(w.rows()) + ",k=" + std::to_string(k) + ")";
  return set;
}

PseudorandomnessProfile pseudorandomness(const PosetContext& ctx, const LevelFunction& f, int ell) {
  const int k = f.level;
  if (ell < 0 || ell > k) throw LevelBoundsError("pseudorandomness: bad ell");
  PseudorandomnessProfile profile;
  profile.ell = ell;
  profile.eps_l2.assign(static_cast<size_t>(ell) + 1, 0.0);
  profile.eps_linf.assign(static_cast<size_t>(ell) + 1, 0.0);
  profile.local_constant_sign.assign(static_cast<size_t>(ell) + 1, false);
  const double mean = expectation(ctx.measure(), f);

  LevelFunction current = f;
  for (int i = k; i >= 1; --i) {
    if (i < k) current = ctx.down(i + 1).apply(current);
    if (i > ell) continue;
    // current = D^k_i f
    const double var = variance(ctx.measure(), current);
    if (mean == 0.0 && var > 0.0)
      throw ZeroMeanError("pseudorandomness: E[f] = 0 with nonzero link variance");
    profile.eps_l2[static_cast<size_t>(i)] = mean == 0.0 ? 0.0 : var / std::abs(mean);
    profile.eps_linf[static_cast<size_t>(i)] = (current.values.array() - mean).abs().maxCoeff();
    bool constant_sign = mean != 0.0;
    const double sign = mean >= 0.0 ? 1.0 : -1.0;
    const double tol = 1e-12 * f.values.cwiseAbs().maxCoeff();
    for (long s = 0; s < current.values.size() && constant_sign; ++s)
      if (sign * current.values[s] < -tol) constant_sign = false;
    profile.local_constant_sign[static_cast<size_t>(i)] = constant_sign;
  }
  return profile;
}

std::vector<double> level_projection(const PosetContext& ctx, const LevelFunction& f,
                                     const Decomposition& decomposition) {
  std::vector<double> proj;
  proj.reserve(decomposition.components.size());
  for (const auto& comp : decomposition.components)
    proj.push_back(inner_product(ctx.measure(), f, comp));
  return proj;
}

std::vector<LevelProjectionRow> verify_level_projections(const PosetContext& ctx,
                                                         const LevelFunction& f,
                                                         const Decomposition& decomposition,
                                                         const PseudorandomnessProfile& profile,
                                                         const EposetParams& params,
                                                         double slack) {
  const int k = decomposition.level;
  const double mean = expectation(ctx.measure(), f);
  const double fsq = inner_product(ctx.measure(), f, f);
  const std::vector<double> proj = level_projection(ctx, f, decomposition);
  const RegularityProfile& reg = ctx.regularity();

  std::vector<LevelProjectionRow> rows;
  for (int i = 1; i <= profile.ell; ++i) {
    LevelProjectionRow row;
    row.i = i;
    row.projection = proj[static_cast<size_t>(i)];
    const double r = reg.r_d(k, i);
    const double rho = params.rho(k, i);
    const double eps2 = profile.eps_l2[static_cast<size_t>(i)];
    const double epsi = profile.eps_linf[static_cast<size_t>(i)];
    const double cgamma = slack * params.gamma;
    const double float_floor = 1e-9 * std::max(1.0, fsq);

    row.l2_bound_rho = eps2 * std::abs(mean) / rho + cgamma * fsq + float_floor;
    row.l2_bound_regularity = r * eps2 * std::abs(mean);
    row.linf_bound_general = (r + cgamma) * epsi * epsi + cgamma * fsq + float_floor;
    row.linf_bound_signed = (r * epsi + cgamma) * std::abs(mean) + float_floor;

    const double p = std::abs(row.projection);
    row.l2_rho_ok = p <= row.l2_bound_rho;
    row.l2_regularity_ok = p <= row.l2_bound_regularity + float_floor;
    row.linf_general_ok = p <= row.linf_bound_general;
    row.linf_signed_ok = profile.local_constant_sign[static_cast<size_t>(i)]
                             ? p <= row.linf_bound_signed
                             : true;
    rows.push_back(row);
  }
  return rows;
}

LinkExpansionReport link_expansion_check(const PosetContext& ctx, const HDWalk& walk,
                                         const EposetParams& params, int i, std::uint32_t tau,
                                         const LevelDecomposer& decomposer, double slack) {
  const int k = walk.level;
  WalkEigenvalues eig = hd_walk_eigenvalues(ctx, walk, params, slack);
  if (!eig.monotonic)
    throw Error("link_expansion_check: walk is not monotonic; lambda_i is ambiguous");

  LinkExpansionReport report;
  report.i = i;
  report.tau = tau;
  FaceSet set = link(ctx, i, tau, k);
  report.phi = edge_expansion(ctx, walk, set);
  report.one_minus_lambda = 1.0 - eig.lambda[i];
  report.gap = std::abs(report.phi - report.one_minus_lambda);

  const double beta = non_laziness(ctx.poset(), ctx.measure(), k).beta;
  report.tolerance = slack * beta + eig.radius[i];

  LevelFunction ind = set.indicator(ctx);
  Decomposition dec = decomposer.decompose(ind);
  const double mass = inner_product(ctx.measure(), ind, ind);
  for (const auto& comp : dec.components)
    report.level_mass.push_back(inner_product(ctx.measure(), ind, comp) / mass);
  for (size_t a = 0; a < dec.components.size(); ++a)
    for (size_t b = a + 1; b < dec.components.size(); ++b)
      report.worst_cross = std::max(report.worst_cross,
                                    std::abs(inner_product(ctx.measure(), dec.components[a],
                                                           dec.components[b])) / mass);
  report.ok = report.gap <= report.tolerance;
  return report;
}

ExpansionBoundReport expansion_lower_bound(const PosetContext& ctx, const HDWalk& walk,
                                           const FaceSet& set, double eta,
                                           const EposetParams& params,
                                           const PseudorandomnessProfile& profile,
                                           const LevelDecomposer& decomposer,
                                           double slack) {
  (void)decomposer;
  const int k = walk.level;
  WalkEigenvalues eig = hd_walk_eigenvalues(ctx, walk, params, slack);
  ExpansionBoundReport report;
  report.eta = eta;
  int r_eta = 0;
  for (int ell = 0; ell <= k; ++ell)
    if (eig.lambda[ell] > eta) ++r_eta;
  report.r = std::max(0, r_eta - 1);
  if (report.r > profile.ell)
    throw LevelBoundsError("expansion_lower_bound: profile does not reach r = " +
                           std::to_string(report.r));

  report.alpha = set.density(ctx);
  double bound = 1.0 - report.alpha - (1.0 - report.alpha) * eta;
  for (int i = 1; i <= report.r; ++i)
    bound -= (eig.lambda[i] - eta) * ctx.regularity().r_d(k, i) *
             profile.eps_l2[static_cast<size_t>(i)];
  report.bound = bound;
  report.actual = edge_expansion(ctx, walk, set);

  const double float_tol = 1e-9;
  if (report.bound <= report.actual + float_tol) {
    report.slack_needed = 0.0;
    report.ok = true;
  } else {
    const double h = static_cast<double>(walk.height);
    const double cfact = std::pow(static_cast<double>(k), 5) *
                         std::pow(to_double(ctx.regularity().r_max(k)), 2) * (h + k) * h *
                         walk.weight;
    report.slack_needed = params.gamma > 0.0
                              ? (report.bound - report.actual) / (cfact * params.gamma)
                              : std::numeric_limits<double>::infinity();
    report.ok = false;
  }
  return report;
}

double qeposet_swap_expansion_bound(int q, int k, int j, int ell, const std::vector<double>& eps,
                                    double alpha) {
  double bound = 1.0 - alpha - std::pow(static_cast<double>(q), -static_cast<double>(ell + 1) * j);
  for (int i = 1; i <= ell; ++i)
    bound -= to_double(gaussian_binomial(k - j, i, q)) * eps[static_cast<size_t>(i)];
  return bound;
}

ColinkReport colink_tightness(const PosetContext& ctx, const FqMatrix& w, int k, int i, double c,
                              const LevelDecomposer& decomposer) {
  const GradedPoset& poset = ctx.poset();
  ColinkReport report;
  report.k = k;
  report.i = i;
  if (poset.ambient - w.rows() != i)
    throw LevelBoundsError("colink_tightness: W must have codimension i in the ambient space");

  FaceSet set = colink(ctx, w, k);
  if (set.ids.empty()) throw EmptySetError("colink_tightness: empty co-link");
  LevelFunction ind = set.indicator(ctx);
  const double mass = inner_product(ctx.measure(), ind, ind);
  report.density = expectation(ctx.measure(), ind);

  Decomposition dec = decomposer.decompose(ind);
  std::vector<double> proj = level_projection(ctx, ind, dec);
  report.ratio = proj[static_cast<size_t>(i)] / mass;
  for (int j = i + 1; j <= k; ++j)
    report.beyond_level_mass =
        std::max(report.beyond_level_mass, std::abs(proj[static_cast<size_t>(j)]) / mass);
  report.support_ok = report.beyond_level_mass <= 1e-9;

  HDWalk lower = canonical_down(ctx, k, 1);
  report.return_probability = 1.0 - edge_expansion(ctx, lower, set);
  const int q = poset.q;
  const int n = poset.ambient;
  report.return_closed_form = (std::pow(q, n - i) - std::pow(q, k - 1)) /
                              (std::pow(q, n) - std::pow(q, k - 1));
  report.return_ok = std::abs(report.return_probability - report.return_closed_form) <= 1e-10;

  report.alpha_i = colink_density(q, n, i, i, k);
  PseudorandomnessProfile profile = pseudorandomness(ctx, ind, i);
  report.eps_linf = profile.eps_linf[static_cast<size_t>(i)];
  report.bound = ctx.regularity().r_d(k, i) * report.alpha_i;
  report.tight = report.ratio > c * report.bound;
  return report;
}

ReductionReport reduction_linf_to_l2(const PosetContext& ctx, const LevelFunction& f, int i) {
  PseudorandomnessProfile profile = pseudorandomness(ctx, f, i);
  if (!profile.local_constant_sign[static_cast<size_t>(i)])
    throw NoLocalConstantSignError("reduction_linf_to_l2: f lacks " + std::to_string(i) +
                                   "-local constant sign");
  const double mean = expectation(ctx.measure(), f);
  ReductionReport report;
  report.lhs = profile.eps_l2[static_cast<size_t>(i)];  // Var / |E[f]|
  report.rhs = profile.eps_linf[static_cast<size_t>(i)];
  (void)mean;
  report.ok = report.lhs <= report.rhs + 1e-12;
  return report;
}

FaceSet random_set(const PosetContext& ctx, int k, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FaceSet set;
  set.level = k;
  const int n = ctx.poset().level_size(k);
  for (std::uint32_t v = 0; v < static_cast<std::uint32_t>(n); ++v) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < density) set.ids.push_back(v);
  }
  if (set.ids.empty()) set.ids.push_back(static_cast<std::uint32_t>(seed % n));
  set.name = "random(k=" + std::to_string(k) + ",density=" + std::to_string(density) + ")";
  return set;
}

}  // namespace eposets
