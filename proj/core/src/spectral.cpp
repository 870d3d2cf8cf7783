#include "eposets/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "eposets/qfamilies.hpp"

namespace eposets {

double EposetParams::delta_pow(int m, int j) const {
  if (j < 0) return 1.0;
  if (m < j || m >= d) throw LevelBoundsError("delta_pow: bad indices (m=" + std::to_string(m) +
                                              ", j=" + std::to_string(j) + ")");
  double prod = 1.0;
  for (int i = m - j; i <= m; ++i) prod *= delta[i];
  return prod;
}

double EposetParams::gamma_pow(int k, int j) const {
  double sum = 0.0;
  for (int i = -1; i <= j - 1; ++i) sum += delta_pow(k, i);
  return gamma * sum;
}

double EposetParams::rho(int k, int ell) const {
  double prod = 1.0;
  for (int i = 1; i <= k - ell; ++i) prod *= 1.0 - delta_pow(k - i, k - ell - i);
  return prod;
}

double EposetParams::rho_min(int k) const {
  double mn = 1.0;
  for (int ell = 0; ell <= k; ++ell) mn = std::min(mn, rho(k, ell));
  return mn;
}

namespace {

EposetParams closed_form_params(int d, const std::function<double(int)>& delta_of) {
  EposetParams params;
  params.d = d;
  params.delta = Eigen::VectorXd::Zero(std::max(d, 1));
  for (int i = 1; i <= d - 1; ++i) params.delta[i] = delta_of(i);
  params.gamma = 0.0;
  params.per_level_gamma.assign(static_cast<size_t>(std::max(d - 1, 0)), 0.0);
  return params;
}

}  // namespace

EposetParams grassmann_params(int q, int n, int d) {
  return closed_form_params(d, [&](int i) { return grassmann_delta(i, n, q); });
}

EposetParams qeposet_params(int q, int d) {
  return closed_form_params(d, [&](int i) { return qeposet_delta(i, q); });
}

EposetParams complete_complex_params(int n, int d) {
  return closed_form_params(d, [&](int i) { return complete_complex_delta(i, n); });
}

std::vector<double> eposet_residuals(const PosetContext& ctx, const Eigen::VectorXd& delta) {
  std::vector<double> residuals;
  for (int i = 1; i <= ctx.d() - 1; ++i) {
    Eigen::MatrixXd du = ctx.down(i + 1).m * ctx.up(i).m;
    Eigen::MatrixXd ud = ctx.up(i - 1).m * ctx.down(i).m;
    const double di = delta[i];
    Eigen::MatrixXd resid = du - (1.0 - di) * Eigen::MatrixXd::Identity(du.rows(), du.cols()) -
                            di * ud;
    residuals.push_back(weighted_spectral_norm(ctx.pi(i), resid));
  }
  return residuals;
}

EposetParams estimate_eposet_params(const PosetContext& ctx) {
  EposetParams params;
  params.d = ctx.d();
  if (params.empty()) return params;
  params.delta = Eigen::VectorXd::Zero(ctx.d());

  for (int i = 1; i <= ctx.d() - 1; ++i) {
    const Eigen::VectorXd& pi = ctx.pi(i);
    Eigen::MatrixXd du_sym = symmetrized_conjugate(pi, ctx.down(i + 1).m * ctx.up(i).m);
    Eigen::MatrixXd ud_sym = symmetrized_conjugate(pi, ctx.up(i - 1).m * ctx.down(i).m);
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(du_sym.rows(), du_sym.cols());
    auto objective = [&](double delta) {
      Eigen::MatrixXd resid = du_sym - (1.0 - delta) * id - delta * ud_sym;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(resid, Eigen::EigenvaluesOnly);
      return solver.eigenvalues().cwiseAbs().maxCoeff();
    };
    // The norm of the affine family is convex in delta; ternary search on [0,1].
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-10) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (objective(m1) <= objective(m2)) hi = m2; else lo = m1;
    }
    const double best = 0.5 * (lo + hi);
    params.delta[i] = best;
    params.per_level_gamma.push_back(objective(best));
  }
  params.gamma = *std::max_element(params.per_level_gamma.begin(), params.per_level_gamma.end());
  return params;
}

double pure_walk_eigenvalue(const PureWalkDescriptor& desc, const EposetParams& params, int ell) {
  if (ell < 0 || ell > desc.level) throw LevelBoundsError("pure_walk_eigenvalue: bad component");
  double lambda = 1.0;
  int s = 0;
  for (int pos : desc.down_positions()) {
    ++s;
    const int m = desc.level - 2 * s + pos;
    lambda *= 1.0 - params.delta_pow(m, m - ell);
  }
  return lambda;
}

WalkEigenvalues hd_walk_eigenvalues(const PosetContext& ctx, const HDWalk& walk,
                                    const EposetParams& params, double slack) {
  const int k = walk.level;
  WalkEigenvalues out;
  out.lambda = Eigen::VectorXd::Zero(k + 1);
  out.radius = Eigen::VectorXd::Zero(k + 1);
  for (int ell = 0; ell <= k; ++ell) {
    double lambda = 0.0;
    for (const auto& term : walk.terms)
      lambda += term.coeff * pure_walk_eigenvalue(term.walk, params, ell);
    out.lambda[ell] = lambda;
    const double h = static_cast<double>(walk.height);
    out.radius[ell] = slack * (h + k) * h * ctx.regularity().r_d(k, ell) * walk.weight * params.gamma;
  }
  out.monotonic = true;
  for (int ell = 1; ell <= k; ++ell)
    if (out.lambda[ell] > out.lambda[ell - 1] + 1e-12) out.monotonic = false;
  return out;
}

double grassmann_canonical_eigenvalue(int q, int n, int k, int j, int ell) {
  const BigInt num = q_power(q, static_cast<long>(ell) * j) *
                     gaussian_binomial(k + j - ell, j, q) * gaussian_binomial(n - k - ell, j, q);
  const BigInt den = gaussian_binomial(k + j, j, q) * gaussian_binomial(n - k, j, q);
  return to_double(num) / to_double(den);
}

double grassmann_swap_eigenvalue(int q, int n, int k, int j, int ell) {
  if (j == 0) return 1.0;
  const BigInt den = q_power(q, static_cast<long>(j) * j) * gaussian_binomial(k, k - j, q);
  double lambda = 0.0;
  for (int i = 0; i <= j; ++i) {
    BigInt num = q_power(q, (static_cast<long>(j - i) * (j - i - 1)) / 2) *
                 gaussian_binomial(j, i, q) * gaussian_binomial(k + i, i, q);
    double coeff = to_double(num) / to_double(den);
    if ((j - i) % 2 == 1) coeff = -coeff;
    lambda += coeff * grassmann_canonical_eigenvalue(q, n, k, i, ell);
  }
  return lambda;
}

double qeposet_swap_eigenvalue(int q, int k, int j, int ell) {
  return to_double(gaussian_binomial(k - j, ell, q)) / to_double(gaussian_binomial(k, ell, q));
}

LevelDecomposer::LevelDecomposer(const PosetContext& ctx, int k, double svd_cutoff)
    : ctx_(ctx), k_(k) {
  if (k < 0 || k > ctx.d()) throw LevelBoundsError("LevelDecomposer: bad level");
  const int n = ctx.poset().level_size(k);
  sqrt_pi_ = ctx.pi(k).array().sqrt();
  dims_.assign(static_cast<size_t>(k) + 1, 0);
  blocks_.assign(static_cast<size_t>(k) + 1, {});
  witnesses_.assign(static_cast<size_t>(k) + 1, {});

  int total = 0;
  std::vector<Eigen::MatrixXd> weighted_blocks;
  for (int i = 0; i <= k; ++i) {
    Eigen::MatrixXd kernel;
    if (i == 0) {
      kernel = Eigen::MatrixXd::Ones(1, 1);
    } else {
      const Eigen::MatrixXd& di = ctx.down(i).m;
      Eigen::BDCSVD<Eigen::MatrixXd> svd(di, Eigen::ComputeFullV);
      const Eigen::VectorXd& sv = svd.singularValues();
      const double cutoff = (sv.size() > 0 ? sv[0] : 0.0) * svd_cutoff;
      int rank = 0;
      for (long s = 0; s < sv.size(); ++s)
        if (sv[s] > cutoff) ++rank;
      const int null_dim = ctx.poset().level_size(i) - rank;
      kernel = svd.matrixV().rightCols(null_dim);
    }
    dims_[static_cast<size_t>(i)] = static_cast<int>(kernel.cols());
    total += static_cast<int>(kernel.cols());
    if (kernel.cols() == 0) {
      witnesses_[static_cast<size_t>(i)] = kernel;
      blocks_[static_cast<size_t>(i)] = Eigen::MatrixXd::Zero(n, 0);
      weighted_blocks.push_back(blocks_[static_cast<size_t>(i)]);
      continue;
    }
    Eigen::MatrixXd lifted = compose_up(ctx.poset(), ctx.measure(), i, k).m * kernel;
    Eigen::MatrixXd weighted = sqrt_pi_.asDiagonal() * lifted;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(weighted);
    Eigen::MatrixXd thin_q = qr.householderQ() * Eigen::MatrixXd::Identity(n, kernel.cols());
    Eigen::MatrixXd r = qr.matrixQR()
                            .topRows(kernel.cols())
                            .triangularView<Eigen::Upper>();
    // witnesses solve U^k_i (K R^{-1} c) = block * c, keeping g_i in Ker(D_i)
    witnesses_[static_cast<size_t>(i)] =
        r.triangularView<Eigen::Upper>().solve(kernel.transpose()).transpose();
    blocks_[static_cast<size_t>(i)] = thin_q;
    weighted_blocks.push_back(thin_q);
  }

  stacked_ = Eigen::MatrixXd::Zero(n, total);
  int col = 0;
  for (const auto& block : weighted_blocks) {
    stacked_.middleCols(col, block.cols()) = block;
    col += static_cast<int>(block.cols());
  }
  qr_.compute(stacked_);
  qr_.setThreshold(1e-10);
  if (qr_.rank() < total)
    throw RankDeficientError("stacked lifted kernel bases are rank deficient: rank " +
                             std::to_string(qr_.rank()) + " < " + std::to_string(total));
}

int LevelDecomposer::total_dim() const {
  int total = 0;
  for (int v : dims_) total += v;
  return total;
}

Decomposition LevelDecomposer::decompose(const LevelFunction& f) const {
  if (f.level != k_) throw LevelMismatchError("decompose: function at wrong level");
  Eigen::VectorXd rhs = sqrt_pi_.asDiagonal() * f.values;
  Eigen::VectorXd coeffs = qr_.solve(rhs);
  Decomposition out;
  out.level = k_;
  const double fnorm = rhs.norm();
  Eigen::VectorXd recomposed = Eigen::VectorXd::Zero(f.values.size());
  int col = 0;
  for (int i = 0; i <= k_; ++i) {
    const int dim = dims_[static_cast<size_t>(i)];
    Eigen::VectorXd block_coeffs = coeffs.segment(col, dim);
    col += dim;
    Eigen::VectorXd weighted_component = blocks_[static_cast<size_t>(i)] * block_coeffs;
    Eigen::VectorXd component = weighted_component.array() / sqrt_pi_.array();
    recomposed += component;
    out.components.push_back(LevelFunction{k_, std::move(component)});
    Eigen::VectorXd witness = dim > 0
                                  ? Eigen::VectorXd(witnesses_[static_cast<size_t>(i)] * block_coeffs)
                                  : Eigen::VectorXd::Zero(ctx_.poset().level_size(i));
    double wres = 0.0;
    if (i >= 1 && dim > 0) {
      const double wnorm = norm(ctx_.measure(), LevelFunction{i, witness});
      if (wnorm > 0.0) {
        LevelFunction dg = ctx_.down(i).apply(LevelFunction{i, witness});
        wres = norm(ctx_.measure(), dg) / wnorm;
      }
    }
    out.witness_residuals.push_back(wres);
    out.witnesses.push_back(LevelFunction{i, std::move(witness)});
  }
  const double resid =
      (sqrt_pi_.asDiagonal() * Eigen::VectorXd(f.values - recomposed)).norm();
  out.recomposition_residual = fnorm > 0.0 ? resid / fnorm : resid;
  return out;
}

StripReport verify_eigenstripping(const PosetContext& ctx, const HDWalk& walk,
                                  const EposetParams& params, const LevelDecomposer& decomposer,
                                  double slack) {
  const int k = walk.level;
  WalkEigenvalues approx = hd_walk_eigenvalues(ctx, walk, params, slack);

  StripReport report;
  report.walk = walk.name;
  report.level = k;
  report.gamma = params.gamma;
  report.slack = slack;

  // Sort strips by center, descending, carrying radii and dimensions along.
  std::vector<int> order(static_cast<size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return approx.lambda[a] > approx.lambda[b]; });
  report.lambda = Eigen::VectorXd(k + 1);
  report.radius = Eigen::VectorXd(k + 1);
  for (int s = 0; s <= k; ++s) {
    report.lambda[s] = approx.lambda[order[static_cast<size_t>(s)]];
    report.radius[s] = approx.radius[order[static_cast<size_t>(s)]];
    report.expected_count.push_back(decomposer.dim(order[static_cast<size_t>(s)]));
  }

  report.disjoint = true;
  for (int s = 0; s + 1 <= k; ++s)
    if (report.lambda[s] - report.radius[s] <= report.lambda[s + 1] + report.radius[s + 1])
      report.disjoint = false;

  report.eigenvalues = spectrum(ctx.pi(k), walk.matrix);
  report.found_count.assign(static_cast<size_t>(k) + 1, 0);
  report.contained = true;
  report.max_deviation = 0.0;
  report.slack_needed = 0.0;
  for (long e = 0; e < report.eigenvalues.size(); ++e) {
    const double mu = report.eigenvalues[e];
    int best = 0;
    double best_dist = std::abs(mu - report.lambda[0]);
    for (int s = 1; s <= k; ++s) {
      const double dist = std::abs(mu - report.lambda[s]);
      if (dist < best_dist) { best_dist = dist; best = s; }
    }
    ++report.found_count[static_cast<size_t>(best)];
    report.max_deviation = std::max(report.max_deviation, best_dist);
    if (best_dist > report.radius[best] + 1e-12) report.contained = false;
    // Minimal slack multiplier making mu land inside its nearest strip.
    double needed = 0.0;
    if (params.gamma > 0.0) {
      double best_needed = std::numeric_limits<double>::infinity();
      for (int s = 0; s <= k; ++s) {
        const double unit = report.radius[s] / slack;  // radius at slack = 1
        if (unit > 0.0)
          best_needed = std::min(best_needed, std::abs(mu - report.lambda[s]) / unit);
      }
      needed = best_needed;
    }
    report.slack_needed = std::max(report.slack_needed, needed);
  }

  for (double eta = 0.05; eta < 1.0; eta += 0.05) {
    int count = 0;
    // A strip counts if it received an eigenvalue above eta.
    long e = 0;
    std::vector<bool> seen(static_cast<size_t>(k) + 1, false);
    for (e = 0; e < report.eigenvalues.size(); ++e) {
      const double mu = report.eigenvalues[e];
      if (mu <= eta) continue;
      int best = 0;
      double best_dist = std::abs(mu - report.lambda[0]);
      for (int s = 1; s <= k; ++s) {
        const double dist = std::abs(mu - report.lambda[s]);
        if (dist < best_dist) { best_dist = dist; best = s; }
      }
      seen[static_cast<size_t>(best)] = true;
    }
    for (bool b : seen) count += b ? 1 : 0;
    report.st_rank.emplace_back(eta, count);
  }

  // Principal angles between each eigenstrip span and the lifted block, in
  // sqrt(pi) coordinates; reported, never asserted.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetrized_conjugate(ctx.pi(k), walk.matrix));
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const Eigen::VectorXd& values = solver.eigenvalues();
  for (int s = 0; s <= k; ++s) {
    std::vector<long> members;
    for (long e = 0; e < values.size(); ++e) {
      const double mu = values[e];
      int best = 0;
      double best_dist = std::abs(mu - report.lambda[0]);
      for (int t = 1; t <= k; ++t) {
        const double dist = std::abs(mu - report.lambda[t]);
        if (dist < best_dist) { best_dist = dist; best = t; }
      }
      if (best == s) members.push_back(e);
    }
    const int raw = order[static_cast<size_t>(s)];
    const Eigen::MatrixXd& block = decomposer.block_basis(raw);
    if (members.empty() || block.cols() == 0) {
      report.principal_angles.push_back(0.0);
      continue;
    }
    Eigen::MatrixXd strip_basis(vectors.rows(), static_cast<long>(members.size()));
    for (size_t m = 0; m < members.size(); ++m) strip_basis.col(static_cast<long>(m)) = vectors.col(members[m]);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(block.transpose() * strip_basis);
    const double smallest_cos =
        svd.singularValues().size() > 0
            ? svd.singularValues()[std::min<long>(svd.singularValues().size(), block.cols()) - 1]
            : 0.0;
    report.principal_angles.push_back(std::acos(std::clamp(smallest_cos, 0.0, 1.0)));
  }
  return report;
}

int StripReport::st_rank_at(double eta) const {
  int count = 0;
  for (int s = 0; s < lambda.size(); ++s) {
    bool active = false;
    for (long e = 0; e < eigenvalues.size(); ++e) {
      const double mu = eigenvalues[e];
      if (mu <= eta) continue;
      int best = 0;
      double best_dist = std::abs(mu - lambda[0]);
      for (int t = 1; t < lambda.size(); ++t) {
        const double dist = std::abs(mu - lambda[t]);
        if (dist < best_dist) { best_dist = dist; best = t; }
      }
      if (best == s) { active = true; break; }
    }
    if (active) ++count;
  }
  return count;
}

RegularitySpectrumReport verify_regularity_spectrum(const PosetContext& ctx,
                                                    const EposetParams& params, int k, int i,
                                                    double slack) {
  if (!(0 <= i && i <= k && k <= ctx.d())) throw LevelBoundsError("verify_regularity_spectrum");
  const RegularityProfile& reg = ctx.regularity();
  RegularitySpectrumReport report;
  report.k = k;
  report.i = i;
  for (int lvl = 1; lvl <= std::min(k + 1, ctx.d()); ++lvl)
    report.beta = std::max(report.beta, non_laziness(ctx.poset(), ctx.measure(), lvl).beta);

  PureWalkDescriptor lower = canonical_down_descriptor(k, k - i);
  for (int j = 0; j <= i; ++j) {
    const double lambda = pure_walk_eigenvalue(lower, params, j);
    const double ratio = reg.r_d(i, j) / reg.r_d(k, j);
    report.rows.push_back({"lambda_" + std::to_string(j) + "(lower walk k=" + std::to_string(k) +
                               "->i=" + std::to_string(i) + ")",
                           lambda, ratio, std::abs(lambda - ratio)});
  }
  if (k + 1 <= ctx.d()) {
    PureWalkDescriptor upper = canonical_up_descriptor(k, 1);
    const double lambda = pure_walk_eigenvalue(upper, params, i);
    const double ratio = reg.r_d(k, i) / reg.r_d(k + 1, i);
    report.rows.push_back({"lambda_" + std::to_string(i) + "(upper walk k=" + std::to_string(k) + ")",
                           lambda, ratio, std::abs(lambda - ratio)});
  }
  const double rho = params.rho(k, i);
  const double inv_r = 1.0 / reg.r_d(k, i);
  report.rows.push_back({"rho(" + std::to_string(k) + "," + std::to_string(i) + ")", rho, inv_r,
                         std::abs(rho - inv_r)});

  report.ok = true;
  for (const auto& row : report.rows)
    if (row.gap > slack * report.beta + slack * params.gamma) report.ok = false;
  return report;
}

NormSumReport norm_sum_check(const PosetContext& ctx, const LevelFunction& f,
                             const Decomposition& decomposition, const EposetParams& params,
                             double slack) {
  const int k = decomposition.level;
  NormSumReport report;
  const double fnorm = norm(ctx.measure(), f);
  for (const auto& comp : decomposition.components)
    report.norm_sum += norm(ctx.measure(), comp);
  report.norm_sum_bound = slack * std::sqrt(static_cast<double>(std::max(k, 1))) * fnorm;

  const double floor = 1e-9;
  for (int ell = 0; ell <= k; ++ell) {
    const double ff = inner_product(ctx.measure(), decomposition.components[static_cast<size_t>(ell)],
                                    decomposition.components[static_cast<size_t>(ell)]);
    const double gg = inner_product(ctx.measure(), decomposition.witnesses[static_cast<size_t>(ell)],
                                    decomposition.witnesses[static_cast<size_t>(ell)]);
    const double rho = params.rho(k, ell);
    report.rho.push_back(rho);
    if (gg <= 0.0) {
      report.ratio.push_back(0.0);
      continue;
    }
    const double ratio = ff / gg;
    report.ratio.push_back(ratio);
    const double gap = std::abs(ratio - rho);
    const double allowed = slack * static_cast<double>(k) * k * params.gamma + floor;
    report.worst_ratio_gap = std::max(report.worst_ratio_gap, gap - allowed);
  }

  report.cross_bound =
      slack * static_cast<double>(k) * k / std::max(params.rho_min(k), 1e-15) * params.gamma + floor;
  for (int a = 0; a <= k; ++a)
    for (int b = a + 1; b <= k; ++b) {
      const double na = norm(ctx.measure(), decomposition.components[static_cast<size_t>(a)]);
      const double nb = norm(ctx.measure(), decomposition.components[static_cast<size_t>(b)]);
      if (na <= floor * fnorm || nb <= floor * fnorm) continue;
      const double cross = std::abs(inner_product(ctx.measure(),
                                                  decomposition.components[static_cast<size_t>(a)],
                                                  decomposition.components[static_cast<size_t>(b)])) /
                           (na * nb);
      report.worst_cross = std::max(report.worst_cross, cross);
    }
  report.ok = report.norm_sum <= report.norm_sum_bound && report.worst_ratio_gap <= 0.0 &&
              report.worst_cross <= report.cross_bound;
  return report;
}

}  // namespace eposets
