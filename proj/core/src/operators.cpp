#include "eposets/operators.hpp"

#include <cmath>

namespace eposets {

LinearMap up_operator(const GradedPoset& poset, const Measure& measure, int i) {
  (void)measure;
  if (i < 0 || i >= poset.d) throw LevelBoundsError("up_operator: level out of range");
  const auto& cv = poset.covers[static_cast<size_t>(i) + 1];
  LinearMap map{i, i + 1,
                Eigen::MatrixXd::Zero(poset.level_size(i + 1), poset.level_size(i))};
  for (std::uint32_t y = 0; y < cv.size(); ++y) {
    const double w = 1.0 / static_cast<double>(cv[y].size());
    for (std::uint32_t x : cv[y]) map.m(y, x) = w;
  }
  return map;
}

LinearMap down_operator(const GradedPoset& poset, const Measure& measure, int i_plus_1) {
  if (i_plus_1 < 1 || i_plus_1 > poset.d) throw LevelBoundsError("down_operator: level out of range");
  const int i = i_plus_1 - 1;
  const auto& parents = poset.ups[static_cast<size_t>(i)];
  const Eigen::VectorXd& pi_up = measure.pi[static_cast<size_t>(i_plus_1)];
  LinearMap map{i_plus_1, i,
                Eigen::MatrixXd::Zero(poset.level_size(i), poset.level_size(i_plus_1))};
  for (std::uint32_t x = 0; x < parents.size(); ++x) {
    double mass = 0.0;
    for (std::uint32_t y : parents[x]) mass += pi_up[y];
    if (mass <= 0.0) throw ZeroMassError("down_operator: zero link mass at id " + std::to_string(x));
    for (std::uint32_t y : parents[x]) map.m(x, y) = pi_up[y] / mass;
  }
  return map;
}

double inner_product(const Measure& measure, const LevelFunction& f, const LevelFunction& g) {
  if (f.level != g.level) throw LevelMismatchError("inner_product: levels differ");
  const Eigen::VectorXd& pi = measure.pi[static_cast<size_t>(f.level)];
  return (pi.array() * f.values.array() * g.values.array()).sum();
}

double norm(const Measure& measure, const LevelFunction& f) {
  return std::sqrt(std::max(0.0, inner_product(measure, f, f)));
}

double expectation(const Measure& measure, const LevelFunction& f) {
  return (measure.pi[static_cast<size_t>(f.level)].array() * f.values.array()).sum();
}

double variance(const Measure& measure, const LevelFunction& f) {
  const double mean = expectation(measure, f);
  return inner_product(measure, f, f) - mean * mean;
}

LinearMap compose_up(const GradedPoset& poset, const Measure& measure, int i, int k) {
  if (i > k || i < 0 || k > poset.d) throw LevelBoundsError("compose_up: bad levels");
  LinearMap map{i, k, Eigen::MatrixXd::Identity(poset.level_size(i), poset.level_size(i))};
  for (int lvl = i; lvl < k; ++lvl) {
    LinearMap u = up_operator(poset, measure, lvl);
    map.m = u.m * map.m;
    map.to_level = lvl + 1;
  }
  return map;
}

LinearMap compose_up_direct(const GradedPoset& poset, const Measure& measure,
                            const RegularityProfile& reg, int i, int k) {
  (void)measure;
  if (i > k || i < 0 || k > poset.d) throw LevelBoundsError("compose_up_direct: bad levels");
  LinearMap map{i, k, Eigen::MatrixXd::Zero(poset.level_size(k), poset.level_size(i))};
  const double w = 1.0 / reg.r_d(k, i);
  for (std::uint32_t y = 0; y < static_cast<std::uint32_t>(poset.level_size(k)); ++y)
    for (std::uint32_t x : poset.below(k, y, i)) map.m(y, x) = w;
  return map;
}

LinearMap compose_down(const GradedPoset& poset, const Measure& measure, int k, int i) {
  if (i > k || i < 0 || k > poset.d) throw LevelBoundsError("compose_down: bad levels");
  LinearMap map{k, i, Eigen::MatrixXd::Identity(poset.level_size(k), poset.level_size(k))};
  for (int lvl = k; lvl > i; --lvl) {
    LinearMap d = down_operator(poset, measure, lvl);
    map.m = d.m * map.m;
    map.to_level = lvl - 1;
  }
  return map;
}

double self_adjointness_defect(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m) {
  Eigen::MatrixXd weighted = pi.asDiagonal() * m;
  return (weighted - weighted.transpose()).cwiseAbs().maxCoeff();
}

double stochasticity_defect(const Eigen::MatrixXd& m) {
  return (m.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

Eigen::MatrixXd symmetrized_conjugate(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m) {
  Eigen::VectorXd sqrt_pi = pi.array().sqrt();
  Eigen::VectorXd inv_sqrt_pi = sqrt_pi.array().inverse();
  Eigen::MatrixXd conj = sqrt_pi.asDiagonal() * m * inv_sqrt_pi.asDiagonal();
  return 0.5 * (conj + conj.transpose());
}

Eigen::VectorXd spectrum(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized_conjugate(pi, m),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

double weighted_spectral_norm(const Eigen::VectorXd& pi, const Eigen::MatrixXd& m) {
  Eigen::VectorXd sqrt_pi = pi.array().sqrt();
  Eigen::VectorXd inv_sqrt_pi = sqrt_pi.array().inverse();
  Eigen::MatrixXd conj = sqrt_pi.asDiagonal() * m * inv_sqrt_pi.asDiagonal();
  const double scale = conj.cwiseAbs().maxCoeff();
  const double asym = (conj - conj.transpose()).cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (asym <= 1e-10 * scale) {
    Eigen::MatrixXd sym = 0.5 * (conj + conj.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(conj);
  return svd.singularValues()[0];
}

}  // namespace eposets
