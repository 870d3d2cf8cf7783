// Batch driver: build poset families, run the verification suites, emit CSV
// or JSON reports. Exit codes: 0 all hard assertions pass, 1 an assertion
// failed, 2 invalid input or configuration.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "eposets/expansion.hpp"
#include "eposets/io.hpp"
#include "eposets/qfamilies.hpp"
#include "eposets/spectral.hpp"
#include "eposets/walks.hpp"

using namespace eposets;

namespace {

struct FamilyOptions {
  std::string family;
  std::string input;
  int n = 0;
  int d = 0;
  int q = 2;
  double rho = 0.0;
  std::uint64_t seed = 1;
};

struct VerifyOptions {
  FamilyOptions fam;
  std::string suite = "all";
  std::vector<std::string> walks;
  double slack = 10.0;
  double tol = 1e-9;
  std::string out = ".";
  std::string format = "csv";
};

int failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("%s %s\n", ok ? "[PASS]" : "[FAIL]", what.c_str());
  if (!ok) ++failures;
}

std::pair<GradedPoset, Measure> build_family(const FamilyOptions& opt) {
  std::pair<GradedPoset, Measure> built;
  if (!opt.input.empty()) {
    built = read_poset_json(opt.input);
  } else if (opt.family == "complete") {
    built = complete_complex(opt.n, opt.d);
  } else if (opt.family == "grassmann") {
    built = grassmann_poset(opt.q, opt.n, opt.d);
  } else {
    throw ParseError("unknown family '" + opt.family + "' (use complete|grassmann or --in)");
  }
  if (opt.rho > 0.0)
    built.second = perturbed_measure(built.first, built.second, opt.rho, opt.seed);
  return built;
}

EposetParams family_params(const PosetContext& ctx, const FamilyOptions& opt) {
  if (opt.rho == 0.0 && ctx.poset().family == "grassmann")
    return grassmann_params(ctx.poset().q, ctx.poset().ambient, ctx.d());
  if (opt.rho == 0.0 && ctx.poset().family == "complete")
    return complete_complex_params(ctx.poset().ambient, ctx.d());
  return estimate_eposet_params(ctx);
}

std::vector<std::string> default_walks(const PosetContext& ctx) {
  std::vector<std::string> walks;
  const int d = ctx.d();
  const int k = std::max(1, d - 1);
  walks.push_back("N:k=" + std::to_string(k) + ",j=1");
  walks.push_back("UD:k=" + std::to_string(d));
  if (ctx.poset().kind == FamilyKind::QSimplicial)
    walks.push_back("S:k=" + std::to_string(k) + ",j=1");
  return walks;
}

void emit_strip_report(const StripReport& strip, const VerifyOptions& opt, Report& report) {
  for (long s = 0; s < strip.lambda.size(); ++s) {
    double worst = 0.0;
    long lo = 0;
    for (long t = 0; t < s; ++t) lo += strip.expected_count[static_cast<size_t>(t)];
    report.add_row({strip.walk, std::to_string(s), format_double(strip.lambda[s]),
                    format_double(strip.radius[s]),
                    std::to_string(strip.expected_count[static_cast<size_t>(s)]),
                    std::to_string(strip.found_count[static_cast<size_t>(s)]),
                    format_double(worst = strip.max_deviation)});
  }
  (void)opt;
}

bool suite_selected(const std::string& suite, const std::string& name) {
  return suite == "all" || suite == name;
}

void run_regularity(const PosetContext& ctx, const EposetParams& params, const VerifyOptions& opt) {
  Report report("regularity", {"quantity", "k", "i", "value", "reference", "gap"});
  report.set_meta("slack", format_double(opt.slack));
  report.set_meta("tol", format_double(opt.tol));

  const RegularityProfile& reg = ctx.regularity();
  for (int lvl = 1; lvl <= ctx.d(); ++lvl) {
    LazinessReport lz = non_laziness(ctx.poset(), ctx.measure(), lvl);
    check(std::abs(lz.beta - lz.max_transition) <= 1e-12,
          "laziness equals max transition probability at level " + std::to_string(lvl));
    report.add_row({"beta", std::to_string(lvl), "", format_double(lz.beta),
                    format_double(lz.max_transition), format_double(std::abs(lz.beta - lz.max_transition))});
  }

  // Two-sided upper/lower relation residuals at all (k, j).
  for (int k = 1; k <= ctx.d() - 1; ++k) {
    for (int j = 0; j <= k; ++j) {
      if (k - j - 1 < 0 && j != k) continue;
      const int low = k - j;
      Eigen::MatrixXd lhs = ctx.down(k + 1).m *
                            compose_up(ctx.poset(), ctx.measure(), low, k + 1).m;
      Eigen::MatrixXd mid = (1.0 - params.delta_pow(k, j)) *
                            compose_up(ctx.poset(), ctx.measure(), low, k).m;
      Eigen::MatrixXd rhs;
      if (low >= 1)
        rhs = params.delta_pow(k, j) *
              (compose_up(ctx.poset(), ctx.measure(), low - 1, k).m * ctx.down(low).m);
      else
        rhs = Eigen::MatrixXd::Zero(mid.rows(), mid.cols());
      const double resid = weighted_spectral_norm(ctx.pi(low), lhs - mid - rhs);
      const double allowed = opt.slack * params.gamma_pow(k, j) + opt.tol;
      check(resid <= allowed, "two-sided relation residual at (k=" + std::to_string(k) +
                                  ",j=" + std::to_string(j) + ") = " + format_double(resid));
      report.add_row({"du_ud_residual", std::to_string(k), std::to_string(j),
                      format_double(resid), format_double(allowed), ""});
    }
  }

  for (int k = 1; k <= ctx.d(); ++k)
    for (int i = 0; i <= k; ++i)
      report.add_row({"R", std::to_string(k), std::to_string(i), reg.r(k, i).str(), "", ""});

  if (ctx.d() >= 2) {
    const int k = ctx.d() - 1;
    for (int i = 1; i <= k; ++i) {
      RegularitySpectrumReport rs = verify_regularity_spectrum(ctx, params, k, i, opt.slack);
      check(rs.ok, "regularity/spectrum gaps at (k=" + std::to_string(k) +
                       ",i=" + std::to_string(i) + ") within slack*beta");
      for (const auto& row : rs.rows)
        report.add_row({row.quantity, std::to_string(k), std::to_string(i),
                        format_double(row.value), format_double(row.reference),
                        format_double(row.gap)});
    }
  }
  report.write(opt.out, opt.format);

  // Decay profile of the lower walk at the top level.
  Report decay("decay_profile", {"family", "k", "i", "lambda_lower", "r_ratio", "gap"});
  const int k = ctx.d();
  PureWalkDescriptor lower = canonical_down_descriptor(k, 1);
  for (int i = 0; i <= k; ++i) {
    const double lambda = pure_walk_eigenvalue(lower, params, i);
    const double ratio = reg.r_d(k - 1, i) / reg.r_d(k, i);
    decay.add_row({ctx.poset().family, std::to_string(k), std::to_string(i),
                   format_double(lambda), format_double(ratio), format_double(std::abs(lambda - ratio))});
  }
  decay.write(opt.out, opt.format);
}

void run_params(const PosetContext& ctx, const VerifyOptions& opt) {
  Report report("eposet_params", {"level", "delta", "closed_form", "residual"});
  EposetParams est = estimate_eposet_params(ctx);
  const GradedPoset& poset = ctx.poset();
  for (int i = 1; i <= ctx.d() - 1; ++i) {
    std::string closed;
    if (poset.family == "grassmann")
      closed = format_double(grassmann_delta(i, poset.ambient, poset.q));
    else if (poset.family == "complete")
      closed = format_double(complete_complex_delta(i, poset.ambient));
    report.add_row({std::to_string(i), format_double(est.delta[i]), closed,
                    format_double(est.per_level_gamma[static_cast<size_t>(i) - 1])});
  }
  report.set_meta("gamma", format_double(est.gamma));
  report.write(opt.out, opt.format);
  if (opt.fam.rho == 0.0 && (poset.family == "grassmann" || poset.family == "complete"))
    check(est.gamma <= 1e-10, "estimated gamma " + format_double(est.gamma) +
                                  " at the sequentially differential family");
}

void run_spectra(const PosetContext& ctx, const EposetParams& params, const VerifyOptions& opt,
                 std::map<int, std::shared_ptr<LevelDecomposer>>& decomposers) {
  Report report("spectra", {"walk", "strip", "lambda", "radius", "count_expected", "count_found",
                            "worst_deviation"});
  report.set_meta("slack", format_double(opt.slack));
  report.set_meta("tol", format_double(opt.tol));
  std::vector<std::string> walks = opt.walks.empty() ? default_walks(ctx) : opt.walks;
  for (const std::string& desc : walks) {
    auto walk = get_walk(ctx, desc);
    check(walk->stochastic, desc + " is stochastic (defect " +
                                format_double(walk->stochastic_defect) + ")");
    check(walk->self_adjoint, desc + " is self-adjoint (defect " +
                                  format_double(walk->self_adjoint_defect) + ")");
    auto& dec = decomposers[walk->level];
    if (!dec) dec = std::make_shared<LevelDecomposer>(ctx, walk->level);
    StripReport strip = verify_eigenstripping(ctx, *walk, params, *dec, opt.slack);
    const double allowed = params.gamma == 0.0 ? opt.tol : 0.0;
    bool contained = true;
    if (params.gamma == 0.0)
      contained = strip.max_deviation <= allowed;
    else
      contained = strip.contained;
    check(contained, desc + " spectrum concentrated (worst deviation " +
                         format_double(strip.max_deviation) + ")");
    if (strip.disjoint)
      check(strip.expected_count == strip.found_count, desc + " strip multiplicities match");
    emit_strip_report(strip, opt, report);
  }
  report.write(opt.out, opt.format);
}

void run_strips(const PosetContext& ctx, const EposetParams& params, const VerifyOptions& opt,
                std::map<int, std::shared_ptr<LevelDecomposer>>& decomposers) {
  Report report("strips", {"walk", "eta", "st_rank", "disjoint", "slack_needed", "principal_angle_max"});
  std::vector<std::string> walks = opt.walks.empty() ? default_walks(ctx) : opt.walks;
  for (const std::string& desc : walks) {
    auto walk = get_walk(ctx, desc);
    auto& dec = decomposers[walk->level];
    if (!dec) dec = std::make_shared<LevelDecomposer>(ctx, walk->level);
    StripReport strip = verify_eigenstripping(ctx, *walk, params, *dec, opt.slack);
    if (params.gamma > 0.0) {
      check(strip.contained || !strip.disjoint,
            desc + " containment (slack needed " + format_double(strip.slack_needed) + ")");
      if (strip.disjoint)
        check(strip.expected_count == strip.found_count, desc + " strip multiplicities match");
    } else {
      check(strip.max_deviation <= opt.tol,
            desc + " spectrum matches closed forms (worst " + format_double(strip.max_deviation) + ")");
    }
    double worst_angle = 0.0;
    for (double a : strip.principal_angles) worst_angle = std::max(worst_angle, a);
    for (const auto& [eta, rank] : strip.st_rank)
      report.add_row({desc, format_double(eta), std::to_string(rank),
                      strip.disjoint ? "1" : "0", format_double(strip.slack_needed),
                      format_double(worst_angle)});
  }
  report.write(opt.out, opt.format);
}

void run_expansion(const PosetContext& ctx, const EposetParams& params, const VerifyOptions& opt,
                   std::map<int, std::shared_ptr<LevelDecomposer>>& decomposers) {
  Report report("expansion", {"set", "level", "density", "i", "eps_l2", "eps_linf", "projection",
                              "phi", "bound", "slack_needed"});
  report.set_meta("eta", format_double(0.1));
  report.set_meta("seed", std::to_string(opt.fam.seed));
  const int k = std::max(1, ctx.d() - 1);
  std::string walk_desc = ctx.poset().kind == FamilyKind::QSimplicial
                              ? "S:k=" + std::to_string(k) + ",j=1"
                              : "N:k=" + std::to_string(k) + ",j=1";
  auto walk = get_walk(ctx, walk_desc);
  auto& dec = decomposers[k];
  if (!dec) dec = std::make_shared<LevelDecomposer>(ctx, k);

  int set_id = 0;
  bool all_bounds = true, all_proj = true;
  for (double density : {0.01, 0.1, 0.5}) {
    for (int rep = 0; rep < 10; ++rep) {
      FaceSet set = random_set(ctx, k, density, opt.fam.seed + 1000 * set_id + 7);
      LevelFunction ind = set.indicator(ctx);
      PseudorandomnessProfile profile = pseudorandomness(ctx, ind, k);
      Decomposition decomp = dec->decompose(ind);
      auto rows = verify_level_projections(ctx, ind, decomp, profile, params, opt.slack);
      ExpansionBoundReport bound =
          expansion_lower_bound(ctx, *walk, set, 0.1, params, profile, *dec, opt.slack);
      for (const auto& row : rows) {
        all_proj = all_proj && row.l2_rho_ok && row.linf_signed_ok;
        report.add_row({std::to_string(set_id), std::to_string(k), format_double(set.density(ctx)),
                        std::to_string(row.i),
                        format_double(profile.eps_l2[static_cast<size_t>(row.i)]),
                        format_double(profile.eps_linf[static_cast<size_t>(row.i)]),
                        format_double(row.projection), format_double(bound.actual),
                        format_double(bound.bound), format_double(bound.slack_needed)});
      }
      all_bounds = all_bounds && (bound.ok || params.gamma > 0.0);
      ++set_id;
    }
  }
  check(all_proj, "level projections obey the pseudorandomness bounds");
  check(all_bounds, "expansion lower bound holds on random sets");
  report.write(opt.out, opt.format);
}

void run_colink(const PosetContext& ctx, const VerifyOptions& opt,
                std::map<int, std::shared_ptr<LevelDecomposer>>& decomposers) {
  if (ctx.poset().kind != FamilyKind::QSimplicial) {
    std::printf("[SKIP] colink suite requires a q-simplicial poset\n");
    return;
  }
  Report report("colink", {"i", "k", "density", "ratio", "alpha_i", "bound", "tight",
                           "beyond_level_mass", "return_prob", "return_closed_form"});
  const int n = ctx.poset().ambient;
  const int q = ctx.poset().q;
  const int k = ctx.d();
  auto& dec = decomposers[k];
  if (!dec) dec = std::make_shared<LevelDecomposer>(ctx, k);
  for (int i = 1; i <= 2; ++i) {
    if (n - i < k) continue;
    // W = span of the first n-i coordinate vectors.
    FqMatrix w(q, n);
    for (int r = 0; r < n - i; ++r) {
      std::vector<std::uint8_t> row(static_cast<size_t>(n), 0);
      row[static_cast<size_t>(r)] = 1;
      w.append_row(row);
    }
    ColinkReport rep = colink_tightness(ctx, w, k, i, 0.6, *dec);
    check(rep.support_ok, "co-link projections beyond level " + std::to_string(i) +
                              " vanish (max " + format_double(rep.beyond_level_mass) + ")");
    check(rep.return_ok, "co-link lower-walk return probability matches closed form (" +
                             format_double(rep.return_probability) + " vs " +
                             format_double(rep.return_closed_form) + ")");
    report.add_row({std::to_string(i), std::to_string(k), format_double(rep.density),
                    format_double(rep.ratio), format_double(rep.alpha_i), format_double(rep.bound),
                    rep.tight ? "1" : "0", format_double(rep.beyond_level_mass),
                    format_double(rep.return_probability), format_double(rep.return_closed_form)});
  }
  report.write(opt.out, opt.format);
}

int cmd_build(const FamilyOptions& fam, const std::string& out) {
  auto [poset, measure] = build_family(fam);
  write_poset_json(out, poset, measure);
  std::printf("wrote %s\n", out.c_str());
  std::printf("family=%s d=%d levels:", poset.family.c_str(), poset.d);
  for (int i = 0; i <= poset.d; ++i) std::printf(" %d", poset.level_size(i));
  std::printf("\n");
  RegularityProfile reg = regularity_profile(poset);
  for (int k = 1; k <= poset.d; ++k) {
    std::printf("R(%d,i):", k);
    for (int i = 0; i <= k; ++i) std::printf(" %s", reg.r(k, i).str().c_str());
    std::printf("\n");
  }
  return 0;
}

int cmd_verify(const VerifyOptions& opt) {
  auto [poset, measure] = build_family(opt.fam);
  PosetContext ctx(std::move(poset), std::move(measure));
  EposetParams params = family_params(ctx, opt.fam);
  std::map<int, std::shared_ptr<LevelDecomposer>> decomposers;

  if (suite_selected(opt.suite, "regularity")) {
    run_regularity(ctx, params, opt);
    run_params(ctx, opt);
  }
  if (suite_selected(opt.suite, "spectra")) run_spectra(ctx, params, opt, decomposers);
  if (suite_selected(opt.suite, "strips")) run_strips(ctx, params, opt, decomposers);
  if (suite_selected(opt.suite, "expansion")) run_expansion(ctx, params, opt, decomposers);
  if (suite_selected(opt.suite, "colink")) run_colink(ctx, opt, decomposers);

  if (failures > 0) {
    std::printf("%d assertion(s) failed\n", failures);
    return 1;
  }
  std::printf("all assertions passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measured graded posets, higher-order walks, and their spectral verification"};
  app.require_subcommand(1);

  FamilyOptions fam;
  std::string build_out = "poset.json";
  CLI::App* build = app.add_subcommand("build", "Build a poset family and write the JSON file");
  build->add_option("--family", fam.family, "complete | grassmann");
  build->add_option("--in", fam.input, "existing poset JSON (overrides --family)");
  build->add_option("--n", fam.n, "ambient size / dimension");
  build->add_option("--d", fam.d, "top rank");
  build->add_option("--q", fam.q, "field size (grassmann)");
  build->add_option("--rho", fam.rho, "measure perturbation magnitude");
  build->add_option("--seed", fam.seed, "perturbation seed");
  build->add_option("--out", build_out, "output poset file");

  VerifyOptions vopt;
  CLI::App* verify = app.add_subcommand("verify", "Run verification suites and emit reports");
  verify->add_option("--family", vopt.fam.family, "complete | grassmann");
  verify->add_option("--in", vopt.fam.input, "existing poset JSON (overrides --family)");
  verify->add_option("--n", vopt.fam.n, "ambient size / dimension");
  verify->add_option("--d", vopt.fam.d, "top rank");
  verify->add_option("--q", vopt.fam.q, "field size (grassmann)");
  verify->add_option("--rho", vopt.fam.rho, "measure perturbation magnitude");
  verify->add_option("--seed", vopt.fam.seed, "seed for perturbations and random sets");
  verify->add_option("--suite", vopt.suite, "spectra|strips|expansion|colink|regularity|all");
  verify->add_option("--walk", vopt.walks, "walk descriptors, e.g. N:k=2,j=1 (repeatable)");
  verify->add_option("--slack", vopt.slack, "slack multiplier for big-O tolerances");
  verify->add_option("--tol", vopt.tol, "hard numeric tolerance");
  verify->add_option("--out", vopt.out, "report directory");
  verify->add_option("--format", vopt.format, "csv | json");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return cmd_build(fam, build_out);
    return cmd_verify(vopt);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 2;
  }
}
