#include "surfspline/analysis.hpp"

#include "surfspline/errors.hpp"
#include "surfspline/rng.hpp"
#include "surfspline/spline.hpp"
#include "surfspline/text.hpp"

#include <algorithm>
#include <cmath>
#include <future>

namespace surfspline {

int StudyReport::successful_levels() const {
  return static_cast<int>(std::count_if(levels.begin(), levels.end(), [](const StudyLevel& l) { return l.ok(); }));
}

int rate_order(const StudyConfig& cfg, const TestFunction& f) {
  if (f.smoothness == Smoothness::smooth) return cfg.k;
  if (cfg.m > 0) return cfg.m;
  const double s = f.rough_exponent + 0.5 * f.dim;
  const int below = static_cast<int>(std::ceil(s)) - 1;
  return std::clamp(below, 0, cfg.k);
}

namespace {

Vector sample_values(const TestFunction& f, const PointMatrix& x) {
  Vector v(x.cols());
  for (Eigen::Index i = 0; i < x.cols(); ++i) v(i) = f(x.col(i));
  return v;
}

StudyLevel run_level(const StudyConfig& cfg, const TestFunction& f, const Domain& domain,
                     const PointMatrix& samples, const Vector& truth, double target_h,
                     std::uint64_t seed) {
  StudyLevel level;
  level.target_h = target_h;
  level.seed = seed;
  level.errors.assign(cfg.p_values.size(), std::nan(""));
  try {
    QuasiUniformOptions gen;
    gen.fill_resolution = cfg.fill_resolution;
    const PointSet nodes = generate_quasi_uniform(domain, target_h, seed, gen);
    level.h = nodes.fill_h().value();
    level.q = nodes.separation_q().value();
    level.rho = level.h / level.q;
    level.n = nodes.size();
    const SurfaceSplineModel model = fit(nodes, sample_values(f, nodes.points()), cfg.k);
    level.rcond = model.diagnostics().rcond;
    level.nbc_residual = model.diagnostics().nbc_residual;
    level.interpolation_residual = model.diagnostics().interpolation_residual;
    const Vector diff = model.evaluate_many(samples) - truth;
    for (std::size_t j = 0; j < cfg.p_values.size(); ++j) {
      level.errors[j] = lp_norm_of_samples(diff, cfg.p_values[j], domain.volume());
    }
  } catch (const UnisolvenceError& e) {
    level.status = "unisolvency";
    level.message = e.what();
  } catch (const ConditioningError& e) {
    level.status = "conditioning";
    level.rcond = e.rcond();
    level.message = e.what();
  } catch (const Error& e) {
    level.status = "failed";
    level.message = e.what();
  }
  return level;
}

}  // namespace

StudyReport convergence_study(const StudyConfig& cfg) {
  if (cfg.p_values.empty()) throw Error("study needs at least one p value");
  if (cfg.h_levels.empty()) throw Error("study needs at least one h level");
  const TestFunction f = make_test_function(cfg.function, cfg.d);
  const Domain domain(cfg.domain, cfg.d);
  const PointMatrix samples = lp_sample_points(domain, cfg.sampler);
  const Vector truth = sample_values(f, samples);

  StudyReport report;
  report.config = cfg;
  std::vector<double> hs = cfg.h_levels;
  std::sort(hs.begin(), hs.end(), std::greater<>());

  // Level seeds depend only on (seed, level index), so sequential and
  // concurrent runs agree.
  const CounterRng root(cfg.seed);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < hs.size(); ++i) seeds.push_back(root.split(i).next_u64());
  if (cfg.parallel) {
    std::vector<std::future<StudyLevel>> jobs;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, run_level, std::cref(cfg), std::cref(f),
                                std::cref(domain), std::cref(samples), std::cref(truth), hs[i], seeds[i]));
    }
    for (auto& job : jobs) report.levels.push_back(job.get());
  } else {
    for (std::size_t i = 0; i < hs.size(); ++i) {
      report.levels.push_back(run_level(cfg, f, domain, samples, truth, hs[i], seeds[i]));
    }
  }

  for (const StudyLevel& level : report.levels) {
    if (!level.ok()) report.warnings.push_back("level h=" + format_g(level.target_h, 6) + " " + level.status);
  }
  const int j = rate_order(cfg, f);
  for (double p : cfg.p_values) report.theory.push_back(theory_rate(j, cfg.d, p));

  bool any_ok = false;
  report.exact = true;
  for (const StudyLevel& level : report.levels) {
    if (!level.ok()) continue;
    any_ok = true;
    for (double e : level.errors) report.exact = report.exact && e <= 1e-8;
  }
  report.exact = report.exact && any_ok;
  report.rates.assign(cfg.p_values.size(), std::nullopt);
  if (report.exact) return report;

  for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
    std::vector<double> h, e;
    for (const StudyLevel& level : report.levels) {
      if (!level.ok()) continue;
      h.push_back(level.h);
      e.push_back(level.errors[pi]);
    }
    try {
      report.rates[pi] = fit_rate(h, e);
      for (const std::string& w : report.rates[pi]->warnings) report.warnings.push_back(w);
    } catch (const InsufficientLevelsError& err) {
      report.warnings.push_back("p=" + p_label(cfg.p_values[pi]) + ": " + err.what());
    }
  }
  return report;
}

InstabilityReport instability_study(const InstabilityConfig& cfg) {
  if (cfg.factors.empty()) throw Error("instability study needs at least one cluster factor");
  const TestFunction f = make_test_function(cfg.function, cfg.d);
  const Domain domain(cfg.domain, cfg.d);
  const PointMatrix samples = lp_sample_points(domain, cfg.sampler);
  QuasiUniformOptions gen;
  gen.fill_resolution = cfg.fill_resolution;

  InstabilityReport report;
  report.config = cfg;
  for (double factor : cfg.factors) {
    InstabilityRow row;
    row.factor = factor;
    // Every factor shares the base seed, hence the same base node set. Rough
    // functions get the satellite next to their singular point.
    std::optional<Vector> anchor;
    if (f.smoothness == Smoothness::rough) anchor = f.singular_point;
    const PointSet nodes = generate_clustered(domain, cfg.base_h, factor, cfg.seed, gen, anchor);
    row.n = nodes.size();
    row.h = nodes.fill_h().value();
    row.q = nodes.separation_q().value();
    row.rho = row.h / row.q;
    try {
      const SurfaceSplineModel model = fit(nodes, sample_values(f, nodes.points()), cfg.k);
      row.condition = model.diagnostics().condition();
      row.max_mu = model.mu().cwiseAbs().maxCoeff();
      row.l1_norm = lp_norm_of_samples(model.evaluate_many(samples), 1.0, domain.volume());
    } catch (const ConditioningError& e) {
      row.status = "fit_failed";
      row.condition = e.rcond() > 0.0 ? 1.0 / e.rcond() : kInf;
      row.max_mu = std::nan("");
      row.l1_norm = std::nan("");
      row.message = e.what();
    } catch (const UnisolvenceError& e) {
      row.status = "fit_failed";
      row.condition = kInf;
      row.max_mu = std::nan("");
      row.l1_norm = std::nan("");
      row.message = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace surfspline
