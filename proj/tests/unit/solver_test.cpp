#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "frachartree/errors.hpp"
#include "frachartree/solver.hpp"

namespace frachartree {
namespace {

Field gaussian_field(const GridSpec& g, double width = 1.0) {
  return Field::sample(g, [width](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return Complex(std::exp(-kPi * r2 / (width * width)), 0.0);
  });
}

SolveConfig make_config(const GridSpec& g, double lambda, double gamma, double alpha = 2.0) {
  SolveConfig cfg(build_kernel(g, lambda, gamma));
  cfg.prop = PropagatorSpec{alpha};
  return cfg;
}

TimePath junk_path(const GridSpec& g, std::size_t steps, double t_end) {
  TimePath p;
  for (std::size_t n = 0; n <= steps; ++n) {
    p.times.push_back(t_end * static_cast<double>(n) / static_cast<double>(steps));
    p.states.push_back(Field::sample(g, [n](std::span<const double> x) {
      return Complex(std::sin(x[0] + static_cast<double>(n)), std::cos(3.0 * x[0]));
    }));
  }
  return p;
}

TEST(SolveConfig, StepLatticeEndsAtFinalTime) {
  const GridSpec g(1, 8.0, 64);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.t_end = 1.0;
  cfg.dt = 0.3;
  EXPECT_EQ(cfg.step_count(), 4u);
  EXPECT_DOUBLE_EQ(cfg.effective_dt(), 0.25);
  cfg.dt = -1.0;
  EXPECT_THROW(cfg.validate(), ParameterError);
}

TEST(MethodNames, RoundTrip) {
  EXPECT_EQ(method_from_string("picard"), Method::Picard);
  EXPECT_EQ(method_from_string("strang"), Method::StrangSplit);
  EXPECT_EQ(to_string(Method::StrangSplit), "strang");
  EXPECT_THROW(method_from_string("rk4"), ParameterError);
}

TEST(DuhamelMap, FreeWhenLambdaVanishes) {
  const GridSpec g(1, 8.0, 128);
  SolveConfig cfg = make_config(g, 0.0, 0.5);
  cfg.t_end = 0.2;
  cfg.dt = 0.05;
  const Field u0 = gaussian_field(g);
  const TimePath out = duhamel_map(junk_path(g, 4, 0.2), u0, cfg);
  ASSERT_EQ(out.size(), 5u);
  for (std::size_t n = 0; n < out.size(); ++n) {
    EXPECT_LE(l2_distance(out.states[n], evolve_free(u0, out.times[n], cfg.prop)), 1e-12);
  }
}

TEST(DuhamelMap, ZeroPathZeroData) {
  const GridSpec g(1, 8.0, 64);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.t_end = 0.1;
  cfg.dt = 0.05;
  TimePath zero;
  for (double t : {0.0, 0.05, 0.1}) {
    zero.times.push_back(t);
    zero.states.push_back(Field::zeros(g));
  }
  const TimePath out = duhamel_map(zero, Field::zeros(g), cfg);
  for (const auto& s : out.states) EXPECT_EQ(lp_norm(s, kInfinity), 0.0);
}

TEST(Picard, LinearProblemConvergesAtOnce) {
  const GridSpec g(1, 8.0, 64);
  SolveConfig cfg = make_config(g, 0.0, 0.5);
  cfg.t_end = 0.1;
  cfg.dt = 0.01;
  const PicardResult r = picard_solve(gaussian_field(g), cfg);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_TRUE(r.ratios.empty());
}

TEST(Picard, ContractsOnShortInterval) {
  const GridSpec g(1, 8.0, 256);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.method = Method::Picard;
  cfg.t_end = 0.05;
  cfg.dt = 0.005;
  const PicardResult r = picard_solve(gaussian_field(g), cfg);
  ASSERT_FALSE(r.ratios.empty());
  for (double q : r.ratios) EXPECT_LT(q, 1.0);
  EXPECT_LT(r.ratios.back(), 0.5);
  EXPECT_LE(r.increments.back(), cfg.picard_tol);

  // The converged path is a fixed point of the Duhamel map.
  const TimePath again = duhamel_map(r.path, gaussian_field(g), cfg);
  EXPECT_LE(sup_l2_distance(again, r.path), cfg.picard_tol);
}

TEST(Picard, ShorterIntervalContractsFaster) {
  const GridSpec g(1, 8.0, 256);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.t_end = 0.05;
  cfg.dt = 0.005;
  const double long_ratio = picard_solve(gaussian_field(g), cfg).ratios.front();
  cfg.t_end = 0.025;
  cfg.dt = 0.0025;
  const double short_ratio = picard_solve(gaussian_field(g), cfg).ratios.front();
  EXPECT_LT(short_ratio, long_ratio);
}

TEST(Picard, WindowedIterationMatchesGlobal) {
  const GridSpec g(1, 8.0, 128);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.t_end = 0.1;
  cfg.dt = 0.005;
  const PicardResult whole = picard_solve(gaussian_field(g), cfg);
  cfg.picard_window = 5;
  const PicardResult windows = picard_solve(gaussian_field(g), cfg);
  EXPECT_LE(sup_l2_distance(whole.path, windows.path), 1e-9);
}

TEST(Picard, ReportsNonConvergence) {
  const GridSpec g(1, 8.0, 64);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.t_end = 0.05;
  cfg.dt = 0.005;
  cfg.picard_tol = 1e-300;
  cfg.picard_max_iter = 3;
  EXPECT_THROW(picard_solve(gaussian_field(g), cfg), ConvergenceError);
}

TEST(Strang, FreeStepWhenLambdaVanishes) {
  const GridSpec g(2, 4.0, 32);
  const SolveConfig cfg = make_config(g, 0.0, 0.5, 1.5);
  const Field u = gaussian_field(g);
  EXPECT_LE(l2_distance(strang_step(u, 0.01, cfg), evolve_free(u, 0.01, cfg.prop)), 1e-12);
}

TEST(Strang, StepIsUnitary) {
  const GridSpec g(1, 8.0, 128);
  const SolveConfig cfg = make_config(g, 3.0, 0.5);
  const Field u = gaussian_field(g);
  EXPECT_NEAR(lp_norm(strang_step(u, 0.01, cfg), 2.0) / lp_norm(u, 2.0), 1.0, 1e-12);
}

TEST(Strang, SecondOrderSelfConsistency) {
  const GridSpec g(1, 8.0, 128);
  SolveConfig cfg = make_config(g, 5.0, 0.5);
  cfg.t_end = 0.5;
  const Field u0 = gaussian_field(g);
  auto run = [&](double dt) {
    SolveConfig c = cfg;
    c.dt = dt;
    return solve(u0, c).final;
  };
  const Field a = run(4e-3), b = run(2e-3), c = run(1e-3), d = run(5e-4);
  const double e1 = l2_distance(a, b), e2 = l2_distance(b, c), e3 = l2_distance(c, d);
  // Least-squares slope of log e against log dt.
  const double x[3] = {std::log(4e-3), std::log(2e-3), std::log(1e-3)};
  const double y[3] = {std::log(e1), std::log(e2), std::log(e3)};
  const double xm = (x[0] + x[1] + x[2]) / 3.0, ym = (y[0] + y[1] + y[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (x[i] - xm) * (y[i] - ym);
    sxx += (x[i] - xm) * (x[i] - xm);
  }
  EXPECT_NEAR(sxy / sxx, 2.0, 0.2);
}

TEST(Solve, FreeRunConservesAndTracksModulationNorm) {
  const GridSpec g(1, 8.0, 128);
  SolveConfig cfg = make_config(g, 0.0, 0.5);
  cfg.t_end = 0.5;
  cfg.dt = 0.01;
  cfg.record_stride = 10;
  cfg.mpq = {{1.0, 1.0, 0.0}};
  cfg.mpq_lattice.x_stride = 2;
  const Field u0 = gaussian_field(g);
  const SolveResult r = solve(u0, cfg);
  ASSERT_EQ(r.series.size(), 6u);
  for (double drift : r.series.l2_drift) EXPECT_LE(std::abs(drift), 1e-10);
  for (std::size_t i = 0; i < r.series.size(); ++i) {
    ModulationParams p = cfg.mpq_lattice;
    p.p = 1.0;
    p.q = 1.0;
    const double probe = modulation_norm(evolve_free(u0, r.series.times[i], cfg.prop), p);
    EXPECT_NEAR(r.series.mpq[0][i], probe, 1e-10 * probe);
  }
}

TEST(Solve, RadialFractionalConservesL2) {
  const GridSpec g(2, 8.0, 64);
  for (double lambda : {1.0, -1.0}) {
    SolveConfig cfg = make_config(g, lambda, 0.7, 1.5);
    cfg.t_end = 0.2;
    cfg.dt = 1e-3;
    cfg.record_stride = 50;
    const SolveResult r = solve(gaussian_field(g), cfg);
    EXPECT_LE(r.series.max_abs_drift(), 1e-6);
  }
}

TEST(Solve, PicardAgreesWithStrang) {
  const GridSpec g(1, 8.0, 256);
  SolveConfig cfg = make_config(g, 1.0, 0.5);
  cfg.t_end = 0.05;
  cfg.dt = 0.001;
  cfg.keep_path = true;
  cfg.method = Method::StrangSplit;
  const SolveResult strang = solve(gaussian_field(g), cfg);
  cfg.method = Method::Picard;
  const SolveResult picard = solve(gaussian_field(g), cfg);
  ASSERT_TRUE(picard.picard.has_value());
  EXPECT_LE(sup_l2_distance(strang.path, picard.path), 1e-5);
}

TEST(Solve, NonFiniteDataIsBlowUp) {
  const GridSpec g(1, 8.0, 64);
  const SolveConfig cfg = make_config(g, 1.0, 0.5);
  std::vector<Complex> v(g.size(), Complex(1.0, 0.0));
  v[3] = Complex(std::nan(""), 0.0);
  EXPECT_THROW(solve(Field(g, v), cfg), BlowUpError);
}

TEST(NormSeries, CsvHeader) {
  const GridSpec g(1, 8.0, 64);
  SolveConfig cfg = make_config(g, 0.0, 0.5);
  cfg.t_end = 0.01;
  cfg.dt = 0.01;
  cfg.mpq = {{1.0, 1.0, 0.0}, {2.0, 2.0, 0.0}};
  std::ostringstream os;
  solve(gaussian_field(g), cfg).series.write_csv(os);
  const std::string header = os.str().substr(0, os.str().find('\n'));
  EXPECT_EQ(header, "t,l2,l2_drift,fl1,mpq_1_1,mpq_2_2,gronwall_h");
  cfg.record_l2 = false;
  cfg.record_fl1 = false;
  std::ostringstream bare;
  solve(gaussian_field(g), cfg).series.write_csv(bare);
  EXPECT_EQ(bare.str().substr(0, bare.str().find('\n')), "t,l2_drift,mpq_1_1,mpq_2_2,gronwall_h");
}

TEST(Strichartz, ConstantPath) {
  const GridSpec g(1, 8.0, 64);
  const Field f = gaussian_field(g);
  TimePath p;
  for (int n = 0; n <= 10; ++n) {
    p.times.push_back(0.2 * n);
    p.states.push_back(f);
  }
  const double q = 4.0, r = 3.0;
  EXPECT_NEAR(strichartz_norm(p, q, r), std::pow(2.0, 1.0 / q) * lp_norm(f, r), 1e-10);
  EXPECT_NEAR(strichartz_norm(p, kInfinity, r), lp_norm(f, r), 1e-15);
}

TEST(Strichartz, ZeroPathAndValidation) {
  const GridSpec g(1, 8.0, 64);
  TimePath p;
  p.times = {0.0, 1.0};
  p.states = {Field::zeros(g), Field::zeros(g)};
  EXPECT_EQ(strichartz_norm(p, 4.0, 4.0), 0.0);
  EXPECT_THROW(strichartz_norm(p, 0.5, 4.0), ParameterError);
}

TEST(Strichartz, StreamingMatchesStoredPath) {
  const GridSpec g(2, 6.0, 32);
  const PropagatorSpec prop{1.5};
  const Field u0 = gaussian_field(g);
  const double stored = strichartz_norm(free_path(u0, prop, 1.0, 16), 60.0 / 7.0, 80.0 / 33.0);
  EXPECT_NEAR(free_strichartz_norm(u0, prop, 1.0, 16, 60.0 / 7.0, 80.0 / 33.0), stored, 1e-12 * stored);
}

TEST(LogAffineEnvelope, ExactExponential) {
  std::vector<double> t, h;
  for (int i = 0; i <= 10; ++i) {
    t.push_back(0.1 * i);
    h.push_back(2.0 * std::exp(0.7 * 0.1 * i));
  }
  const AffineEnvelope env = log_affine_envelope(t, h);
  EXPECT_TRUE(env.bounded);
  EXPECT_NEAR(env.slope, 0.7, 1e-12);
  EXPECT_NEAR(env.intercept, std::log(2.0), 1e-12);
  EXPECT_LE(env.max_residual, 1e-12);
  for (std::size_t i = 0; i < t.size(); ++i) EXPECT_GE(env.intercept + env.slope * t[i] + 1e-12, std::log(h[i]));
}

}  // namespace
}  // namespace frachartree
