#include "frachartree/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "frachartree/errors.hpp"
#include "frachartree/hartree.hpp"
#include "frachartree/parallel.hpp"
#include "frachartree/solver.hpp"

namespace frachartree {

Quotient make_quotient(std::string id, double lhs, double rhs) {
  double ratio = 0.0;
  if (rhs != 0.0) {
    ratio = lhs / rhs;
  } else if (lhs != 0.0) {
    ratio = kInfinity;
  }
  return Quotient{std::move(id), lhs, rhs, ratio};
}

double EstimateReport::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics) {
    if (k == key) return v;
  }
  throw std::out_of_range("no metric '" + key + "' in report " + name);
}

namespace {

double sup_of(const std::vector<Quotient>& qs) {
  double sup = 0.0;
  for (const auto& q : qs) sup = std::max(sup, q.ratio);
  return sup;
}

bool all_finite(const std::vector<Quotient>& qs) {
  return std::all_of(qs.begin(), qs.end(), [](const Quotient& q) {
    return std::isfinite(q.ratio) && std::isfinite(q.lhs) && std::isfinite(q.rhs);
  });
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

ModulationParams modulation(const ModulationParams& lattice, double p, double q) {
  ModulationParams m = lattice;
  m.p = p;
  m.q = q;
  m.s = 0.0;
  return m;
}

template <class Body>
std::vector<Quotient> collect(std::size_t count, Body body) {
  std::vector<Quotient> out(count);
  parallel_for(count, [&](std::size_t i, unsigned) { out[i] = body(i); });
  return out;
}

void require_nonempty(const std::vector<TestFunction>& corpus, const char* what) {
  if (corpus.empty()) throw ParameterError(std::string(what) + ": empty corpus");
}

void require_trilinear_range(const CampaignSettings& s) {
  const double d = s.grid.dim;
  if (!(s.gamma > 0.0 && s.gamma < d)) throw ParameterError("kernel exponent must satisfy 0 < gamma < d");
  if (!(s.p >= 1.0 && s.p <= 2.0)) throw ParameterError("estimate needs 1 <= p <= 2");
  if (!(s.q >= 1.0 && s.q < 2.0 * d / (d + s.gamma))) throw ParameterError("estimate needs 1 <= q < 2d/(d+gamma)");
}

double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

void EstimateReport::finish(const std::vector<Quotient>& refined, double max_drift) {
  sup_ratio = sup_of(quotients);
  if (!all_finite(quotients)) failures.push_back("non-finite quotient at base resolution");
  if (refined.empty()) return;
  if (!all_finite(refined)) failures.push_back("non-finite quotient at refined resolution");
  refined_sup_ratio = sup_of(refined);
  grid_refinement_drift = sup_ratio > 0.0 ? std::abs(refined_sup_ratio - sup_ratio) / sup_ratio
                                          : (refined_sup_ratio > 0.0 ? kInfinity : 0.0);
  if (!(grid_refinement_drift <= max_drift)) {
    failures.push_back("sup quotient drifts by " + fmt(100.0 * grid_refinement_drift) + "% under refinement");
  }
}

EstimateReport verify_trilinear(const std::vector<TestFunction>& corpus, const CampaignSettings& settings) {
  require_nonempty(corpus, "verify_trilinear");
  require_trilinear_range(settings);
  const auto mod = modulation(settings.lattice, settings.p, settings.q);
  std::vector<double> homogeneity(corpus.size(), 0.0);

  auto evaluate = [&](const CampaignGrid& cg, bool base) {
    const GridSpec grid = cg.spec();
    const HartreeKernel k(grid, settings.lambda, settings.gamma);
    return collect(corpus.size(), [&](std::size_t i) {
      const Field f = corpus[i].sample(grid);
      const double nf = modulation_norm(f, mod);
      const double lhs = modulation_norm(nonlinearity(f, k), mod);
      if (base) {
        const double doubled = modulation_norm(nonlinearity(Complex(2.0) * f, k), mod);
        homogeneity[i] = lhs > 0.0 ? std::abs(doubled - 8.0 * lhs) / (8.0 * lhs) : std::abs(doubled);
      }
      return make_quotient(corpus[i].id, lhs, nf * nf * nf);
    });
  };

  EstimateReport rep;
  rep.name = "trilinear";
  rep.quotients = evaluate(settings.grid, true);
  rep.add_metric("cubic_homogeneity_error", *std::max_element(homogeneity.begin(), homogeneity.end()));
  rep.finish(settings.refine ? evaluate(settings.grid.refined(), false) : std::vector<Quotient>{});
  return rep;
}

EstimateReport verify_difference(const std::vector<TestFunction>& corpus, const CampaignSettings& settings) {
  require_nonempty(corpus, "verify_difference");
  require_trilinear_range(settings);
  const auto mod = modulation(settings.lattice, settings.p, settings.q);
  const TestFunction zero{"zero", true, [](std::span<const double>) { return Complex(0.0, 0.0); }};

  std::vector<std::pair<const TestFunction*, const TestFunction*>> pairs;
  for (std::size_t i = 0; i + 1 < corpus.size(); ++i) pairs.emplace_back(&corpus[i], &corpus[i + 1]);
  pairs.emplace_back(&corpus.front(), &zero);

  EstimateReport rep;
  rep.name = "difference";

  auto evaluate = [&](const CampaignGrid& cg) {
    const GridSpec grid = cg.spec();
    const HartreeKernel k(grid, settings.lambda, settings.gamma);
    auto all = collect(pairs.size(), [&](std::size_t i) {
      const Field f = pairs[i].first->sample(grid);
      const Field g = pairs[i].second->sample(grid);
      const double nf = modulation_norm(f, mod);
      const double ng = modulation_norm(g, mod);
      const double ndiff = modulation_norm(f - g, mod);
      const double lhs = modulation_norm(nonlinearity(f, k) - nonlinearity(g, k), mod);
      return make_quotient(pairs[i].first->id + "|" + pairs[i].second->id, lhs,
                           (nf * nf + nf * ng + ng * ng) * ndiff);
    });
    std::vector<Quotient> kept;
    for (auto& q : all) {
      if (q.rhs == 0.0 && q.lhs == 0.0) {
        rep.notes.push_back("skipped pair " + q.input_id + " with f = g");
        continue;
      }
      kept.push_back(std::move(q));
    }
    return kept;
  };

  rep.quotients = evaluate(settings.grid);

  // g = 0 reduces to the trilinear quotient of f.
  const GridSpec grid = settings.grid.spec();
  const HartreeKernel k(grid, settings.lambda, settings.gamma);
  const Field f0 = corpus.front().sample(grid);
  const double n0 = modulation_norm(f0, mod);
  const double trilinear = modulation_norm(nonlinearity(f0, k), mod) / (n0 * n0 * n0);
  rep.add_metric("degenerate_pair_mismatch", relative_gap(rep.quotients.back().ratio, trilinear));

  // Directional derivative: ||N(f + eps h) - N(f)|| / eps for two eps.
  const Field f = corpus[std::min<std::size_t>(1, corpus.size() - 1)].sample(grid);
  const Field h = corpus.back().sample(grid);
  const Field nf = nonlinearity(f, k);
  auto slope = [&](double eps) {
    return modulation_norm(nonlinearity(f + Complex(eps) * h, k) - nf, mod) / eps;
  };
  const double taylor = relative_gap(slope(1e-3), slope(5e-4));
  rep.add_metric("directional_derivative_mismatch", taylor);
  if (!(taylor <= 0.05)) rep.failures.push_back("directional derivative estimates disagree by " + fmt(taylor));

  rep.finish(settings.refine ? evaluate(settings.grid.refined()) : std::vector<Quotient>{});
  return rep;
}

EstimateReport verify_strichartz(const std::vector<TestFunction>& family, const AdmissiblePair& pair,
                                 const StrichartzSettings& settings) {
  require_nonempty(family, "verify_strichartz");
  const int d = settings.grid.dim;
  if (d < 2) throw ParameterError("radial Strichartz campaign needs d >= 2");
  settings.prop.validate();
  const double alpha = settings.prop.alpha;
  if (!(alpha > 2.0 * d / (2.0 * d - 1.0) && alpha <= 2.0)) {
    throw ParameterError("radial Strichartz campaign needs 2d/(2d-1) < alpha <= 2");
  }
  if (!pair.admissible() || pair.dim != d) throw ParameterError("pair is not admissible in this dimension");
  const double q = pair.q.to_double();
  const double r = to_double(pair.r);

  auto evaluate = [&](const CampaignGrid& cg, double t_end) {
    const GridSpec grid = cg.spec();
    return collect(family.size(), [&](std::size_t i) {
      const Field phi = family[i].sample(grid);
      const double peak = lp_norm(phi, kInfinity);
      if (radial_defect(phi) > 1e-10 * peak) {
        throw ParameterError("Strichartz campaign input '" + family[i].id + "' is not radial");
      }
      const double lhs = free_strichartz_norm(phi, settings.prop, t_end, settings.time_steps, q, r);
      return make_quotient(family[i].id, lhs, lp_norm(phi, 2.0));
    });
  };

  EstimateReport rep;
  rep.name = "strichartz";
  rep.quotients = evaluate(settings.grid, settings.t_end);
  double lo = kInfinity, hi = 0.0;
  for (const auto& qt : rep.quotients) {
    lo = std::min(lo, qt.ratio);
    hi = std::max(hi, qt.ratio);
  }
  const double spread = lo > 0.0 ? hi / lo : kInfinity;
  rep.add_metric("spread", spread);
  if (!(spread <= settings.max_spread)) rep.failures.push_back("quotient spread " + fmt(spread) + " exceeds bound");

  const auto longer = evaluate(settings.grid, 2.0 * settings.t_end);
  bool monotone = true;
  for (std::size_t i = 0; i < longer.size(); ++i) monotone = monotone && longer[i].ratio > rep.quotients[i].ratio;
  rep.add_metric("monotone_in_time", monotone ? 1.0 : 0.0);
  if (!monotone) rep.failures.push_back("quotient not increasing in T");
  rep.notes.push_back("pair (q, r) = (" + pair.q.str() + ", " + format_rational(pair.r) + ")");

  rep.finish(settings.refine ? evaluate(settings.grid.refined(), settings.t_end) : std::vector<Quotient>{});
  return rep;
}

EstimateReport verify_hls(const std::vector<TestFunction>& corpus, const HlsSettings& settings) {
  const int d = settings.grid.dim;
  const Rational q_exact = hls_conjugate(d, settings.gamma, settings.p);
  const double gamma = to_double(settings.gamma);
  const double p = to_double(settings.p);
  const double q = to_double(q_exact);

  auto quotient_on = [&](const GridSpec& grid, const HartreeKernel& k, const TestFunction& f) {
    const Field values = f.sample(grid);
    return make_quotient(f.id, lp_norm(riesz_potential(values, k), q), lp_norm(values, p));
  };
  auto evaluate = [&](const CampaignGrid& cg) {
    const GridSpec grid = cg.spec();
    const HartreeKernel k(grid, 1.0, gamma);
    return collect(corpus.size(), [&](std::size_t i) { return quotient_on(grid, k, corpus[i]); });
  };

  EstimateReport rep;
  rep.name = "hls_d" + std::to_string(d);
  rep.notes.push_back("p = " + format_rational(settings.p) + ", q = " + format_rational(q_exact));
  rep.quotients = evaluate(settings.grid);

  const GridSpec grid = settings.grid.spec();
  const HartreeKernel k(grid, 1.0, gamma);
  double lo = kInfinity, hi = 0.0;
  for (double mu : settings.dilations) {
    const double ratio = quotient_on(grid, k, settings.scaling_probe.dilated(mu)).ratio;
    rep.add_metric("dilation_" + fmt(mu), ratio);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  const double variation = lo > 0.0 ? (hi - lo) / lo : kInfinity;
  rep.add_metric("scaling_variation", variation);
  if (!(variation <= settings.max_scaling_variation)) {
    rep.failures.push_back("dilation variation " + fmt(100.0 * variation) + "% exceeds bound");
  }
  rep.finish(settings.refine ? evaluate(settings.grid.refined()) : std::vector<Quotient>{});
  return rep;
}

EstimateReport verify_propagator(const std::vector<TestFunction>& corpus, const PropagatorCampaignSettings& settings) {
  require_nonempty(corpus, "verify_propagator");
  settings.prop.validate();
  const int d = settings.grid.dim;
  std::vector<MixedExponents> exps;
  for (double p : settings.p_values) exps.push_back({p, settings.q, 0.0});
  double p2_excess = 0.0;

  auto evaluate = [&](const CampaignGrid& cg, bool base) {
    const GridSpec grid = cg.spec();
    const std::size_t per_function = settings.times.size() * exps.size();
    std::vector<Quotient> out(corpus.size() * per_function);
    std::vector<double> excess(corpus.size(), 0.0);
    parallel_for(corpus.size(), [&](std::size_t i, unsigned) {
      const Field f = corpus[i].sample(grid);
      const auto initial = modulation_norms(f, settings.lattice, exps);
      for (std::size_t ti = 0; ti < settings.times.size(); ++ti) {
        const double t = settings.times[ti];
        const auto evolved = modulation_norms(evolve_free(f, t, settings.prop), settings.lattice, exps);
        for (std::size_t e = 0; e < exps.size(); ++e) {
          const double p = exps[e].p;
          const double measured = initial[e] > 0.0 ? evolved[e] / initial[e] : 0.0;
          const double bound = std::pow(1.0 + t, d * std::abs(1.0 / p - 0.5));
          if (p == 2.0) excess[i] = std::max(excess[i], measured - 1.0);
          out[i * per_function + ti * exps.size() + e] =
              make_quotient(corpus[i].id + "|p=" + fmt(p) + "|t=" + fmt(t), measured, bound);
        }
      }
    });
    if (base) p2_excess = *std::max_element(excess.begin(), excess.end());
    return out;
  };

  EstimateReport rep;
  rep.name = "propagator";
  rep.quotients = evaluate(settings.grid, true);
  rep.add_metric("max_p2_excess", p2_excess);
  for (const auto& q : rep.quotients) {
    if (q.ratio > 1.0 + settings.slack) rep.failures.push_back(q.input_id + " exceeds the bound by " + fmt(q.ratio));
  }
  rep.finish(settings.refine ? evaluate(settings.grid.refined(), false) : std::vector<Quotient>{});
  return rep;
}

EstimateReport verify_algebra(const std::vector<TestFunction>& corpus, const CampaignSettings& settings) {
  require_nonempty(corpus, "verify_algebra");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = i; j < corpus.size(); ++j) pairs.emplace_back(i, j);
  }
  auto evaluate = [&](const CampaignGrid& cg) {
    const GridSpec grid = cg.spec();
    return collect(pairs.size(), [&](std::size_t n) {
      const auto [i, j] = pairs[n];
      const auto [lhs, rhs] = fl1_algebra_check(corpus[i].sample(grid), corpus[j].sample(grid));
      return make_quotient(corpus[i].id + "|" + corpus[j].id, lhs, rhs);
    });
  };

  EstimateReport rep;
  rep.name = "algebra";
  rep.quotients = evaluate(settings.grid);
  for (const auto& q : rep.quotients) {
    if (q.ratio > 1.0 + 1e-6) rep.failures.push_back(q.input_id + " violates the algebra bound: " + fmt(q.ratio));
  }

  const GridSpec grid = settings.grid.spec();
  const auto [glhs, grhs] = fl1_algebra_check(gaussian(1.0).sample(grid), gaussian(2.0).sample(grid));
  rep.add_metric("gaussian_equality_error", relative_gap(glhs, grhs));
  const Field f = gaussian(1.0).sample(grid);
  const double xi0 = 3.0 * grid.freq_step();
  const Field character = Field::sample(grid, [xi0](std::span<const double> x) {
    return std::polar(1.0, 2.0 * kPi * xi0 * x[0]);
  });
  const auto [clhs, crhs] = fl1_algebra_check(f, character);
  rep.add_metric("character_error", relative_gap(clhs, fourier_lebesgue_norm(f, 1.0)));
  (void)crhs;

  rep.finish(settings.refine ? evaluate(settings.grid.refined()) : std::vector<Quotient>{});
  return rep;
}

EstimateReport verify_module(const std::vector<TestFunction>& corpus, const CampaignSettings& settings) {
  require_nonempty(corpus, "verify_module");
  const auto mod = modulation(settings.lattice, settings.p, settings.q);
  std::vector<const TestFunction*> multipliers;
  for (const auto& f : corpus) {
    if (f.id == "gauss_w1" || f.id == "bump" || f.id == "random_band") multipliers.push_back(&f);
  }
  if (multipliers.empty()) multipliers.push_back(&corpus.front());
  std::vector<std::pair<const TestFunction*, const TestFunction*>> pairs;
  for (const auto* m : multipliers) {
    for (const auto& g : corpus) pairs.emplace_back(m, &g);
  }

  auto evaluate = [&](const CampaignGrid& cg) {
    const GridSpec grid = cg.spec();
    return collect(pairs.size(), [&](std::size_t n) {
      const Field f = pairs[n].first->sample(grid);
      const Field g = pairs[n].second->sample(grid);
      const double lhs = modulation_norm(antialiased_product(f, g), mod);
      const double rhs = fourier_lebesgue_norm(f, 1.0) * modulation_norm(g, mod);
      return make_quotient(pairs[n].first->id + "|" + pairs[n].second->id, lhs, rhs);
    });
  };

  EstimateReport rep;
  rep.name = "module";
  rep.quotients = evaluate(settings.grid);
  rep.finish(settings.refine ? evaluate(settings.grid.refined()) : std::vector<Quotient>{});
  return rep;
}

std::vector<EstimateReport> verify_embeddings(const std::vector<TestFunction>& corpus,
                                              const CampaignSettings& settings) {
  require_nonempty(corpus, "verify_embeddings");
  const std::vector<std::pair<NormSpec, NormSpec>> arrows = {
      {NormSpec::modulation(1, 1), NormSpec::lebesgue(1)},
      {NormSpec::modulation(2, 2), NormSpec::lebesgue(2)},
      {NormSpec::lebesgue(2), NormSpec::modulation(2, 2)},
      {NormSpec::lebesgue(1), NormSpec::modulation(1, kInfinity)},
      {NormSpec::modulation(1, 1), NormSpec::modulation(2, 2)},
      {NormSpec::modulation(2, 1), NormSpec::fourier_lebesgue(1)},
      {NormSpec::fourier_lebesgue(1), NormSpec::modulation(kInfinity, 1)},
  };
  std::vector<EstimateReport> reports;
  for (const auto& [from, to] : arrows) {
    const std::string arrow = embedding_arrow(from, to);
    auto evaluate = [&](const CampaignGrid& cg) {
      const GridSpec grid = cg.spec();
      return collect(corpus.size(), [&](std::size_t i) {
        const Field f = corpus[i].sample(grid);
        return make_quotient(corpus[i].id, evaluate_norm(f, to, settings.lattice),
                             evaluate_norm(f, from, settings.lattice));
      });
    };
    EstimateReport rep;
    rep.name = "embedding " + from.name() + " -> " + to.name();
    rep.notes.push_back(arrow);
    rep.quotients = evaluate(settings.grid);
    rep.finish(settings.refine ? evaluate(settings.grid.refined()) : std::vector<Quotient>{});
    reports.push_back(std::move(rep));
  }

  // Two Gaussian windows of different width give equivalent norms; the
  // Gaussian window also sees f and conj(f) identically.
  ModulationParams narrow = modulation(settings.lattice, 1.0, 1.0);
  narrow.window = Window::gaussian(1.0);
  ModulationParams wide = narrow;
  wide.window = Window::gaussian(2.0);
  std::vector<double> conj_gap(corpus.size(), 0.0);
  auto evaluate_windows = [&](const CampaignGrid& cg, bool base) {
    const GridSpec grid = cg.spec();
    return collect(corpus.size(), [&](std::size_t i) {
      const Field f = corpus[i].sample(grid);
      const double a = modulation_norm(f, narrow);
      if (base) conj_gap[i] = relative_gap(a, modulation_norm(conj(f), narrow));
      return make_quotient(corpus[i].id, a, modulation_norm(f, wide));
    });
  };
  EstimateReport win;
  win.name = "window_independence";
  win.quotients = evaluate_windows(settings.grid, true);
  double lo = kInfinity, hi = 0.0;
  for (const auto& q : win.quotients) {
    lo = std::min(lo, q.ratio);
    hi = std::max(hi, q.ratio);
  }
  const double spread = lo > 0.0 ? hi / lo : kInfinity;
  win.add_metric("spread", spread);
  const double conj_max = *std::max_element(conj_gap.begin(), conj_gap.end());
  win.add_metric("conjugation_gap", conj_max);
  if (!(spread <= 10.0)) win.failures.push_back("window ratio spread " + fmt(spread) + " exceeds 10");
  if (!(conj_max <= 1e-10)) win.failures.push_back("conjugation changes the norm by " + fmt(conj_max));
  win.finish(settings.refine ? evaluate_windows(settings.grid.refined(), false) : std::vector<Quotient>{});
  reports.push_back(std::move(win));
  return reports;
}

VerifyOptions::VerifyOptions() {
  base.grid = CampaignGrid{1, 16.0, 512};
  propagator.grid = CampaignGrid{1, 16.0, 512};
  hls2.grid = CampaignGrid{2, 16.0, 512};
  hls2.gamma = Rational(1);
  hls2.p = Rational(4, 3);
  hls3.grid = CampaignGrid{3, 6.0, 64};
  hls3.gamma = Rational(1);
  hls3.p = Rational(6, 5);
  strichartz.prop.alpha = to_double(strichartz_alpha);
}

std::vector<std::string> suite_names() {
  return {"trilinear", "difference", "strichartz", "hls", "propagator", "algebra", "embeddings"};
}

std::vector<EstimateReport> run_suite(const std::string& suite, const VerifyOptions& options) {
  if (suite == "all") {
    std::vector<EstimateReport> all;
    for (const auto& name : suite_names()) {
      auto part = run_suite(name, options);
      for (auto& r : part) all.push_back(std::move(r));
    }
    return all;
  }
  const int d = options.base.grid.dim;
  if (suite == "trilinear") return {verify_trilinear(standard_corpus(d, options.seed), options.base)};
  if (suite == "difference") return {verify_difference(standard_corpus(d, options.seed), options.base)};
  if (suite == "strichartz") {
    std::vector<TestFunction> family;
    for (double w : corpus_gaussian_widths()) family.push_back(gaussian(w));
    const auto pair = hartree_admissible_pair(options.strichartz_alpha, options.strichartz.grid.dim,
                                              options.strichartz_gamma);
    return {verify_strichartz(family, pair, options.strichartz)};
  }
  if (suite == "hls") {
    std::vector<TestFunction> small;
    for (double w : {0.5, 1.0, 2.0}) small.push_back(gaussian(w));
    return {verify_hls(standard_corpus(options.hls2.grid.dim, options.seed), options.hls2),
            verify_hls(small, options.hls3)};
  }
  if (suite == "propagator") {
    return {verify_propagator(standard_corpus(options.propagator.grid.dim, options.seed), options.propagator)};
  }
  if (suite == "algebra") {
    const auto corpus = standard_corpus(d, options.seed);
    return {verify_algebra(corpus, options.base), verify_module(corpus, options.base)};
  }
  if (suite == "embeddings") return verify_embeddings(standard_corpus(d, options.seed), options.base);
  throw ParameterError("unknown verification suite '" + suite + "'");
}

}  // namespace frachartree
