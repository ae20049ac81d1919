#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frachartree/corpus.hpp"
#include "frachartree/errors.hpp"
#include "frachartree/timefreq.hpp"

namespace frachartree {
namespace {

Field gaussian_field(const GridSpec& g, double amplitude = 1.0) {
  return Field::sample(g, [amplitude](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return Complex(amplitude * std::exp(-kPi * r2), 0.0);
  });
}

TEST(Stft, GaussianAgainstClosedForm) {
  const GridSpec g(1, 8.0, 256);
  const double amp = std::pow(2.0, 0.25);
  const StftGram gram = stft(gaussian_field(g, amp), ModulationParams{});
  ASSERT_EQ(gram.dim, 1);
  ASSERT_GT(gram.values.size(), 0u);
  double worst = 0.0;
  for (std::size_t b = 0; b < gram.w_size(); ++b) {
    const double w = gram.frequency(b)[0];
    for (std::size_t a = 0; a < gram.x_size(); ++a) {
      const double x = gram.position(a)[0];
      const double expected = std::exp(-kPi * (x * x + w * w) / 2.0);
      worst = std::max(worst, std::abs(std::abs(gram.at(b, a)) - expected));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Stft, GaussianAgainstDirectQuadrature) {
  const GridSpec g(1, 8.0, 256);
  const double amp = std::pow(2.0, 0.25);
  const StftGram gram = stft(gaussian_field(g, amp), ModulationParams{});
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pick_x(0, gram.x_size() - 1), pick_w(0, gram.w_size() - 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t a = pick_x(rng), b = pick_w(rng);
    const double x = gram.position(a)[0], w = gram.frequency(b)[0];
    // V_g f(x, w) = int f(t) g(t - x) e^{-2 pi i t w} dt on a fine line.
    Complex sum = 0.0;
    const double h = 1e-3;
    for (double t = -12.0; t <= 12.0; t += h) {
      const double tp = t - x;
      sum += amp * std::exp(-kPi * t * t) * amp * std::exp(-kPi * tp * tp) * std::polar(1.0, -2.0 * kPi * t * w);
    }
    sum *= h;
    EXPECT_NEAR(std::abs(gram.at(b, a)), std::abs(sum), 1e-6) << "x=" << x << " w=" << w;
  }
}

TEST(Stft, ZeroGivesZeroGram) {
  const GridSpec g(1, 4.0, 64);
  const StftGram gram = stft(Field::zeros(g), ModulationParams{});
  for (const auto& v : gram.values) EXPECT_EQ(v, Complex(0.0, 0.0));
}

TEST(Stft, TranslationCovariance) {
  const GridSpec g(1, 8.0, 128);
  const auto corpus = standard_corpus(1);
  ModulationParams params;
  params.x_stride = 2;
  for (const auto& fn : corpus) {
    const Field f = fn.sample(g);
    const long shift_positions = 3;
    const Field moved = translate(f, {shift_positions * 2, 0, 0});
    const StftGram a = stft(f, params);
    const StftGram b = stft(moved, params);
    double worst = 0.0;
    for (std::size_t w = 0; w < a.w_size(); ++w) {
      for (std::size_t x = 0; x < a.x_size(); ++x) {
        const std::size_t xs = (x + shift_positions) % a.x_size();
        worst = std::max(worst, std::abs(std::abs(b.at(w, xs)) - std::abs(a.at(w, x))));
      }
    }
    EXPECT_LE(worst, 1e-10) << fn.id;
  }
}

TEST(Stft, RefusesOversizedGram) {
  const GridSpec g(2, 8.0, 256);
  EXPECT_THROW(stft(Field::zeros(g), ModulationParams{}), StructuralError);
}

TEST(ModulationNorm, L2AgreementOnCorpus) {
  for (int d = 1; d <= 2; ++d) {
    const GridSpec g(d, 8.0, d == 1 ? 256 : 64);
    for (const auto& fn : standard_corpus(d)) {
      const Field f = fn.sample(g);
      const double m22 = modulation_norm(f, ModulationParams{});
      EXPECT_NEAR(m22 / lp_norm(f, 2.0), 1.0, 1e-3) << fn.id << " d=" << d;
    }
  }
}

TEST(ModulationNorm, ZeroAndHomogeneity) {
  const GridSpec g(1, 8.0, 128);
  ModulationParams params;
  params.p = 1.0;
  params.q = 1.0;
  EXPECT_EQ(modulation_norm(Field::zeros(g), params), 0.0);
  const Field f = standard_corpus(1)[5].sample(g);
  const Complex c(3.0, -4.0);
  const double base = modulation_norm(f, params);
  EXPECT_NEAR(modulation_norm(c * f, params), 5.0 * base, 1e-12 * 5.0 * base);
}

TEST(ModulationNorm, BatchMatchesSingle) {
  const GridSpec g(1, 8.0, 128);
  const Field f = gaussian_field(g);
  ModulationParams lattice;
  lattice.x_stride = 2;
  lattice.w_step = 2.0 * g.freq_step();
  const std::vector<MixedExponents> ex = {{1, 1, 0}, {2, 1, 0}, {kInfinity, 1, 0}, {2, 2, 1.5}};
  const auto batch = modulation_norms(f, lattice, ex);
  ASSERT_EQ(batch.size(), ex.size());
  for (std::size_t i = 0; i < ex.size(); ++i) {
    ModulationParams p = lattice;
    p.p = ex[i].p;
    p.q = ex[i].q;
    p.s = ex[i].s;
    EXPECT_NEAR(batch[i], modulation_norm(f, p), 1e-12 * batch[i]);
  }
}

TEST(ModulationNorm, WeightIncreasesNorm) {
  const GridSpec g(1, 8.0, 128);
  const Field f = gaussian_field(g);
  ModulationParams a, b;
  b.s = 1.0;
  EXPECT_GT(modulation_norm(f, b), modulation_norm(f, a));
}

TEST(ModulationParams, Validation) {
  const GridSpec g(1, 8.0, 64);
  ModulationParams p;
  p.p = 0.5;
  EXPECT_THROW(p.validate(g), ParameterError);
  ModulationParams s;
  s.x_stride = 3;
  EXPECT_THROW(s.validate(g), ParameterError);
  ModulationParams w;
  w.w_step = -1.0;
  EXPECT_THROW(w.validate(g), ParameterError);
}

TEST(FourierLebesgue, GaussianUnitIntegral) {
  const GridSpec g(1, 8.0, 256);
  EXPECT_NEAR(fourier_lebesgue_norm(gaussian_field(g), 1.0), 1.0, 1e-8);
}

TEST(FourierLebesgue, ParsevalAtTwo) {
  const GridSpec g(2, 4.0, 32);
  for (const auto& fn : standard_corpus(2)) {
    const Field f = fn.sample(g);
    EXPECT_NEAR(fourier_lebesgue_norm(f, 2.0), lp_norm(f, 2.0), 1e-10 * (1.0 + lp_norm(f, 2.0))) << fn.id;
  }
}

TEST(FourierLebesgue, ModulationInvariant) {
  const GridSpec g(1, 8.0, 128);
  const Field f = standard_corpus(1)[6].sample(g);
  const double base = fourier_lebesgue_norm(f, 1.0);
  EXPECT_NEAR(fourier_lebesgue_norm(modulate(f, {7, 0, 0}), 1.0), base, 1e-12 * base);
}

TEST(Embedding, ArrowsClassified) {
  EXPECT_EQ(embedding_arrow(NormSpec::modulation(1, 1), NormSpec::modulation(2, 2)), "inclusion");
  EXPECT_EQ(embedding_arrow(NormSpec::modulation(1, 1), NormSpec::lebesgue(1)), "modulation_to_lp");
  EXPECT_EQ(embedding_arrow(NormSpec::lebesgue(2), NormSpec::modulation(2, 2)), "lp_to_modulation");
  EXPECT_EQ(embedding_arrow(NormSpec::modulation(2, 2), NormSpec::fourier_lebesgue(2)), "modulation_to_flp");
  EXPECT_EQ(embedding_arrow(NormSpec::fourier_lebesgue(1), NormSpec::modulation(kInfinity, 1)),
            "flp_to_modulation");
  EXPECT_THROW(embedding_arrow(NormSpec::modulation(2, 2), NormSpec::modulation(1, 1)), ParameterError);
  EXPECT_THROW(embedding_arrow(NormSpec::lebesgue(1), NormSpec::lebesgue(2)), ParameterError);
}

TEST(Embedding, ProbeValues) {
  const GridSpec g(1, 8.0, 256);
  const Field f = gaussian_field(g);
  const double m11_to_l1 = probe_embedding(f, NormSpec::modulation(1, 1), NormSpec::lebesgue(1));
  EXPECT_TRUE(std::isfinite(m11_to_l1));
  EXPECT_GT(m11_to_l1, 0.0);
  EXPECT_NEAR(probe_embedding(f, NormSpec::lebesgue(2), NormSpec::modulation(2, 2)), 1.0, 1e-3);
  EXPECT_EQ(probe_embedding(Field::zeros(g), NormSpec::lebesgue(2), NormSpec::modulation(2, 2)), 0.0);
}

TEST(NormSpec, Names) {
  EXPECT_EQ(NormSpec::lebesgue(1).name(), "L^1");
  EXPECT_EQ(NormSpec::fourier_lebesgue(1).name(), "FL^1");
  EXPECT_EQ(NormSpec::modulation(1, 1).name(), "M^{1,1}");
}

TEST(Fl1Algebra, GaussiansSaturate) {
  const GridSpec g(1, 8.0, 256);
  const Field f = gaussian_field(g);
  const Field h = Field::sample(g, [](std::span<const double> x) { return Complex(std::exp(-kPi * x[0] * x[0] / 4.0)); });
  const auto [lhs, rhs] = fl1_algebra_check(f, h);
  EXPECT_NEAR(lhs / rhs, 1.0, 1e-6);
}

TEST(Fl1Algebra, CharacterActsByModulation) {
  const GridSpec g(1, 8.0, 128);
  const Field f = standard_corpus(1)[6].sample(g);
  const Field one = Field::sample(g, [](std::span<const double>) { return Complex(1.0, 0.0); });
  const Field chi = modulate(one, {5, 0, 0});
  const auto [lhs, rhs] = fl1_algebra_check(f, chi);
  EXPECT_NEAR(lhs, fourier_lebesgue_norm(f, 1.0), 1e-12 * lhs);
  EXPECT_GE(rhs, lhs * (1.0 - 1e-12));
}

TEST(Fl1Algebra, ZeroGivesZeroPair) {
  const GridSpec g(1, 8.0, 64);
  const auto [lhs, rhs] = fl1_algebra_check(Field::zeros(g), gaussian_field(g));
  EXPECT_EQ(lhs, 0.0);
  EXPECT_EQ(rhs, 0.0);
}

TEST(RefineBandLimited, PreservesSamplesAndNorms) {
  const GridSpec g(1, 8.0, 64);
  const Field f = gaussian_field(g);
  const Field fine = refine_band_limited(f);
  ASSERT_EQ(fine.grid().points(), 128u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(fine[2 * i] - f[i]), 0.0, 1e-12);
  EXPECT_NEAR(fourier_lebesgue_norm(fine, 1.0), fourier_lebesgue_norm(f, 1.0), 1e-12);
}

TEST(ConjugateExponent, Values) {
  EXPECT_EQ(conjugate_exponent(2.0), 2.0);
  EXPECT_EQ(conjugate_exponent(1.0), kInfinity);
  EXPECT_EQ(conjugate_exponent(kInfinity), 1.0);
  EXPECT_NEAR(conjugate_exponent(4.0), 4.0 / 3.0, 1e-15);
}

}  // namespace
}  // namespace frachartree
