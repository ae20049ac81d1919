#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frachartree/errors.hpp"
#include "frachartree/propagator.hpp"

namespace frachartree {
namespace {

Field gaussian_field(const GridSpec& g) {
  return Field::sample(g, [](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return Complex(std::exp(-kPi * r2), 0.0);
  });
}

Field random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<Complex> v(g.size());
  for (auto& z : v) z = Complex(n(rng), n(rng));
  return Field(g, std::move(v));
}

// (1 + i s t)^(-d/2) exp(-pi |x|^2 / (1 + i s t)), s the direction sign.
Field schroedinger_gaussian(const GridSpec& g, double t, double sign) {
  const Complex a(1.0, sign * t);
  return Field::sample(g, [&](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return std::pow(a, -0.5 * static_cast<double>(x.size())) * std::exp(-kPi * r2 / a);
  });
}

TEST(PropagatorSpec, Validates) {
  EXPECT_THROW((PropagatorSpec{0.5}).validate(), ParameterError);
  EXPECT_THROW((PropagatorSpec{2.5}).validate(), ParameterError);
  EXPECT_THROW((PropagatorSpec{2.0, 0.0}).validate(), ParameterError);
  EXPECT_NO_THROW((PropagatorSpec{0.75}).validate());
  EXPECT_EQ((PropagatorSpec{}).reversed().direction, Direction::Backward);
}

TEST(EvolveFree, ZeroTimeIsIdentity) {
  const GridSpec g(1, 4.0, 128);
  const Field f = random_field(g, 1);
  EXPECT_LE(l2_distance(evolve_free(f, 0.0, {}), f), 1e-12 * lp_norm(f, 2.0));
}

TEST(EvolveFree, MatchesGaussianClosedForm) {
  const GridSpec g(1, 8.0, 256);
  for (Direction dir : {Direction::Forward, Direction::Backward}) {
    const PropagatorSpec spec{2.0, kPi, dir};
    for (double t : {0.25, 1.0}) {
      const Field u = evolve_free(gaussian_field(g), t, spec);
      const Field exact = schroedinger_gaussian(g, t, spec.sign());
      EXPECT_LE(l2_distance(u, exact), 1e-8) << "t=" << t;
    }
  }
}

TEST(EvolveFree, ClosedFormStableOnFinerGrid) {
  const GridSpec g(1, 8.0, 1024);
  const Field u = evolve_free(gaussian_field(g), 1.0, {});
  EXPECT_LE(l2_distance(u, schroedinger_gaussian(g, 1.0, 1.0)), 1e-8);
}

TEST(EvolveFree, PreservesL2) {
  const GridSpec g(2, 4.0, 32);
  const Field f = random_field(g, 4);
  for (double alpha : {0.75, 1.5, 2.0}) {
    for (double t : {0.1, 3.0, -2.0}) {
      const Field u = evolve_free(f, t, PropagatorSpec{alpha});
      EXPECT_NEAR(lp_norm(u, 2.0) / lp_norm(f, 2.0), 1.0, 1e-12);
    }
  }
}

TEST(EvolveFree, WorksInFrequencySpace) {
  const GridSpec g(1, 4.0, 64);
  const Field f = random_field(g, 8);
  const PropagatorSpec spec{1.3};
  const Field a = evolve_free(f, 0.7, spec);
  const Field b = evolve_free(dft(f), 0.7, spec);
  EXPECT_EQ(b.space(), Space::Frequency);
  EXPECT_LE(l2_distance(idft(b), a), 1e-12);
}

TEST(EvolveFree, RejectsNonFiniteTime) {
  const GridSpec g(1, 4.0, 16);
  EXPECT_THROW(evolve_free(Field::zeros(g), std::nan(""), {}), ParameterError);
}

TEST(GroupLaw, ZeroTimes) {
  const GridSpec g(1, 4.0, 64);
  EXPECT_LE(group_law_check(random_field(g, 2), 0.0, 0.0, {}), 1e-13);
}

TEST(GroupLaw, InverseReturnsData) {
  const GridSpec g(1, 4.0, 64);
  const Field f = random_field(g, 3);
  const PropagatorSpec spec{1.6};
  EXPECT_LE(l2_distance(evolve_free(evolve_free(f, 0.9, spec), -0.9, spec), f), 1e-12 * lp_norm(f, 2.0));
}

TEST(GroupLaw, RandomFractional) {
  const GridSpec g(2, 4.0, 32);
  EXPECT_LE(group_law_check(random_field(g, 6), 0.3, 0.7, PropagatorSpec{1.6}), 1e-11);
}

}  // namespace
}  // namespace frachartree
