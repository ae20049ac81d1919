#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "frachartree/campaigns.hpp"
#include "frachartree/errors.hpp"

namespace frachartree {
namespace {

CampaignSettings small_settings() {
  CampaignSettings s;
  s.grid = CampaignGrid{1, 8.0, 128};
  s.lattice.x_stride = 2;
  s.lattice.w_step = 2.0 / 16.0;
  s.refine = false;
  return s;
}

TEST(Corpus, StandardMembers) {
  const auto corpus = standard_corpus(1);
  ASSERT_EQ(corpus.size(), 7u);
  std::set<std::string> ids;
  for (const auto& f : corpus) ids.insert(f.id);
  EXPECT_EQ(ids.size(), corpus.size());
  EXPECT_TRUE(ids.count("gauss_w1"));
  EXPECT_TRUE(ids.count("bump"));
  EXPECT_TRUE(ids.count("two_bump"));
  EXPECT_TRUE(ids.count("random_band"));
  EXPECT_EQ(radial_only(corpus).size(), 5u);
  EXPECT_EQ(corpus_gaussian_widths().size(), 4u);
}

TEST(Corpus, SeedIsReproducible) {
  const GridSpec g(1, 8.0, 64);
  const Field a = standard_corpus(1, 5)[6].sample(g);
  const Field b = standard_corpus(1, 5)[6].sample(g);
  const Field c = standard_corpus(1, 6)[6].sample(g);
  EXPECT_EQ(l2_distance(a, b), 0.0);
  EXPECT_GT(l2_distance(a, c), 0.0);
}

TEST(Corpus, DilationAndScaling) {
  const TestFunction g = gaussian(1.0);
  const double x[1] = {0.5};
  EXPECT_NEAR(g.dilated(2.0).eval(x).real(), std::exp(-kPi), 1e-15);
  EXPECT_NEAR(std::abs(g.scaled(Complex(0.0, 3.0)).eval(x)), 3.0 * std::exp(-kPi / 4.0), 1e-15);
  const double outside[1] = {1.6};
  EXPECT_EQ(bump(1.5).eval(outside), Complex(0.0, 0.0));
}

TEST(EstimateReport, RefinementRule) {
  EstimateReport r;
  r.quotients = {make_quotient("a", 1.0, 2.0)};
  r.finish({make_quotient("a", 1.1, 2.0)});
  EXPECT_FALSE(r.failed());
  EXPECT_NEAR(r.grid_refinement_drift, 0.1, 1e-12);

  EstimateReport bad;
  bad.quotients = {make_quotient("a", 1.0, 0.0)};
  bad.finish({});
  EXPECT_TRUE(bad.failed());

  EstimateReport drifting;
  drifting.quotients = {make_quotient("a", 1.0, 1.0)};
  drifting.finish({make_quotient("a", 3.0, 1.0)});
  EXPECT_TRUE(drifting.failed());
  EXPECT_THROW(drifting.metric("missing"), std::out_of_range);
}

TEST(MakeQuotient, ZeroConventions) {
  EXPECT_EQ(make_quotient("z", 0.0, 0.0).ratio, 0.0);
  EXPECT_TRUE(std::isinf(make_quotient("z", 1.0, 0.0).ratio));
}

TEST(Trilinear, FiniteAndCubicHomogeneous) {
  const EstimateReport r = verify_trilinear(standard_corpus(1), small_settings());
  EXPECT_FALSE(r.failed());
  for (const auto& q : r.quotients) EXPECT_TRUE(std::isfinite(q.ratio)) << q.input_id;
  EXPECT_LE(r.metric("cubic_homogeneity_error"), 1e-10);
  EXPECT_GT(r.sup_ratio, 0.0);
}

TEST(Trilinear, RejectsExponentsOutsideRange) {
  CampaignSettings s = small_settings();
  s.q = 2.0;
  EXPECT_THROW(verify_trilinear(standard_corpus(1), s), ParameterError);
}

TEST(Difference, DegeneratesAndLinearizes) {
  const EstimateReport r = verify_difference(standard_corpus(1), small_settings());
  EXPECT_FALSE(r.failed());
  EXPECT_LE(r.metric("degenerate_pair_mismatch"), 1e-12);
  EXPECT_LE(r.metric("directional_derivative_mismatch"), 0.05);
}

TEST(Strichartz, ScaleInvariantQuotient) {
  StrichartzSettings s;
  s.grid = CampaignGrid{2, 8.0, 64};
  s.time_steps = 16;
  s.refine = false;
  const AdmissiblePair pair = hartree_admissible_pair(Rational(3, 2), 2, Rational(7, 10));
  const std::vector<TestFunction> one = {gaussian(1.0)};
  const std::vector<TestFunction> scaled = {gaussian(1.0).scaled(Complex(0.0, 7.0))};
  const double a = verify_strichartz(one, pair, s).quotients[0].ratio;
  const double b = verify_strichartz(scaled, pair, s).quotients[0].ratio;
  EXPECT_NEAR(a, b, 1e-12 * a);
}

TEST(Strichartz, RejectsNonRadialInput) {
  StrichartzSettings s;
  s.grid = CampaignGrid{2, 8.0, 32};
  s.time_steps = 4;
  s.refine = false;
  const AdmissiblePair pair = hartree_admissible_pair(Rational(3, 2), 2, Rational(7, 10));
  const auto corpus = standard_corpus(2);
  const std::vector<TestFunction> bad = {corpus[5]};
  EXPECT_THROW(verify_strichartz(bad, pair, s), ParameterError);
}

TEST(Hls, ZeroFunctionGivesZeroQuotient) {
  HlsSettings s;
  s.grid = CampaignGrid{2, 8.0, 64};
  s.refine = false;
  const TestFunction zero{"zero", true, [](std::span<const double>) { return Complex(0.0, 0.0); }};
  const EstimateReport r = verify_hls({zero}, s);
  EXPECT_EQ(r.quotients[0].ratio, 0.0);
}

TEST(Propagator, UnitaryAtPTwo) {
  PropagatorCampaignSettings s;
  s.grid = CampaignGrid{1, 8.0, 128};
  s.p_values = {2.0};
  s.q = 2.0;
  s.refine = false;
  const EstimateReport r = verify_propagator(standard_corpus(1), s);
  for (const auto& q : r.quotients) EXPECT_LE(q.ratio, 1.0 + 1e-6) << q.input_id;
}

TEST(Algebra, GaussianSaturation) {
  const EstimateReport r = verify_algebra(standard_corpus(1), small_settings());
  EXPECT_FALSE(r.failed());
  EXPECT_LE(r.metric("gaussian_equality_error"), 1e-6);
  EXPECT_LE(r.metric("character_error"), 1e-12);
  for (const auto& q : r.quotients) EXPECT_LE(q.ratio, 1.0 + 1e-9) << q.input_id;
}

TEST(Suites, NamesAndUnknown) {
  const auto names = suite_names();
  EXPECT_EQ(names.size(), 7u);
  EXPECT_THROW(run_suite("nonsense", VerifyOptions{}), ParameterError);
}

}  // namespace
}  // namespace frachartree
