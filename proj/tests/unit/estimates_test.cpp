#include <gtest/gtest.h>

#include "frachartree/errors.hpp"
#include "frachartree/estimates.hpp"

namespace frachartree {
namespace {

Rational R(std::int64_t n, std::int64_t d = 1) { return Rational(n, d); }

TEST(Rational, ParsesForms) {
  EXPECT_EQ(parse_rational("7/10"), R(7, 10));
  EXPECT_EQ(parse_rational("0.7"), R(7, 10));
  EXPECT_EQ(parse_rational("-1.25"), R(-5, 4));
  EXPECT_EQ(parse_rational(" 3 "), R(3));
  EXPECT_THROW(parse_rational("1/0"), ParameterError);
  EXPECT_THROW(parse_rational("abc"), ParameterError);
  EXPECT_THROW(parse_rational("1e3"), ParameterError);
  EXPECT_EQ(format_rational(R(12, 5)), "12/5");
  EXPECT_EQ(format_rational(R(8)), "8");
}

TEST(Exponent, InfinityArithmetic) {
  const Exponent inf = Exponent::parse("inf");
  EXPECT_TRUE(inf.is_infinite());
  EXPECT_EQ(inf.reciprocal(), R(0));
  EXPECT_EQ(inf.str(), "inf");
  EXPECT_THROW(inf.value(), ParameterError);
  EXPECT_EQ(Exponent(R(4)).reciprocal(), R(1, 4));
  EXPECT_TRUE(Exponent::parse("8") == Exponent(R(8)));
}

TEST(HartreePair, CoulombCase) {
  const AdmissiblePair p = hartree_admissible_pair(R(2), 3, R(1));
  EXPECT_EQ(p.q.value(), R(8));
  EXPECT_EQ(p.r, R(12, 5));
  EXPECT_EQ(p.alpha / p.q.value(), R(1, 4));
  EXPECT_EQ(R(3) * (R(1, 2) - R(1) / p.r), R(1, 4));
  EXPECT_EQ(p.residue(), R(0));
  EXPECT_TRUE(p.admissible());
}

TEST(HartreePair, RadialFractionalCase) {
  const AdmissiblePair p = hartree_admissible_pair(R(3, 2), 2, R(7, 10));
  EXPECT_EQ(p.q.value(), R(60, 7));
  EXPECT_EQ(p.r, R(80, 33));
  EXPECT_EQ(p.residue(), R(0));
}

TEST(HartreePair, EndpointAcceptedForAnyAlpha) {
  for (int d = 1; d <= 3; ++d) {
    for (Rational alpha : {R(1), R(3, 2), R(2)}) {
      const AdmissiblePair p = make_admissible_pair(Exponent::infinity(), R(2), alpha, d);
      EXPECT_TRUE(p.admissible());
    }
  }
}

TEST(HartreePair, RejectsInfeasible) {
  EXPECT_THROW(hartree_admissible_pair(R(1), 2, R(1)), ParameterError);
  EXPECT_THROW(hartree_admissible_pair(R(2), 1, R(1)), ParameterError);
  EXPECT_THROW(hartree_admissible_pair(R(2), 3, R(0)), ParameterError);
  EXPECT_THROW(make_admissible_pair(Exponent(R(4)), R(3), R(2), 1), ParameterError);
}

TEST(HlsConjugate, KnownCases) {
  EXPECT_EQ(hls_conjugate(3, R(1), R(6, 5)), R(6));
  EXPECT_EQ(hls_conjugate(2, R(1), R(4, 3)), R(4));
  EXPECT_THROW(hls_conjugate(3, R(1), R(2)), ParameterError);
  EXPECT_THROW(hls_conjugate(2, R(1), R(1)), ParameterError);
}

TEST(RangeGate, RadialFractionalClause) {
  const RangeReport r = range_gate(R(3, 2), 2, R(7, 10), R(2), R(1));
  EXPECT_TRUE(r.admissible());
  EXPECT_TRUE(r.radial_fractional);
  EXPECT_FALSE(r.classical);
  EXPECT_TRUE(r.failures().empty());
}

TEST(RangeGate, ClassicalClause) {
  const RangeReport r = range_gate(R(2), 1, R(2, 5), R(1), R(1));
  EXPECT_TRUE(r.admissible());
  EXPECT_TRUE(r.classical);
  EXPECT_FALSE(r.radial_fractional);
}

TEST(RangeGate, HalfDimensionExcluded) {
  for (int d = 1; d <= 3; ++d) {
    const RangeReport r = range_gate(R(2), d, R(d, 2), R(1), R(1));
    EXPECT_FALSE(r.gamma_ok);
    EXPECT_FALSE(r.admissible());
    EXPECT_NE(r.failures().find("gamma"), std::string::npos);
  }
}

TEST(RangeGate, OtherClauses) {
  EXPECT_FALSE(range_gate(R(2), 1, R(2, 5), R(3), R(1)).p_ok);
  // q must stay below 2d/(d + gamma) = 10/7 for d = 1, gamma = 2/5.
  EXPECT_FALSE(range_gate(R(2), 1, R(2, 5), R(1), R(10, 7)).q_ok);
  EXPECT_TRUE(range_gate(R(2), 1, R(2, 5), R(1), R(7, 5)).q_ok);
  // Fractional alpha needs d >= 2 and alpha > 2d/(2d-1).
  EXPECT_FALSE(range_gate(R(3, 2), 1, R(2, 5), R(1), R(1)).admissible());
  EXPECT_FALSE(range_gate(R(4, 3), 2, R(7, 10), R(1), R(1)).admissible());
  EXPECT_FALSE(range_gate(R(5, 2), 2, R(7, 10), R(1), R(1)).admissible());
}

TEST(ProofExponents, CoulombTable) {
  const ProofExponents e = proof_exponents(R(2), 3, R(1));
  EXPECT_EQ(e.s, R(1));
  EXPECT_EQ(e.delta, R(8, 3));
  EXPECT_EQ(e.q_dual, R(8, 7));
  EXPECT_EQ(e.r_dual, R(12, 7));
  EXPECT_EQ(e.identities.size(), 5u);
  EXPECT_TRUE(e.all_hold());
}

TEST(ProofExponents, FractionalTable) {
  const ProofExponents e = proof_exponents(R(3, 2), 2, R(7, 10));
  EXPECT_EQ(e.delta, R(60, 23));
  EXPECT_TRUE(e.all_hold());
  for (const auto& id : e.identities) EXPECT_EQ(id.lhs, id.rhs) << id.name;
}

TEST(ProofExponents, InfeasibleRejected) {
  EXPECT_THROW(proof_exponents(R(1), 2, R(3, 2)), ParameterError);
}

}  // namespace
}  // namespace frachartree
