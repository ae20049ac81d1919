#pragma once

// Exact exponent bookkeeping: admissible pairs, Hardy-Littlewood-Sobolev
// conjugates, the well-posedness hypothesis gate and the Hoelder exponents
// of the contraction argument.

#include <string>
#include <vector>

#include "frachartree/rational.hpp"

namespace frachartree {

/// (q, r) with alpha / q = d (1/2 - 1/r), q, r >= 2.
struct AdmissiblePair {
  Exponent q;
  Rational r;
  Rational alpha;
  int dim = 1;

  /// alpha / q - d (1/2 - 1/r); exactly zero for an admissible pair.
  Rational residue() const;
  bool admissible() const;
};

/// Throws ParameterError unless q, r >= 2 and the scaling identity holds.
AdmissiblePair make_admissible_pair(Exponent q, Rational r, Rational alpha, int dim);

/// (4 alpha / gamma, 4d / (2d - gamma)). Throws ParameterError unless
/// d >= 1 and 0 < gamma < min(alpha, d).
AdmissiblePair hartree_admissible_pair(Rational alpha, int dim, Rational gamma);

/// q with 1/q = 1/p + gamma/d - 1. Throws ParameterError unless 0 < gamma < d,
/// p > 1 and 1/q > 0.
Rational hls_conjugate(int dim, Rational gamma, Rational p);

struct Clause {
  std::string name;
  std::string statement;
  bool holds = false;
};

struct RangeReport {
  std::vector<Clause> clauses;
  bool gamma_ok = false;
  bool p_ok = false;
  bool q_ok = false;
  bool radial_fractional = false;
  bool classical = false;

  /// Common clauses hold and one of the alpha clauses holds.
  bool admissible() const { return gamma_ok && p_ok && q_ok && (radial_fractional || classical); }
  /// Human-readable list of failing clauses.
  std::string failures() const;
};

/// Evaluates the hypotheses of the global well-posedness theorem:
///   0 < gamma < min(alpha, d/2), 1 <= p <= 2, 1 <= q < 2d/(d + gamma), and
///   either d >= 2 with 2d/(2d-1) < alpha < 2 (radial data) or alpha = 2.
RangeReport range_gate(Rational alpha, int dim, Rational gamma, Rational p, Rational q);

struct Identity {
  std::string name;
  Rational lhs;
  Rational rhs;
  bool holds() const { return lhs == rhs; }
};

/// Exponents of the Hoelder/Strichartz bookkeeping with s = alpha/2:
/// q = 8s/gamma, r = 4d/(2d-gamma), delta = 8s/(4s-gamma) and the Hoelder
/// duals q', r'. The identities checked are admissibility of (q, r),
/// 1/q' = (4s-gamma)/(4s) + 1/q, 1/r' = gamma/(2d) + 1/r,
/// 1/q' = 1/2 + 1/delta and 1/2 = 1/delta + 1/q.
struct ProofExponents {
  Rational s;
  AdmissiblePair pair;
  Rational delta;
  Rational q_dual;
  Rational r_dual;
  std::vector<Identity> identities;

  bool all_hold() const;
};

ProofExponents proof_exponents(Rational alpha, int dim, Rational gamma);

}  // namespace frachartree
