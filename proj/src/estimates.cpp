#include "frachartree/estimates.hpp"

#include <algorithm>

#include "frachartree/errors.hpp"

namespace frachartree {

namespace {

const Rational kHalf(1, 2);

Rational dual(const Rational& p) { return p / (p - 1); }

}  // namespace

Rational AdmissiblePair::residue() const {
  return alpha * q.reciprocal() - Rational(dim) * (kHalf - Rational(1) / r);
}

bool AdmissiblePair::admissible() const {
  if (!q.is_infinite() && q.value() < Rational(2)) return false;
  if (r < Rational(2)) return false;
  return residue() == Rational(0);
}

AdmissiblePair make_admissible_pair(Exponent q, Rational r, Rational alpha, int dim) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  if (alpha <= Rational(0)) throw ParameterError("alpha must be positive");
  AdmissiblePair pair{q, r, alpha, dim};
  if (!pair.admissible()) {
    throw ParameterError("(" + q.str() + ", " + format_rational(r) + ") is not alpha-admissible");
  }
  return pair;
}

AdmissiblePair hartree_admissible_pair(Rational alpha, int dim, Rational gamma) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  if (!(gamma > Rational(0) && gamma < alpha && gamma < Rational(dim))) {
    throw ParameterError("Hartree pair needs 0 < gamma < min(alpha, d)");
  }
  const Rational q = Rational(4) * alpha / gamma;
  const Rational r = Rational(4 * dim) / (Rational(2 * dim) - gamma);
  return make_admissible_pair(Exponent(q), r, alpha, dim);
}

Rational hls_conjugate(int dim, Rational gamma, Rational p) {
  if (dim < 1) throw ParameterError("dimension must be >= 1");
  if (!(gamma > Rational(0) && gamma < Rational(dim))) throw ParameterError("HLS needs 0 < gamma < d");
  if (!(p > Rational(1))) throw ParameterError("HLS needs p > 1");
  const Rational inv_q = Rational(1) / p + gamma / dim - 1;
  if (inv_q <= Rational(0)) {
    throw ParameterError("HLS exponent infeasible: 1/q = " + format_rational(inv_q) + " <= 0");
  }
  const Rational q = Rational(1) / inv_q;
  if (!(q > p)) throw ParameterError("HLS exponent infeasible: q <= p");
  return q;
}

std::string RangeReport::failures() const {
  std::string out;
  for (const auto& c : clauses) {
    if (c.holds) continue;
    if (!out.empty()) out += "; ";
    out += c.name + " (" + c.statement + ")";
  }
  return out;
}

RangeReport range_gate(Rational alpha, int dim, Rational gamma, Rational p, Rational q) {
  RangeReport rep;
  const Rational half_d(dim, 2);
  rep.gamma_ok = gamma > Rational(0) && gamma < alpha && gamma < half_d;
  rep.p_ok = p >= Rational(1) && p <= Rational(2);
  rep.q_ok = q >= Rational(1) && q < Rational(2 * dim) / (Rational(dim) + gamma);
  rep.radial_fractional = dim >= 2 && alpha > Rational(2 * dim, 2 * dim - 1) && alpha < Rational(2);
  rep.classical = alpha == Rational(2);
  rep.clauses = {
      {"gamma", "0 < gamma < min(alpha, d/2)", rep.gamma_ok},
      {"p", "1 <= p <= 2", rep.p_ok},
      {"q", "1 <= q < 2d/(d+gamma)", rep.q_ok},
      {"alpha", "alpha = 2, or d >= 2 and 2d/(2d-1) < alpha < 2", rep.radial_fractional || rep.classical},
  };
  return rep;
}

bool ProofExponents::all_hold() const {
  return std::all_of(identities.begin(), identities.end(), [](const Identity& i) { return i.holds(); });
}

ProofExponents proof_exponents(Rational alpha, int dim, Rational gamma) {
  ProofExponents e;
  e.pair = hartree_admissible_pair(alpha, dim, gamma);
  e.s = alpha / 2;
  const Rational four_s = Rational(4) * e.s;
  e.delta = Rational(8) * e.s / (four_s - gamma);
  const Rational q = e.pair.q.value();
  e.q_dual = dual(q);
  e.r_dual = dual(e.pair.r);
  const Rational inv_q = Rational(1) / q;
  const Rational inv_r = Rational(1) / e.pair.r;
  const Rational inv_delta = Rational(1) / e.delta;
  e.identities = {
      {"alpha/q = d(1/2 - 1/r)", alpha * inv_q, Rational(dim) * (kHalf - inv_r)},
      {"1/q' = (4s-gamma)/(4s) + 1/q", Rational(1) / e.q_dual, (four_s - gamma) / four_s + inv_q},
      {"1/r' = gamma/(2d) + 1/r", Rational(1) / e.r_dual, gamma / (2 * dim) + inv_r},
      {"1/q' = 1/2 + 1/delta", Rational(1) / e.q_dual, kHalf + inv_delta},
      {"1/2 = 1/delta + 1/q", kHalf, inv_delta + inv_q},
  };
  return e;
}

}  // namespace frachartree
