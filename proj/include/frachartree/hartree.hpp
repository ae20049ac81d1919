#pragma once

// Power-law interaction K(x) = lambda |x|^-gamma, handled on the Fourier side
// through its Riesz symbol K^(xi) = lambda C(d, gamma) |xi|^-(d - gamma).

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frachartree/fft.hpp"
#include "frachartree/grid.hpp"

namespace frachartree {

/// How the integrable singularity of |xi|^-beta at the DC lattice site is
/// assigned a finite value.
enum class DcRule {
  /// -Z_d(beta) * freq_step^-beta, with Z_d the Epstein zeta function of the
  /// cubic lattice. Cancels the leading singular term of the lattice sum, so
  /// freq_step^d * sum matches the continuum integral to O(h^(d - beta + 2)).
  LatticeZeta,
  /// Mean of |xi|^-beta over the DC cell [-h/2, h/2]^d.
  CellAverage,
  /// K^(0) = 0.
  Zero,
};

std::string to_string(DcRule rule);
DcRule dc_rule_from_string(const std::string& name);

/// C(d, gamma) = pi^(gamma - d/2) Gamma((d - gamma)/2) / Gamma(gamma/2).
double riesz_constant(int dim, double gamma);

/// Epstein zeta sum_{k in Z^d \ 0} |k|^-s, analytically continued, for
/// 0 < s < d (the range of kernel symbol exponents). Evaluated with the theta-function splitting, which converges
/// like exp(-pi |k|^2).
double epstein_zeta(int dim, double s);

/// Value the lattice assigns to |xi|^-beta at xi = 0 under the given rule.
double singular_cell_weight(int dim, double beta, double freq_step, DcRule rule);

class HartreeKernel {
 public:
  /// Throws ParameterError unless 0 < gamma < dim and lambda is finite.
  HartreeKernel(const GridSpec& grid, double lambda, double gamma, DcRule rule = DcRule::LatticeZeta);

  const GridSpec& grid() const { return grid_; }
  double lambda() const { return lambda_; }
  double gamma() const { return gamma_; }
  int dim() const { return grid_.dim(); }
  double riesz_constant() const { return riesz_constant_; }
  DcRule dc_rule() const { return dc_rule_; }
  /// Exponent d - gamma of the symbol's decay.
  double symbol_exponent() const { return grid_.dim() - gamma_; }

  /// K^ on the frequency lattice (natural order), and its split at |xi| = 1.
  const Field& symbol() const { return symbol_; }
  const Field& k1_symbol() const { return k1_; }
  const Field& k2_symbol() const { return k2_; }

  /// Continuum symbol value lambda C |xi|^-(d - gamma) for |xi| > 0.
  double symbol_at(double radius) const;

  /// Symbol in raw FFT layout (real values).
  std::span<const double> raw_symbol() const { return raw_symbol_; }

 private:
  GridSpec grid_;
  double lambda_;
  double gamma_;
  double riesz_constant_;
  DcRule dc_rule_;
  Field symbol_;
  Field k1_;
  Field k2_;
  std::vector<double> raw_symbol_;
};

HartreeKernel build_kernel(const GridSpec& grid, double lambda, double gamma,
                           DcRule rule = DcRule::LatticeZeta);

/// (||k1||_{L^p}, ||k2||_{L^r}) by lattice quadrature, with the singular DC
/// cell of |k1|^p treated by the kernel's DcRule. r = kInfinity returns the
/// supremum |lambda| C approached as |xi| decreases to 1.
/// Throws ParameterError unless 1 <= p < d/(d-gamma) < r.
std::pair<double, double> kernel_split_norms(const HartreeKernel& k, double p, double r);

/// Periodic convolution K * f through the lattice symbol (linear in f).
Field riesz_potential(const Field& f, const HartreeKernel& k);

/// K * |u|^2 with |u|^2 formed on the 2N grid so the quadratic term does not
/// alias.
Field hartree_potential(const Field& u, const HartreeKernel& k);

/// (K * |u|^2) u.
Field nonlinearity(const Field& u, const HartreeKernel& k);

/// Reusable workspace for repeated potential evaluations on one grid.
/// Not thread-safe; use one per thread.
class PotentialEvaluator {
 public:
  explicit PotentialEvaluator(const HartreeKernel& k);

  /// Writes K * |u|^2 (complex, imaginary part at round-off) for physical
  /// values u of the kernel's grid.
  void potential(std::span<const Complex> u, std::span<Complex> out);

  const GridSpec& grid() const { return grid_; }

 private:
  GridSpec grid_;
  detail::Fft fft_;
  detail::Fft fine_fft_;
  std::vector<double> symbol_;
  std::vector<Complex> work_;
};

}  // namespace frachartree
