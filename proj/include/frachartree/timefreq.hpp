#pragma once

// Short-time Fourier transform on the periodic lattice and the discrete
// modulation / Fourier-Lebesgue norms built from it.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frachartree/grid.hpp"

namespace frachartree {

/// STFT window. Always normalized to unit discrete L^2 on the grid it is
/// sampled on.
class Window {
 public:
  /// exp(-pi |t / width|^2), the default (width 1) being 2^(d/4) exp(-pi |t|^2)
  /// after normalization.
  static Window gaussian(double width = 1.0);
  /// Arbitrary window given on the analysis grid, centred at the origin.
  static Window custom(Field values);

  /// Normalized samples on the given grid (physical space).
  Field sample(const GridSpec& grid) const;

  bool is_gaussian() const { return !custom_; }
  double width() const { return width_; }
  std::string name() const;

 private:
  double width_ = 1.0;
  std::optional<Field> custom_;
};

/// Discrete M^{p,q}_s: inner L^p over window positions, outer weighted L^q
/// over frequencies. The analysis lattice is {-L + a * x_stride * spacing}
/// in x and {b * w_step} in w, covering the grid's frequency band.
struct ModulationParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
  Window window = Window::gaussian();
  /// Window positions every x_stride grid points (a power of two < N).
  std::size_t x_stride = 1;
  /// Frequency step; 0 means the grid's freq_step.
  double w_step = 0.0;

  /// Throws ParameterError for exponents < 1, non-finite s, bad steps.
  void validate(const GridSpec& grid) const;
};

struct MixedExponents {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;
};

struct StftGram {
  int dim = 1;
  /// Window positions and frequencies per axis.
  std::size_t x_count = 0;
  std::size_t w_count = 0;
  double x_step = 0.0;
  double w_step = 0.0;
  double x_origin = 0.0;
  /// Row-major over (w multi-index, x multi-index): entry (b, a) lives at
  /// b * x_count^d + a.
  std::vector<Complex> values;

  std::size_t x_size() const;
  std::size_t w_size() const;
  const Complex& at(std::size_t w_flat, std::size_t x_flat) const { return values[w_flat * x_size() + x_flat]; }
  /// Coordinates of a flat position / frequency index.
  std::vector<double> position(std::size_t x_flat) const;
  std::vector<double> frequency(std::size_t w_flat) const;
};

/// Full gram V_g f. Throws StructuralError when the gram would exceed 2^26
/// entries; use modulation_norm for large lattices (it streams rows).
StftGram stft(const Field& f, const ModulationParams& params);

double modulation_norm(const Field& f, const ModulationParams& params);
/// Several exponent triples sharing one window and lattice; each STFT row is
/// computed once.
std::vector<double> modulation_norms(const Field& f, const ModulationParams& lattice,
                                     std::span<const MixedExponents> exponents);

/// || dft(f) ||_{L^p}.
double fourier_lebesgue_norm(const Field& f, double p);

/// Band-limited interpolation onto grid.refined() (exact for the lattice's
/// trigonometric interpolant).
Field refine_band_limited(const Field& f);
/// f * g formed on the 2N grid, where the product of two N-band-limited
/// functions is represented without aliasing.
Field antialiased_product(const Field& f, const Field& g);

/// (|| f g ||_{FL^1}, ||f||_{FL^1} ||g||_{FL^1}) with the product taken
/// without aliasing.
std::pair<double, double> fl1_algebra_check(const Field& f, const Field& g);

struct NormSpec {
  enum class Kind { Lebesgue, FourierLebesgue, Modulation };
  Kind kind = Kind::Lebesgue;
  double p = 2.0;
  double q = 2.0;  // used for Modulation only
  double s = 0.0;  // used for Modulation only

  static NormSpec lebesgue(double p) { return {Kind::Lebesgue, p, 0.0, 0.0}; }
  static NormSpec fourier_lebesgue(double p) { return {Kind::FourierLebesgue, p, 0.0, 0.0}; }
  static NormSpec modulation(double p, double q, double s = 0.0) { return {Kind::Modulation, p, q, s}; }

  std::string name() const;
};

/// Evaluates a norm; modulation norms use the window and lattice of
/// `lattice` with the spec's exponents.
double evaluate_norm(const Field& f, const NormSpec& spec, const ModulationParams& lattice = {});

/// Identifies which continuous embedding from -> to is being probed:
///   "inclusion"          M^{p1,q1}_{s1} -> M^{p2,q2}_{s2}, p1<=p2, q1<=q2, s2<=s1
///   "modulation_to_lp"   M^{p,q1} -> L^p, q1 <= min(p, p')
///   "lp_to_modulation"   L^p -> M^{p,q2}, q2 >= max(p, p')
///   "modulation_to_flp"  M^{min(p',2),p} -> FL^p
///   "flp_to_modulation"  FL^p -> M^{max(p',2),p}
/// Throws ParameterError for anything else.
std::string embedding_arrow(const NormSpec& from, const NormSpec& to);

/// ||f||_to / ||f||_from (0 for f = 0) after validating the arrow.
double probe_embedding(const Field& f, const NormSpec& from, const NormSpec& to,
                       const ModulationParams& lattice = {});

/// Hoelder conjugate exponent, with 1 <-> infinity.
double conjugate_exponent(double p);

}  // namespace frachartree
