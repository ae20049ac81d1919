#pragma once

// Time integration of i u_t = sigma [ c (-Laplacian)^{alpha/2} u + (K * |u|^2) u ]
// by Picard iteration on the Duhamel map or by Strang splitting.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "frachartree/errors.hpp"
#include "frachartree/grid.hpp"
#include "frachartree/hartree.hpp"
#include "frachartree/propagator.hpp"
#include "frachartree/timefreq.hpp"

namespace frachartree {

enum class Method { Picard, StrangSplit };

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct SolveConfig {
  explicit SolveConfig(HartreeKernel k) : kernel(std::move(k)) {}

  HartreeKernel kernel;
  PropagatorSpec prop;
  double t_end = 1.0;
  /// Requested step; the effective step is t_end / ceil(t_end / dt) so the
  /// time lattice ends exactly at t_end.
  double dt = 1e-3;
  Method method = Method::StrangSplit;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  /// Steps per Picard window; 0 iterates over the whole interval at once.
  std::size_t picard_window = 0;
  /// Columns written for the L2 and FL1 norms (both are always computed).
  bool record_l2 = true;
  bool record_fl1 = true;
  /// Modulation norms to record; the first drives gronwall_h.
  std::vector<MixedExponents> mpq;
  /// Window and analysis lattice for the recorded modulation norms.
  ModulationParams mpq_lattice;
  std::size_t record_stride = 1;
  /// Keep every state of the time lattice in the result.
  bool keep_path = false;

  /// Throws ParameterError on invalid settings.
  void validate() const;
  std::size_t step_count() const;
  double effective_dt() const;
};

struct TimePath {
  std::vector<double> times;
  std::vector<Field> states;

  std::size_t size() const { return states.size(); }
};

/// sup_n || a_n - b_n ||_2 over two paths on the same time lattice.
double sup_l2_distance(const TimePath& a, const TimePath& b);

struct NormSeries {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> l2_drift;
  std::vector<double> fl1;
  std::vector<MixedExponents> mpq_exponents;
  /// mpq[k][i]: k-th exponent triple at times[i].
  std::vector<std::vector<double>> mpq;
  std::vector<double> gronwall_h;
  bool l2_column = true;
  bool fl1_column = true;

  std::size_t size() const { return times.size(); }
  /// Columns t, l2, l2_drift, fl1, mpq_<p>_<q>..., gronwall_h; l2 and fl1
  /// are left out when their column flag is off.
  void write_csv(std::ostream& os) const;
  double max_abs_drift() const;
};

/// Records the configured norms of one state into the series.
class NormRecorder {
 public:
  NormRecorder(const SolveConfig& cfg, double initial_l2);
  void record(double t, const Field& u);
  const NormSeries& series() const { return series_; }
  NormSeries take() && { return std::move(series_); }

 private:
  const SolveConfig* cfg_;
  double initial_l2_;
  NormSeries series_;
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, double last_good_time)
      : Error(what), last_good_time_(last_good_time) {}
  double last_good_time() const { return last_good_time_; }

 private:
  double last_good_time_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> increments)
      : Error(what), increments_(std::move(increments)) {}
  const std::vector<double>& increments() const { return increments_; }
  std::vector<double> ratios() const;

 private:
  std::vector<double> increments_;
};

/// Phi(u)(t_n) = U(t_n) u0 - i sigma int_0^{t_n} U(t_n - tau) N(u(tau)) dtau,
/// trapezoid rule on the path's time lattice. Phi(u)(0) = u0.
TimePath duhamel_map(const TimePath& path, const Field& u0, const SolveConfig& cfg);

struct PicardResult {
  TimePath path;
  /// sup_t || u^{(n+1)} - u^{(n)} ||_2 per iteration (all windows in order).
  std::vector<double> increments;
  /// increments[n+1] / increments[n] within each window.
  std::vector<double> ratios;
  int iterations = 0;
};

/// Iterates the Duhamel map from the free evolution until the sup-L2
/// increment drops below picard_tol. Throws ConvergenceError after
/// picard_max_iter iterations and BlowUpError on non-finite states.
PicardResult picard_solve(const Field& u0, const SolveConfig& cfg);

/// Reusable Strang stepper: U(dt/2), exp(-i sigma dt Re V) with V = K*|u|^2,
/// U(dt/2). Not thread-safe.
class StrangStepper {
 public:
  StrangStepper(const SolveConfig& cfg, double dt);
  /// Advances physical values in place.
  void step(std::vector<Complex>& u);

 private:
  double dt_;
  double sign_;
  detail::Fft fft_;
  std::vector<Complex> half_kinetic_;
  PotentialEvaluator potential_;
  std::vector<Complex> scratch_;
};

Field strang_step(const Field& u, double dt, const SolveConfig& cfg);

struct SolveResult {
  Field final;
  NormSeries series;
  /// Present for Picard runs.
  std::optional<PicardResult> picard;
  /// Filled when cfg.keep_path is set.
  TimePath path;
};

SolveResult solve(const Field& u0, const SolveConfig& cfg);

/// States U(t_n) u0 on n = 0..steps, t_n = n * t_end / steps.
TimePath free_path(const Field& u0, const PropagatorSpec& prop, double t_end, std::size_t steps);

/// (int ||u(t)||_{L^r}^q dt)^{1/q} by the trapezoid rule on the path's
/// lattice; q = infinity takes the max. Throws ParameterError for q, r < 1.
double strichartz_norm(const TimePath& path, double q, double r);

/// strichartz_norm(free_path(u0, prop, t_end, steps), q, r) without storing
/// the path.
double free_strichartz_norm(const Field& u0, const PropagatorSpec& prop, double t_end, std::size_t steps, double q,
                            double r);

/// Affine upper bound a + b t >= log h(t) on the sampled points: least-squares
/// line shifted up by its largest residual.
struct AffineEnvelope {
  double intercept = 0.0;
  double slope = 0.0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
  bool bounded = false;
};

AffineEnvelope log_affine_envelope(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace frachartree
