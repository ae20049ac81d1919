#include "frachartree/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "frachartree/fft.hpp"

namespace frachartree {

std::string to_string(Method method) { return method == Method::Picard ? "picard" : "strang"; }

Method method_from_string(const std::string& name) {
  if (name == "picard") return Method::Picard;
  if (name == "strang" || name == "strang_split") return Method::StrangSplit;
  throw ParameterError("unknown solver method '" + name + "'");
}

void SolveConfig::validate() const {
  prop.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ParameterError("t_end must be >= 0");
  if (!(picard_tol > 0.0)) throw ParameterError("picard_tol must be positive");
  if (picard_max_iter < 1) throw ParameterError("picard_max_iter must be >= 1");
  if (record_stride < 1) throw ParameterError("record_stride must be >= 1");
  for (const auto& e : mpq) {
    ModulationParams check = mpq_lattice;
    check.p = e.p;
    check.q = e.q;
    check.s = e.s;
    check.validate(kernel.grid());
  }
}

std::size_t SolveConfig::step_count() const {
  if (t_end == 0.0) return 0;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9)));
}

double SolveConfig::effective_dt() const {
  const std::size_t n = step_count();
  return n == 0 ? dt : t_end / static_cast<double>(n);
}

namespace {

bool all_finite(std::span<const Complex> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return std::isfinite(acc);
}

// Free-flow phase rate -sigma c |xi|^alpha in raw layout.
std::vector<double> phase_rate(const GridSpec& grid, const PropagatorSpec& prop) {
  const auto radii = detail::raw_frequency_radii(grid);
  std::vector<double> rate(radii.size());
  const double scale = -prop.sign() * prop.phase_constant;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    rate[i] = radii[i] > 0.0 ? scale * std::pow(radii[i], prop.alpha) : 0.0;
  }
  return rate;
}

void require_grid(const Field& f, const SolveConfig& cfg, const char* what) {
  if (!(f.grid() == cfg.kernel.grid())) throw StructuralError(std::string(what) + ": state grid differs from kernel grid");
  if (f.space() != Space::Physical) throw StructuralError(std::string(what) + ": expects physical-space states");
}

std::string exponent_label(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void put(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace

double sup_l2_distance(const TimePath& a, const TimePath& b) {
  if (a.size() != b.size()) throw StructuralError("paths have different lengths");
  double sup = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sup = std::max(sup, l2_distance(a.states[i], b.states[i]));
  return sup;
}

void NormSeries::write_csv(std::ostream& os) const {
  os << 't';
  if (l2_column) os << ",l2";
  os << ",l2_drift";
  if (fl1_column) os << ",fl1";
  for (const auto& e : mpq_exponents) os << ",mpq_" << exponent_label(e.p) << '_' << exponent_label(e.q);
  os << ",gronwall_h\n";
  for (std::size_t i = 0; i < times.size(); ++i) {
    put(os, times[i]);
    if (l2_column) {
      os << ',';
      put(os, l2[i]);
    }
    os << ',';
    put(os, l2_drift[i]);
    if (fl1_column) {
      os << ',';
      put(os, fl1[i]);
    }
    for (const auto& column : mpq) {
      os << ',';
      put(os, column[i]);
    }
    os << ',';
    put(os, gronwall_h[i]);
    os << '\n';
  }
}

double NormSeries::max_abs_drift() const {
  double m = 0.0;
  for (double d : l2_drift) m = std::max(m, std::abs(d));
  return m;
}

NormRecorder::NormRecorder(const SolveConfig& cfg, double initial_l2) : cfg_(&cfg), initial_l2_(initial_l2) {
  series_.mpq_exponents = cfg.mpq;
  series_.l2_column = cfg.record_l2;
  series_.fl1_column = cfg.record_fl1;
  series_.mpq.resize(cfg.mpq.size());
}

void NormRecorder::record(double t, const Field& u) {
  const double l2 = lp_norm(u, 2.0);
  const double fl1 = fourier_lebesgue_norm(u, 1.0);
  series_.times.push_back(t);
  series_.l2.push_back(l2);
  series_.l2_drift.push_back(initial_l2_ > 0.0 ? (l2 - initial_l2_) / initial_l2_ : l2);
  series_.fl1.push_back(fl1);
  double monitored = fl1;
  if (!cfg_->mpq.empty()) {
    const auto values = modulation_norms(u, cfg_->mpq_lattice, cfg_->mpq);
    for (std::size_t k = 0; k < values.size(); ++k) series_.mpq[k].push_back(values[k]);
    monitored = values.front();
  }
  const double previous = series_.gronwall_h.empty() ? 0.0 : series_.gronwall_h.back();
  series_.gronwall_h.push_back(std::max(previous, monitored));
}

std::vector<double> ConvergenceError::ratios() const {
  std::vector<double> r;
  for (std::size_t i = 1; i < increments_.size(); ++i) {
    r.push_back(increments_[i - 1] > 0.0 ? increments_[i] / increments_[i - 1] : 0.0);
  }
  return r;
}

TimePath duhamel_map(const TimePath& path, const Field& u0, const SolveConfig& cfg) {
  if (path.size() == 0) throw StructuralError("duhamel_map: empty path");
  if (path.times.size() != path.states.size()) throw StructuralError("duhamel_map: times and states differ in length");
  require_grid(u0, cfg, "duhamel_map");
  for (const auto& s : path.states) require_grid(s, cfg, "duhamel_map");

  const auto& grid = u0.grid();
  const std::size_t size = grid.size();
  const detail::Fft fft(grid.dim(), grid.points());
  const auto rate = phase_rate(grid, cfg.prop);
  const Complex coupling(0.0, -cfg.prop.sign());
  const double inv = 1.0 / static_cast<double>(size);
  PotentialEvaluator potential(cfg.kernel);

  std::vector<Complex> initial(u0.values().begin(), u0.values().end());
  fft.forward(initial);

  std::vector<Complex> acc(size, Complex(0.0, 0.0));
  std::vector<Complex> prev(size), cur(size), v(size), out(size);
  TimePath result;
  result.times = path.times;
  result.states.reserve(path.size());
  result.states.push_back(u0);

  for (std::size_t n = 0; n < path.size(); ++n) {
    const auto& u = path.states[n].values();
    potential.potential(u, v);
    for (std::size_t i = 0; i < size; ++i) cur[i] = v[i].real() * u[i];
    fft.forward(cur);
    const double tn = path.times[n];
    for (std::size_t i = 0; i < size; ++i) cur[i] *= std::polar(1.0, -rate[i] * tn);
    if (n > 0) {
      const double half = 0.5 * (tn - path.times[n - 1]);
      for (std::size_t i = 0; i < size; ++i) acc[i] += half * (prev[i] + cur[i]);
      for (std::size_t i = 0; i < size; ++i) {
        out[i] = std::polar(1.0, rate[i] * tn) * (initial[i] + coupling * acc[i]) * inv;
      }
      fft.backward(out);
      result.states.emplace_back(grid, out, Space::Physical);
    }
    std::swap(prev, cur);
  }
  return result;
}

TimePath free_path(const Field& u0, const PropagatorSpec& prop, double t_end, std::size_t steps) {
  prop.validate();
  TimePath path;
  const auto& grid = u0.grid();
  const detail::Fft fft(grid.dim(), grid.points());
  const auto rate = phase_rate(grid, prop);
  std::vector<Complex> spec(u0.values().begin(), u0.values().end());
  if (u0.space() != Space::Physical) throw StructuralError("free_path expects a physical-space field");
  fft.forward(spec);
  const double inv = 1.0 / static_cast<double>(grid.size());
  std::vector<Complex> work(spec.size());
  for (std::size_t n = 0; n <= steps; ++n) {
    const double t = steps == 0 ? 0.0 : t_end * static_cast<double>(n) / static_cast<double>(steps);
    path.times.push_back(t);
    if (n == 0) {
      path.states.push_back(u0);
      continue;
    }
    for (std::size_t i = 0; i < spec.size(); ++i) work[i] = std::polar(1.0, rate[i] * t) * spec[i] * inv;
    fft.backward(work);
    path.states.emplace_back(grid, work, Space::Physical);
  }
  return path;
}

namespace {

// Picard iteration on one window starting at u0 with local times.
void picard_window(const Field& u0, const std::vector<double>& local_times, double t_offset, const SolveConfig& cfg,
                   PicardResult& result, TimePath& window_path) {
  const std::size_t steps = local_times.size() - 1;
  TimePath current = free_path(u0, cfg.prop, local_times.back(), steps);
  current.times = local_times;
  std::vector<double> increments;
  bool converged = false;
  for (int it = 0; it < cfg.picard_max_iter; ++it) {
    TimePath next = duhamel_map(current, u0, cfg);
    ++result.iterations;
    for (std::size_t n = 0; n < next.size(); ++n) {
      if (!all_finite(next.states[n].values())) {
        const double last = n == 0 ? t_offset : t_offset + local_times[n - 1];
        throw BlowUpError("non-finite state during Picard iteration", last);
      }
    }
    const double d = sup_l2_distance(next, current);
    if (!increments.empty()) {
      result.ratios.push_back(increments.back() > 0.0 ? d / increments.back() : 0.0);
    }
    increments.push_back(d);
    result.increments.push_back(d);
    current = std::move(next);
    if (d < cfg.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw ConvergenceError("Picard iteration did not converge; shorten the interval (T or picard_window)",
                           std::move(increments));
  }
  window_path = std::move(current);
}

}  // namespace

PicardResult picard_solve(const Field& u0, const SolveConfig& cfg) {
  cfg.validate();
  require_grid(u0, cfg, "picard_solve");
  const std::size_t steps = cfg.step_count();
  const double dt = cfg.effective_dt();
  const std::size_t window = cfg.picard_window == 0 ? std::max<std::size_t>(steps, 1) : cfg.picard_window;

  PicardResult result;
  result.path.times.push_back(0.0);
  result.path.states.push_back(u0);
  if (steps == 0) return result;

  std::size_t start = 0;
  while (start < steps) {
    const std::size_t len = std::min(window, steps - start);
    std::vector<double> local(len + 1);
    for (std::size_t i = 0; i <= len; ++i) local[i] = static_cast<double>(i) * dt;
    const double offset = static_cast<double>(start) * dt;
    TimePath piece;
    picard_window(result.path.states.back(), local, offset, cfg, result, piece);
    for (std::size_t i = 1; i < piece.size(); ++i) {
      result.path.times.push_back(static_cast<double>(start + i) * dt);
      result.path.states.push_back(std::move(piece.states[i]));
    }
    start += len;
  }
  result.path.times.back() = cfg.t_end;
  return result;
}

StrangStepper::StrangStepper(const SolveConfig& cfg, double dt)
    : dt_(dt),
      sign_(cfg.prop.sign()),
      fft_(cfg.kernel.grid().dim(), cfg.kernel.grid().points()),
      potential_(cfg.kernel),
      scratch_(cfg.kernel.grid().size()) {
  cfg.prop.validate();
  const auto rate = phase_rate(cfg.kernel.grid(), cfg.prop);
  const double inv = 1.0 / static_cast<double>(cfg.kernel.grid().size());
  half_kinetic_.resize(rate.size());
  for (std::size_t i = 0; i < rate.size(); ++i) half_kinetic_[i] = std::polar(inv, rate[i] * 0.5 * dt);
}

void StrangStepper::step(std::vector<Complex>& u) {
  if (u.size() != scratch_.size()) throw StructuralError("strang step: state size differs from grid");
  fft_.forward(u);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= half_kinetic_[i];
  fft_.backward(u);
  potential_.potential(u, scratch_);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= std::polar(1.0, -sign_ * dt_ * scratch_[i].real());
  fft_.forward(u);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= half_kinetic_[i];
  fft_.backward(u);
}

Field strang_step(const Field& u, double dt, const SolveConfig& cfg) {
  require_grid(u, cfg, "strang_step");
  StrangStepper stepper(cfg, dt);
  std::vector<Complex> values(u.values().begin(), u.values().end());
  stepper.step(values);
  return Field(u.grid(), std::move(values), Space::Physical);
}

SolveResult solve(const Field& u0, const SolveConfig& cfg) {
  cfg.validate();
  require_grid(u0, cfg, "solve");
  if (!all_finite(u0.values())) throw BlowUpError("initial data is not finite", 0.0);

  const std::size_t steps = cfg.step_count();
  const double dt = cfg.effective_dt();
  NormRecorder recorder(cfg, lp_norm(u0, 2.0));

  if (cfg.method == Method::Picard) {
    PicardResult picard = picard_solve(u0, cfg);
    const auto& path = picard.path;
    for (std::size_t n = 0; n < path.size(); ++n) {
      if (n % cfg.record_stride == 0 || n + 1 == path.size()) recorder.record(path.times[n], path.states[n]);
    }
    Field last = path.states.back();
    TimePath kept;
    if (cfg.keep_path) kept = path;
    return SolveResult{std::move(last), std::move(recorder).take(), std::move(picard), std::move(kept)};
  }

  TimePath kept;
  if (cfg.keep_path) {
    kept.times.push_back(0.0);
    kept.states.push_back(u0);
  }
  recorder.record(0.0, u0);
  std::vector<Complex> u(u0.values().begin(), u0.values().end());
  StrangStepper stepper(cfg, dt);
  for (std::size_t n = 1; n <= steps; ++n) {
    stepper.step(u);
    const double t = n == steps ? cfg.t_end : static_cast<double>(n) * dt;
    if (!all_finite(u)) throw BlowUpError("non-finite state during Strang splitting", static_cast<double>(n - 1) * dt);
    const bool record = n % cfg.record_stride == 0 || n == steps;
    if (record || cfg.keep_path) {
      Field state(u0.grid(), u, Space::Physical);
      if (record) recorder.record(t, state);
      if (cfg.keep_path) {
        kept.times.push_back(t);
        kept.states.push_back(std::move(state));
      }
    }
  }
  return SolveResult{Field(u0.grid(), std::move(u), Space::Physical), std::move(recorder).take(), std::nullopt,
                     std::move(kept)};
}

double strichartz_norm(const TimePath& path, double q, double r) {
  if (!(q >= 1.0) || !(r >= 1.0)) throw ParameterError("Strichartz exponents must be >= 1");
  if (path.size() == 0) throw StructuralError("strichartz_norm: empty path");
  std::vector<double> values(path.size());
  for (std::size_t n = 0; n < path.size(); ++n) values[n] = lp_norm(path.states[n], r);
  if (std::isinf(q)) return *std::max_element(values.begin(), values.end());
  double integral = 0.0;
  for (std::size_t n = 1; n < path.size(); ++n) {
    const double h = path.times[n] - path.times[n - 1];
    integral += 0.5 * h * (std::pow(values[n - 1], q) + std::pow(values[n], q));
  }
  return std::pow(integral, 1.0 / q);
}

double free_strichartz_norm(const Field& u0, const PropagatorSpec& prop, double t_end, std::size_t steps, double q,
                            double r) {
  if (!(q >= 1.0) || !(r >= 1.0)) throw ParameterError("Strichartz exponents must be >= 1");
  if (u0.space() != Space::Physical) throw StructuralError("free_strichartz_norm expects a physical-space field");
  prop.validate();
  const auto& grid = u0.grid();
  const detail::Fft fft(grid.dim(), grid.points());
  const auto rate = phase_rate(grid, prop);
  std::vector<Complex> spec(u0.values().begin(), u0.values().end());
  fft.forward(spec);
  const double inv = 1.0 / static_cast<double>(grid.size());
  const double cell = grid.cell_volume(Space::Physical);
  std::vector<Complex> work(spec.size());
  double integral = 0.0;
  double sup = 0.0;
  double previous = 0.0;
  for (std::size_t n = 0; n <= steps; ++n) {
    const double t = steps == 0 ? 0.0 : t_end * static_cast<double>(n) / static_cast<double>(steps);
    for (std::size_t i = 0; i < spec.size(); ++i) work[i] = std::polar(1.0, rate[i] * t) * spec[i] * inv;
    fft.backward(work);
    const double value = lp_norm(work, cell, r);
    sup = std::max(sup, value);
    if (!std::isinf(q)) {
      const double powered = std::pow(value, q);
      if (n > 0) integral += 0.5 * (t_end / static_cast<double>(steps)) * (previous + powered);
      previous = powered;
    }
  }
  return std::isinf(q) ? sup : std::pow(integral, 1.0 / q);
}

AffineEnvelope log_affine_envelope(const std::vector<double>& times, const std::vector<double>& values) {
  AffineEnvelope env;
  if (times.size() != values.size() || times.empty()) return env;
  std::vector<double> logs(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) return env;
    logs[i] = std::log(values[i]);
  }
  const double n = static_cast<double>(times.size());
  double mt = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    mt += times[i];
    ml += logs[i];
  }
  mt /= n;
  ml /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    cov += (times[i] - mt) * (logs[i] - ml);
    var += (times[i] - mt) * (times[i] - mt);
  }
  env.slope = var > 0.0 ? cov / var : 0.0;
  env.intercept = ml - env.slope * mt;
  double max_res = -kInfinity, sq = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double res = logs[i] - (env.intercept + env.slope * times[i]);
    max_res = std::max(max_res, res);
    sq += res * res;
  }
  env.max_residual = max_res;
  env.rms_residual = std::sqrt(sq / n);
  env.intercept += max_res;
  env.bounded = std::isfinite(env.intercept) && std::isfinite(env.slope);
  return env;
}

}  // namespace frachartree
