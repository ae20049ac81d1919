#include "frachartree/timefreq.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "frachartree/errors.hpp"
#include "frachartree/fft.hpp"
#include "frachartree/parallel.hpp"

namespace frachartree {

namespace {

constexpr std::size_t kMaxGramEntries = std::size_t{1} << 26;

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

Field as_physical(const Field& f) { return f.space() == Space::Physical ? f : idft(f); }

double finite_or_inf_exponent(double p) { return std::isinf(p) ? kInfinity : p; }

// Accumulator for a discrete L^p sum with cell weight; p = inf keeps the max.
class LpAccumulator {
 public:
  LpAccumulator(double p, double weight) : p_(p), weight_(weight) {}
  void add(double magnitude) {
    if (std::isinf(p_)) {
      acc_ = std::max(acc_, magnitude);
    } else if (magnitude > 0.0) {
      acc_ += p_ == 2.0 ? magnitude * magnitude : std::pow(magnitude, p_);
    }
  }
  double value() const {
    if (std::isinf(p_)) return acc_;
    return std::pow(acc_ * weight_, 1.0 / p_);
  }

 private:
  double p_;
  double weight_;
  double acc_ = 0.0;
};

// Row-by-row evaluation of V_g f(X_a, W_b) for a fixed frequency row b.
class StftRows {
 public:
  StftRows(const Field& f, const ModulationParams& params)
      : grid_(f.grid()),
        dim_(grid_.dim()),
        n_(grid_.points()),
        sx_(params.x_stride),
        nx_(n_ / params.x_stride),
        ws_(params.w_step > 0.0 ? params.w_step : grid_.freq_step()),
        fft_(dim_, n_),
        small_fft_(dim_, nx_) {
    const double ratio = ws_ / grid_.freq_step();
    const double rounded = std::round(ratio);
    if (rounded >= 1.0 && std::abs(ratio - rounded) < 1e-9) mode_ratio_ = static_cast<long>(rounded);
    const double band = static_cast<double>(n_) * grid_.freq_step();
    nw_ = 2 * static_cast<std::size_t>(std::ceil(band / (2.0 * ws_) - 1e-9));
    nw_ = std::max<std::size_t>(nw_, 2);

    const Field window = params.window.sample(grid_);
    // Window re-centred so that index 0 is displacement 0 (periodic).
    std::vector<Complex> centred(grid_.size());
    for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
      auto idx = grid_.unravel(flat);
      for (int a = 0; a < dim_; ++a) idx[a] = (idx[a] + n_ / 2) % n_;
      centred[flat] = window[grid_.ravel(idx)];
    }
    fft_.forward(centred);
    for (auto& v : centred) v = std::conj(v);
    window_conj_ = std::move(centred);

    values_.assign(f.values().begin(), f.values().end());
    if (mode_ratio_ > 0) {
      spectrum_ = values_;
      fft_.forward(spectrum_);
    }
    for (int a = 0; a < 3; ++a) {
      ext_[a] = a < dim_ ? n_ : 1;
      xext_[a] = a < dim_ ? nx_ : 1;
    }
    scale_ = std::pow(grid_.spacing(), dim_) / static_cast<double>(grid_.size());
  }

  std::size_t row_count() const { return ipow(nw_, dim_); }
  std::size_t row_size() const { return ipow(nx_, dim_); }
  std::size_t nw() const { return nw_; }
  std::size_t nx() const { return nx_; }
  double w_step() const { return ws_; }
  double x_step() const { return static_cast<double>(sx_) * grid_.spacing(); }

  std::array<double, 3> frequency(std::size_t b) const {
    std::array<double, 3> w{};
    for (int a = dim_ - 1; a >= 0; --a) {
      w[a] = (static_cast<double>(b % nw_) - static_cast<double>(nw_ / 2)) * ws_;
      b /= nw_;
    }
    return w;
  }

  // Writes V(., W_b) into out (size nx^d); work has size N^d.
  void row(std::size_t b, std::vector<Complex>& work, std::vector<Complex>& out) const {
    std::array<long, 3> shift{0, 0, 0};
    const Complex* src = nullptr;
    double sign = 1.0;
    if (mode_ratio_ > 0) {
      std::size_t rest = b;
      long parity = 0;
      for (int a = dim_ - 1; a >= 0; --a) {
        const long m = static_cast<long>(rest % nw_) - static_cast<long>(nw_ / 2);
        rest /= nw_;
        shift[a] = m * mode_ratio_;
        parity += shift[a];
      }
      // exp(-2 pi i W x_j) = (-1)^{sum shift} exp(-2 pi i shift.j / N)
      sign = (parity % 2 == 0) ? 1.0 : -1.0;
      src = spectrum_.data();
    } else {
      const auto w = frequency(b);
      for (std::size_t flat = 0; flat < grid_.size(); ++flat) {
        const auto x = grid_.point(flat, Space::Physical);
        double phase = 0.0;
        for (int a = 0; a < dim_; ++a) phase += w[a] * x[a];
        work[flat] = values_[flat] * std::polar(1.0, -2.0 * kPi * phase);
      }
      fft_.forward(work);
      src = work.data();
    }

    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    const long n = static_cast<long>(n_);
    for (std::size_t k0 = 0; k0 < ext_[0]; ++k0) {
      const std::size_t s0 = static_cast<std::size_t>(((static_cast<long>(k0) + shift[0]) % n + n) % n);
      const std::size_t f0 = k0 % xext_[0];
      for (std::size_t k1 = 0; k1 < ext_[1]; ++k1) {
        const std::size_t s1 =
            ext_[1] == 1 ? 0 : static_cast<std::size_t>(((static_cast<long>(k1) + shift[1]) % n + n) % n);
        const std::size_t f1 = k1 % xext_[1];
        const std::size_t kbase = (k0 * ext_[1] + k1) * ext_[2];
        const std::size_t sbase = (s0 * ext_[1] + s1) * ext_[2];
        const std::size_t fbase = (f0 * xext_[1] + f1) * xext_[2];
        for (std::size_t k2 = 0; k2 < ext_[2]; ++k2) {
          const std::size_t s2 =
              ext_[2] == 1 ? 0 : static_cast<std::size_t>(((static_cast<long>(k2) + shift[2]) % n + n) % n);
          out[fbase + k2 % xext_[2]] += src[sbase + s2] * window_conj_[kbase + k2];
        }
      }
    }
    small_fft_.backward(out);
    const double scale = scale_ * sign;
    for (auto& v : out) v *= scale;
  }

 private:
  GridSpec grid_;
  int dim_;
  std::size_t n_;
  std::size_t sx_;
  std::size_t nx_;
  double ws_;
  std::size_t nw_ = 0;
  long mode_ratio_ = 0;
  detail::Fft fft_;
  detail::Fft small_fft_;
  std::vector<Complex> window_conj_;
  std::vector<Complex> values_;
  std::vector<Complex> spectrum_;
  std::array<std::size_t, 3> ext_{};
  std::array<std::size_t, 3> xext_{};
  double scale_ = 1.0;
};

struct RowScratch {
  std::vector<Complex> work;
  std::vector<Complex> out;
};

}  // namespace

Window Window::gaussian(double width) {
  if (!(width > 0.0) || !std::isfinite(width)) throw ParameterError("window width must be positive");
  Window w;
  w.width_ = width;
  return w;
}

Window Window::custom(Field values) {
  Window w;
  w.custom_ = as_physical(values);
  return w;
}

Field Window::sample(const GridSpec& grid) const {
  std::vector<Complex> v;
  if (custom_) {
    if (!(custom_->grid() == grid)) throw StructuralError("custom window lives on a different grid");
    v.assign(custom_->values().begin(), custom_->values().end());
  } else {
    v.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double r = grid.radius(i, Space::Physical) / width_;
      v[i] = std::exp(-kPi * r * r);
    }
  }
  const double norm = lp_norm(v, grid.cell_volume(Space::Physical), 2.0);
  if (!(norm > 0.0)) throw ParameterError("window has zero L2 norm");
  for (auto& x : v) x /= norm;
  return Field(grid, std::move(v), Space::Physical);
}

std::string Window::name() const {
  if (custom_) return "custom";
  std::ostringstream os;
  os << "gaussian(" << width_ << ")";
  return os.str();
}

void ModulationParams::validate(const GridSpec& grid) const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw ParameterError("modulation exponents must be >= 1");
  if (!std::isfinite(s)) throw ParameterError("modulation weight must be finite");
  if (!is_pow2(x_stride) || x_stride >= grid.points()) {
    throw ParameterError("x_stride must be a power of two below the grid size");
  }
  if (!(w_step >= 0.0) || !std::isfinite(w_step)) throw ParameterError("w_step must be >= 0");
}

std::size_t StftGram::x_size() const { return ipow(x_count, dim); }
std::size_t StftGram::w_size() const { return ipow(w_count, dim); }

std::vector<double> StftGram::position(std::size_t x_flat) const {
  std::vector<double> x(dim);
  for (int a = dim - 1; a >= 0; --a) {
    x[a] = x_origin + static_cast<double>(x_flat % x_count) * x_step;
    x_flat /= x_count;
  }
  return x;
}

std::vector<double> StftGram::frequency(std::size_t w_flat) const {
  std::vector<double> w(dim);
  for (int a = dim - 1; a >= 0; --a) {
    w[a] = (static_cast<double>(w_flat % w_count) - static_cast<double>(w_count / 2)) * w_step;
    w_flat /= w_count;
  }
  return w;
}

StftGram stft(const Field& f, const ModulationParams& params) {
  params.validate(f.grid());
  const Field phys = as_physical(f);
  const StftRows rows(phys, params);
  if (rows.row_count() * rows.row_size() > kMaxGramEntries) {
    throw StructuralError("STFT gram too large to store; use a coarser lattice or modulation_norm");
  }
  StftGram gram;
  gram.dim = phys.grid().dim();
  gram.x_count = rows.nx();
  gram.w_count = rows.nw();
  gram.x_step = rows.x_step();
  gram.w_step = rows.w_step();
  gram.x_origin = -phys.grid().extent();
  gram.values.resize(rows.row_count() * rows.row_size());

  const unsigned workers = worker_count(rows.row_count());
  std::vector<RowScratch> scratch(workers);
  for (auto& s : scratch) {
    s.work.resize(phys.size());
    s.out.resize(rows.row_size());
  }
  parallel_for(rows.row_count(), [&](std::size_t b, unsigned w) {
    auto& s = scratch[w];
    rows.row(b, s.work, s.out);
    std::copy(s.out.begin(), s.out.end(), gram.values.begin() + static_cast<std::ptrdiff_t>(b * rows.row_size()));
  });
  return gram;
}

std::vector<double> modulation_norms(const Field& f, const ModulationParams& lattice,
                                     std::span<const MixedExponents> exponents) {
  ModulationParams check = lattice;
  for (const auto& e : exponents) {
    check.p = e.p;
    check.q = e.q;
    check.s = e.s;
    check.validate(f.grid());
  }
  lattice.validate(f.grid());
  if (exponents.empty()) return {};

  const Field phys = as_physical(f);
  const StftRows rows(phys, lattice);
  const std::size_t count = rows.row_count();
  const double x_weight = std::pow(rows.x_step(), phys.grid().dim());
  const double w_weight = std::pow(rows.w_step(), phys.grid().dim());

  std::vector<std::vector<double>> row_norms(exponents.size(), std::vector<double>(count));
  const unsigned workers = worker_count(count);
  std::vector<RowScratch> scratch(workers);
  for (auto& s : scratch) {
    s.work.resize(phys.size());
    s.out.resize(rows.row_size());
  }
  parallel_for(count, [&](std::size_t b, unsigned w) {
    auto& s = scratch[w];
    rows.row(b, s.work, s.out);
    for (std::size_t e = 0; e < exponents.size(); ++e) {
      LpAccumulator inner(finite_or_inf_exponent(exponents[e].p), x_weight);
      for (const auto& v : s.out) inner.add(std::abs(v));
      row_norms[e][b] = inner.value();
    }
  });

  std::vector<double> result;
  result.reserve(exponents.size());
  for (std::size_t e = 0; e < exponents.size(); ++e) {
    LpAccumulator outer(finite_or_inf_exponent(exponents[e].q), w_weight);
    for (std::size_t b = 0; b < count; ++b) {
      double weight = 1.0;
      if (exponents[e].s != 0.0) {
        const auto w = rows.frequency(b);
        const double w2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
        weight = std::pow(1.0 + w2, exponents[e].s / 2.0);
      }
      outer.add(row_norms[e][b] * weight);
    }
    result.push_back(outer.value());
  }
  return result;
}

double modulation_norm(const Field& f, const ModulationParams& params) {
  const MixedExponents e{params.p, params.q, params.s};
  return modulation_norms(f, params, std::span<const MixedExponents>(&e, 1)).front();
}

double fourier_lebesgue_norm(const Field& f, double p) {
  if (f.space() == Space::Frequency) return lp_norm(f, p);
  return lp_norm(dft(f), p);
}

Field refine_band_limited(const Field& f) {
  const Field phys = as_physical(f);
  const auto& grid = phys.grid();
  const detail::Fft coarse(grid.dim(), grid.points());
  const detail::Fft fine(grid.dim(), 2 * grid.points());
  std::vector<Complex> spec(phys.values().begin(), phys.values().end());
  coarse.forward(spec);
  auto padded = detail::pad_raw_spectrum(grid.dim(), grid.points(), spec);
  fine.backward(padded);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (auto& v : padded) v *= inv;
  return Field(grid.refined(), std::move(padded), Space::Physical);
}

Field antialiased_product(const Field& f, const Field& g) {
  require_same_lattice(f, g, "antialiased_product");
  return pointwise_product(refine_band_limited(f), refine_band_limited(g));
}

std::pair<double, double> fl1_algebra_check(const Field& f, const Field& g) {
  require_same_lattice(f, g, "fl1_algebra_check");
  const double lhs = fourier_lebesgue_norm(antialiased_product(f, g), 1.0);
  const double rhs = fourier_lebesgue_norm(f, 1.0) * fourier_lebesgue_norm(g, 1.0);
  return {lhs, rhs};
}

double conjugate_exponent(double p) {
  if (!(p >= 1.0)) throw ParameterError("exponent must be >= 1");
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

namespace {

std::string exponent_text(double p) {
  if (std::isinf(p)) return "inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

bool le(double a, double b) { return a <= b || (std::isfinite(a) && std::isfinite(b) && a - b <= 1e-12 * std::max(1.0, std::abs(b))); }
bool eq(double a, double b) { return le(a, b) && le(b, a); }

}  // namespace

std::string NormSpec::name() const {
  switch (kind) {
    case Kind::Lebesgue:
      return "L^" + exponent_text(p);
    case Kind::FourierLebesgue:
      return "FL^" + exponent_text(p);
    case Kind::Modulation: {
      std::string n = "M^{" + exponent_text(p) + "," + exponent_text(q) + "}";
      if (s != 0.0) n += "_" + exponent_text(s);
      return n;
    }
  }
  return "?";
}

double evaluate_norm(const Field& f, const NormSpec& spec, const ModulationParams& lattice) {
  switch (spec.kind) {
    case NormSpec::Kind::Lebesgue:
      return lp_norm(as_physical(f), spec.p);
    case NormSpec::Kind::FourierLebesgue:
      return fourier_lebesgue_norm(f, spec.p);
    case NormSpec::Kind::Modulation: {
      ModulationParams params = lattice;
      params.p = spec.p;
      params.q = spec.q;
      params.s = spec.s;
      return modulation_norm(f, params);
    }
  }
  return 0.0;
}

std::string embedding_arrow(const NormSpec& from, const NormSpec& to) {
  using Kind = NormSpec::Kind;
  for (const NormSpec* n : {&from, &to}) {
    if (!(n->p >= 1.0) || (n->kind == Kind::Modulation && !(n->q >= 1.0))) {
      throw ParameterError("norm exponents must be >= 1");
    }
  }
  const std::string arrow = from.name() + " -> " + to.name();
  if (from.kind == Kind::Modulation && to.kind == Kind::Modulation) {
    if (le(from.p, to.p) && le(from.q, to.q) && le(to.s, from.s)) return "inclusion";
    throw ParameterError(arrow + ": inclusion needs p1 <= p2, q1 <= q2, s2 <= s1");
  }
  if (from.kind == Kind::Modulation && to.kind == Kind::Lebesgue) {
    const double pc = conjugate_exponent(to.p);
    if (eq(from.p, to.p) && from.s == 0.0 && le(from.q, std::min(to.p, pc))) return "modulation_to_lp";
    throw ParameterError(arrow + ": needs M^{p,q1} -> L^p with q1 <= min(p, p')");
  }
  if (from.kind == Kind::Lebesgue && to.kind == Kind::Modulation) {
    const double pc = conjugate_exponent(from.p);
    if (eq(from.p, to.p) && to.s == 0.0 && le(std::max(from.p, pc), to.q)) return "lp_to_modulation";
    throw ParameterError(arrow + ": needs L^p -> M^{p,q2} with q2 >= max(p, p')");
  }
  if (from.kind == Kind::Modulation && to.kind == Kind::FourierLebesgue) {
    const double pc = conjugate_exponent(to.p);
    if (eq(from.p, std::min(pc, 2.0)) && eq(from.q, to.p) && from.s == 0.0) return "modulation_to_flp";
    throw ParameterError(arrow + ": needs M^{min(p',2),p} -> FL^p");
  }
  if (from.kind == Kind::FourierLebesgue && to.kind == Kind::Modulation) {
    const double pc = conjugate_exponent(from.p);
    if (eq(to.p, std::max(pc, 2.0)) && eq(to.q, from.p) && to.s == 0.0) return "flp_to_modulation";
    throw ParameterError(arrow + ": needs FL^p -> M^{max(p',2),p}");
  }
  throw ParameterError(arrow + ": not one of the supported embeddings");
}

double probe_embedding(const Field& f, const NormSpec& from, const NormSpec& to, const ModulationParams& lattice) {
  embedding_arrow(from, to);
  const double denominator = evaluate_norm(f, from, lattice);
  if (denominator == 0.0) return 0.0;
  return evaluate_norm(f, to, lattice) / denominator;
}

}  // namespace frachartree
