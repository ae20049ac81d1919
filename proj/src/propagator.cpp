#include "frachartree/propagator.hpp"

#include <cmath>

#include "frachartree/errors.hpp"
#include "frachartree/fft.hpp"

namespace frachartree {

void PropagatorSpec::validate() const {
  if (!(alpha > 0.5 && alpha <= 2.0)) throw ParameterError("alpha must lie in (1/2, 2]");
  if (!std::isfinite(phase_constant) || phase_constant == 0.0) {
    throw ParameterError("phase constant must be finite and non-zero");
  }
}

PropagatorSpec PropagatorSpec::reversed() const {
  PropagatorSpec r = *this;
  r.direction = direction == Direction::Forward ? Direction::Backward : Direction::Forward;
  return r;
}

namespace detail {

std::vector<Complex> free_multiplier_raw(const GridSpec& grid, double t, const PropagatorSpec& spec) {
  const auto radii = raw_frequency_radii(grid);
  const double scale = -spec.sign() * spec.phase_constant * t;
  std::vector<Complex> m(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    // |xi|^alpha vanishes at the origin for every alpha > 0.
    const double symbol = radii[i] > 0.0 ? std::pow(radii[i], spec.alpha) : 0.0;
    m[i] = std::polar(1.0, scale * symbol);
  }
  return m;
}

}  // namespace detail

Field evolve_free(const Field& f, double t, const PropagatorSpec& spec) {
  spec.validate();
  if (!std::isfinite(t)) throw ParameterError("evolve_free: time must be finite");
  const auto& grid = f.grid();
  const auto m = detail::free_multiplier_raw(grid, t, spec);

  if (f.space() == Space::Frequency) {
    const auto m_natural = detail::raw_to_natural(grid, m);
    std::vector<Complex> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = m_natural[i] * f[i];
    return Field(grid, std::move(v), Space::Frequency);
  }

  const detail::Fft fft(grid.dim(), grid.points());
  std::vector<Complex> work(f.values().begin(), f.values().end());
  fft.forward(work);
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] *= m[i] * inv;
  fft.backward(work);
  return Field(grid, std::move(work), Space::Physical);
}

double group_law_check(const Field& f, double t1, double t2, const PropagatorSpec& spec) {
  const Field composed = evolve_free(evolve_free(f, t2, spec), t1, spec);
  const Field direct = evolve_free(f, t1 + t2, spec);
  return l2_distance(composed, direct);
}

}  // namespace frachartree
