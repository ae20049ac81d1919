#pragma once

#include <vector>

#include "frachartree/grid.hpp"

namespace frachartree {

/// Forward evolves i du/dt = c |xi|^alpha u, i.e. multiplies by
/// exp(-i c t |xi|^alpha); Backward flips the sign of the phase.
enum class Direction { Forward, Backward };

/// Free fractional Schroedinger group U(t) with multiplier
/// exp(-i sigma c t |xi|^alpha), sigma = +1 for Forward and -1 for Backward.
struct PropagatorSpec {
  double alpha = 2.0;
  double phase_constant = kPi;
  Direction direction = Direction::Forward;

  /// Throws ParameterError unless alpha in (1/2, 2] and c is finite, non-zero.
  void validate() const;
  double sign() const { return direction == Direction::Forward ? 1.0 : -1.0; }
  PropagatorSpec reversed() const;
};

/// U(t) f. Works in either representation and returns the same one.
/// Throws ParameterError for non-finite t.
Field evolve_free(const Field& f, double t, const PropagatorSpec& spec);

/// || U(t1) U(t2) f - U(t1 + t2) f ||_2.
double group_law_check(const Field& f, double t1, double t2, const PropagatorSpec& spec);

namespace detail {
/// exp(-i sigma c t |xi|^alpha) at every raw FFT index of the grid.
std::vector<Complex> free_multiplier_raw(const GridSpec& grid, double t, const PropagatorSpec& spec);
}  // namespace detail

}  // namespace frachartree
