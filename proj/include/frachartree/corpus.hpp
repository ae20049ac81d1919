#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "frachartree/grid.hpp"

namespace frachartree {

/// Analytic test function on R^d, sampled on demand so campaigns can refine
/// grids and dilate inputs.
struct TestFunction {
  std::string id;
  bool radial = false;
  std::function<Complex(std::span<const double>)> eval;

  Field sample(const GridSpec& grid) const { return Field::sample(grid, eval); }
  /// x -> f(mu x).
  TestFunction dilated(double mu) const;
  /// c f.
  TestFunction scaled(Complex c) const;
};

/// exp(-pi |x / width|^2).
TestFunction gaussian(double width);
/// exp(-1 / (1 - |x / radius|^2)) inside the ball, 0 outside.
TestFunction bump(double radius = 1.0);

/// Gaussians of widths 1/2, 1, 2, 4, a bump, a non-radial complex two-bump,
/// and a Gaussian-windowed random trigonometric sum drawn from `seed`.
std::vector<TestFunction> standard_corpus(int dim, std::uint64_t seed = 20240917);

/// Subset with radial == true.
std::vector<TestFunction> radial_only(const std::vector<TestFunction>& corpus);

/// Gaussian widths used by the standard corpus.
std::vector<double> corpus_gaussian_widths();

}  // namespace frachartree
