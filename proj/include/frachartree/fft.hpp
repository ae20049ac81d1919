#pragma once

// Raw FFTW transforms on physical-index layout. Multipliers that depend only
// on |xi| can be applied directly in this layout: the lattice phase and the
// spacing^d scaling of dft() cancel between forward and backward transforms.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "frachartree/grid.hpp"

namespace frachartree::detail {

/// Handle to cached FFTW plans for a d-dimensional cube of side n.
/// Plans are shared process-wide; execute() is thread-safe.
class Fft {
 public:
  Fft(int dim, std::size_t n);

  /// In-place sum_j a_j exp(-2 pi i j.k / n), unnormalised.
  void forward(std::span<Complex> data) const;
  /// In-place sum_k a_k exp(+2 pi i j.k / n), unnormalised.
  void backward(std::span<Complex> data) const;

  int dim() const { return dim_; }
  std::size_t n() const { return n_; }
  std::size_t size() const { return size_; }

 private:
  int dim_;
  std::size_t n_;
  std::size_t size_;
  void* forward_plan_;
  void* backward_plan_;
};

/// Signed mode number of raw FFT index i on an axis of n points.
inline long raw_mode(std::size_t i, std::size_t n) {
  return i < n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

/// |xi| at every raw-layout index of the grid.
std::vector<double> raw_frequency_radii(const GridSpec& grid);

/// Natural-order frequency field -> raw FFT layout (and back), no scaling.
std::vector<Complex> natural_to_raw(const GridSpec& grid, std::span<const Complex> natural);
std::vector<Complex> raw_to_natural(const GridSpec& grid, std::span<const Complex> raw);

/// Band-limited interpolation of raw spectrum `spec` (n per axis) onto a grid
/// with 2n per axis, returned as raw spectrum of size (2n)^d. Modes are placed
/// at their signed position; the Nyquist mode stays at -n/2.
std::vector<Complex> pad_raw_spectrum(int dim, std::size_t n, std::span<const Complex> spec);
/// Keeps the n^d lowest modes of a (2n)^d raw spectrum.
std::vector<Complex> truncate_raw_spectrum(int dim, std::size_t n, std::span<const Complex> spec);

}  // namespace frachartree::detail
