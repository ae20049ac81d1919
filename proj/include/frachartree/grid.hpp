#pragma once

// Periodic lattice on [-L, L)^d and complex grid functions living on it.
//
// Fourier convention: f^(xi) = \int f(x) exp(-2 pi i x.xi) dx, approximated by
// the Riemann sum spacing^d * sum_j f(x_j) exp(-2 pi i x_j.xi_k) on the
// frequency lattice xi_k = k / (2L), k = -N/2 .. N/2-1. Frequency fields are
// stored in natural (monotone) order along every axis.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace frachartree {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Space { Physical, Frequency };

std::string to_string(Space space);

class GridSpec {
 public:
  static constexpr int kMaxDim = 3;

  /// Throws ParameterError unless 1 <= dim <= 3, extent > 0 and points is a
  /// power of two >= 8.
  GridSpec(int dim, double extent, std::size_t points);

  int dim() const { return dim_; }
  /// Half-width L of the periodic cell [-L, L)^d.
  double extent() const { return extent_; }
  /// Points N per axis.
  std::size_t points() const { return points_; }
  /// Total number of lattice sites N^d.
  std::size_t size() const { return size_; }

  double spacing() const { return 2.0 * extent_ / static_cast<double>(points_); }
  double freq_step() const { return 1.0 / (2.0 * extent_); }

  /// Quadrature weight of one lattice cell in the given representation.
  double cell_volume(Space space) const;

  /// Physical coordinate -L + i * spacing of axis index i.
  double coordinate(std::size_t i) const;
  /// Frequency (i - N/2) * freq_step of natural-order axis index i.
  double frequency(std::size_t i) const;
  /// Signed mode number i - N/2 of natural-order axis index i.
  long mode(std::size_t i) const { return static_cast<long>(i) - static_cast<long>(points_ / 2); }

  /// Row-major multi-index of a flat index (unused trailing axes are 0).
  std::array<std::size_t, kMaxDim> unravel(std::size_t flat) const;
  std::size_t ravel(const std::array<std::size_t, kMaxDim>& index) const;

  /// Physical point or frequency of a flat index.
  std::array<double, kMaxDim> point(std::size_t flat, Space space) const;
  double radius(std::size_t flat, Space space) const;

  /// Same cell, twice the points per axis.
  GridSpec refined() const { return GridSpec(dim_, extent_, 2 * points_); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int dim_;
  double extent_;
  std::size_t points_;
  std::size_t size_;
};

std::ostream& operator<<(std::ostream& os, const GridSpec& grid);

/// Complex values on a GridSpec, tagged with their representation. Values are
/// immutable after construction; every operation returns a new Field.
class Field {
 public:
  /// Throws StructuralError when values.size() != grid.size().
  Field(GridSpec grid, std::vector<Complex> values, Space space = Space::Physical);

  static Field zeros(const GridSpec& grid, Space space = Space::Physical);

  /// Samples f at every lattice point (physical coordinates or frequencies).
  /// The span passed to f has grid.dim() entries.
  static Field sample(const GridSpec& grid,
                      const std::function<Complex(std::span<const double>)>& f,
                      Space space = Space::Physical);

  const GridSpec& grid() const { return grid_; }
  Space space() const { return space_; }
  std::size_t size() const { return values_.size(); }
  std::span<const Complex> values() const { return values_; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }

  /// Moves the storage out, leaving the field empty.
  std::vector<Complex> release() && { return std::move(values_); }

 private:
  GridSpec grid_;
  std::vector<Complex> values_;
  Space space_;
};

// Elementwise arithmetic. Binary operations require identical grid and space.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(Complex c, const Field& f);
/// Pointwise product on the lattice, without anti-aliasing.
Field pointwise_product(const Field& a, const Field& b);
Field conj(const Field& f);
Field abs_squared(const Field& f);

void require_same_lattice(const Field& a, const Field& b, const char* what);

/// Riemann-sum approximation of the continuous Fourier transform.
Field dft(const Field& f);
/// Inverse of dft with matching normalisation.
Field idft(const Field& f);

/// Discrete L^p norm with cell_volume weights; p = kInfinity gives max |f|.
/// Throws ParameterError when p < 1.
double lp_norm(const Field& f, double p);
double lp_norm(std::span<const Complex> values, double cell_volume, double p);

/// L^2 distance between two fields on the same lattice.
double l2_distance(const Field& a, const Field& b);

/// Field with values profile(|x|).
Field make_radial(const GridSpec& grid, const std::function<double(double)>& profile);

/// Largest |f(sigma x) - f(x)| over the generators of the lattice symmetry
/// group (single-axis sign flips and adjacent axis swaps). Zero for radial data.
double radial_defect(const Field& f);

/// T_shift f for a shift of whole lattice cells along each axis (periodic).
Field translate(const Field& f, const std::array<long, GridSpec::kMaxDim>& cells);
/// M_w f with w = modes * freq_step, for a physical-space field.
Field modulate(const Field& f, const std::array<long, GridSpec::kMaxDim>& modes);

// Binary container: 8-byte magic "FHGRID1" + space tag byte (0 physical,
// 1 frequency), int64 dim, int64 N, float64 L, then N^d interleaved (re, im)
// float64 pairs in row-major natural order. All little-endian.
void write_field(std::ostream& os, const Field& f);
Field read_field(std::istream& is);
void save_field(const std::string& path, const Field& f);
Field load_field(const std::string& path);
/// Serialized bytes of f (what write_field emits).
std::string serialize_field(const Field& f);

}  // namespace frachartree
