#include "frachartree/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "frachartree/errors.hpp"
#include "frachartree/fft.hpp"

namespace frachartree {

std::string to_string(Space space) {
  return space == Space::Physical ? "physical" : "frequency";
}

GridSpec::GridSpec(int dim, double extent, std::size_t points)
    : dim_(dim), extent_(extent), points_(points), size_(1) {
  if (dim < 1 || dim > kMaxDim) throw ParameterError("grid dimension must be 1, 2 or 3");
  if (!(extent > 0.0) || !std::isfinite(extent)) throw ParameterError("grid extent must be positive");
  if (points < 8 || !std::has_single_bit(points)) {
    throw ParameterError("points per axis must be a power of two >= 8");
  }
  for (int a = 0; a < dim; ++a) size_ *= points;
  // 2^27 complex doubles is 2 GiB per field.
  if (size_ > (std::size_t{1} << 27)) throw ParameterError("grid too large");
}

double GridSpec::cell_volume(Space space) const {
  const double h = space == Space::Physical ? spacing() : freq_step();
  return std::pow(h, dim_);
}

double GridSpec::coordinate(std::size_t i) const {
  return -extent_ + static_cast<double>(i) * spacing();
}

double GridSpec::frequency(std::size_t i) const {
  return static_cast<double>(mode(i)) * freq_step();
}

std::array<std::size_t, GridSpec::kMaxDim> GridSpec::unravel(std::size_t flat) const {
  std::array<std::size_t, kMaxDim> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = flat % points_;
    flat /= points_;
  }
  return idx;
}

std::size_t GridSpec::ravel(const std::array<std::size_t, kMaxDim>& index) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * points_ + index[a];
  return flat;
}

std::array<double, GridSpec::kMaxDim> GridSpec::point(std::size_t flat, Space space) const {
  const auto idx = unravel(flat);
  std::array<double, kMaxDim> p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) {
    p[a] = space == Space::Physical ? coordinate(idx[a]) : frequency(idx[a]);
  }
  return p;
}

double GridSpec::radius(std::size_t flat, Space space) const {
  const auto p = point(flat, space);
  return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
}

std::ostream& operator<<(std::ostream& os, const GridSpec& grid) {
  return os << "GridSpec{d=" << grid.dim() << ", L=" << grid.extent() << ", N=" << grid.points()
            << "}";
}

Field::Field(GridSpec grid, std::vector<Complex> values, Space space)
    : grid_(grid), values_(std::move(values)), space_(space) {
  if (values_.size() != grid_.size()) {
    throw StructuralError("field has " + std::to_string(values_.size()) + " values, grid needs " +
                          std::to_string(grid_.size()));
  }
}

Field Field::zeros(const GridSpec& grid, Space space) {
  return Field(grid, std::vector<Complex>(grid.size()), space);
}

Field Field::sample(const GridSpec& grid, const std::function<Complex(std::span<const double>)>& f,
                    Space space) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto p = grid.point(i, space);
    v[i] = f(std::span<const double>(p.data(), static_cast<std::size_t>(grid.dim())));
  }
  return Field(grid, std::move(v), space);
}

void require_same_lattice(const Field& a, const Field& b, const char* what) {
  if (!(a.grid() == b.grid())) throw StructuralError(std::string(what) + ": grid mismatch");
  if (a.space() != b.space()) throw StructuralError(std::string(what) + ": representation mismatch");
}

namespace {

template <typename Op>
Field zip(const Field& a, const Field& b, const char* what, Op op) {
  require_same_lattice(a, b, what);
  std::vector<Complex> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  return Field(a.grid(), std::move(v), a.space());
}

template <typename Op>
Field map(const Field& f, Op op) {
  std::vector<Complex> v(f.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(f[i]);
  return Field(f.grid(), std::move(v), f.space());
}

// (-1)^(sum of signed modes) for a natural-order frequency index.
double lattice_sign(const GridSpec& grid, std::size_t flat) {
  const auto idx = grid.unravel(flat);
  long total = 0;
  for (int a = 0; a < grid.dim(); ++a) total += grid.mode(idx[a]);
  return (total % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Field operator+(const Field& a, const Field& b) {
  return zip(a, b, "operator+", [](Complex x, Complex y) { return x + y; });
}

Field operator-(const Field& a, const Field& b) {
  return zip(a, b, "operator-", [](Complex x, Complex y) { return x - y; });
}

Field operator*(Complex c, const Field& f) {
  return map(f, [c](Complex x) { return c * x; });
}

Field pointwise_product(const Field& a, const Field& b) {
  return zip(a, b, "pointwise_product", [](Complex x, Complex y) { return x * y; });
}

Field conj(const Field& f) {
  return map(f, [](Complex x) { return std::conj(x); });
}

Field abs_squared(const Field& f) {
  return map(f, [](Complex x) { return Complex(std::norm(x), 0.0); });
}

Field dft(const Field& f) {
  if (f.space() != Space::Physical) throw StructuralError("dft expects a physical-space field");
  const auto& grid = f.grid();
  std::vector<Complex> raw(f.values().begin(), f.values().end());
  detail::Fft(grid.dim(), grid.points()).forward(raw);
  auto natural = detail::raw_to_natural(grid, raw);
  const double scale = grid.cell_volume(Space::Physical);
  for (std::size_t i = 0; i < natural.size(); ++i) natural[i] *= scale * lattice_sign(grid, i);
  return Field(grid, std::move(natural), Space::Frequency);
}

Field idft(const Field& f) {
  if (f.space() != Space::Frequency) throw StructuralError("idft expects a frequency-space field");
  const auto& grid = f.grid();
  std::vector<Complex> signed_values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) signed_values[i] = f[i] * lattice_sign(grid, i);
  auto raw = detail::natural_to_raw(grid, signed_values);
  detail::Fft(grid.dim(), grid.points()).backward(raw);
  const double scale = grid.cell_volume(Space::Frequency);
  for (auto& v : raw) v *= scale;
  return Field(grid, std::move(raw), Space::Physical);
}

double lp_norm(std::span<const Complex> values, double cell_volume, double p) {
  if (!(p >= 1.0)) throw ParameterError("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& v : values) acc += std::norm(v);
    return std::sqrt(acc * cell_volume);
  }
  for (const auto& v : values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * cell_volume, 1.0 / p);
}

double lp_norm(const Field& f, double p) {
  return lp_norm(f.values(), f.grid().cell_volume(f.space()), p);
}

double l2_distance(const Field& a, const Field& b) {
  require_same_lattice(a, b, "l2_distance");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * a.grid().cell_volume(a.space()));
}

Field make_radial(const GridSpec& grid, const std::function<double(double)>& profile) {
  std::vector<Complex> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = profile(grid.radius(i, Space::Physical));
  return Field(grid, std::move(v), Space::Physical);
}

double radial_defect(const Field& f) {
  const auto& grid = f.grid();
  const std::size_t n = grid.points();
  double worst = 0.0;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unravel(flat);
    for (int a = 0; a < grid.dim(); ++a) {
      auto flipped = idx;
      flipped[a] = (n - idx[a]) % n;
      worst = std::max(worst, std::abs(f[grid.ravel(flipped)] - f[flat]));
    }
    for (int a = 0; a + 1 < grid.dim(); ++a) {
      auto swapped = idx;
      std::swap(swapped[a], swapped[a + 1]);
      worst = std::max(worst, std::abs(f[grid.ravel(swapped)] - f[flat]));
    }
  }
  return worst;
}

Field translate(const Field& f, const std::array<long, GridSpec::kMaxDim>& cells) {
  const auto& grid = f.grid();
  const long n = static_cast<long>(grid.points());
  std::vector<Complex> v(f.size());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    auto idx = grid.unravel(flat);
    for (int a = 0; a < grid.dim(); ++a) {
      idx[a] = static_cast<std::size_t>((((static_cast<long>(idx[a]) - cells[a]) % n) + n) % n);
    }
    v[flat] = f[grid.ravel(idx)];
  }
  return Field(grid, std::move(v), f.space());
}

Field modulate(const Field& f, const std::array<long, GridSpec::kMaxDim>& modes) {
  if (f.space() != Space::Physical) throw StructuralError("modulate expects a physical-space field");
  const auto& grid = f.grid();
  std::vector<Complex> v(f.size());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto x = grid.point(flat, Space::Physical);
    double phase = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      phase += static_cast<double>(modes[a]) * grid.freq_step() * x[a];
    }
    v[flat] = std::polar(1.0, 2.0 * kPi * phase) * f[flat];
  }
  return Field(grid, std::move(v), Space::Physical);
}

namespace {

constexpr char kMagic[7] = {'F', 'H', 'G', 'R', 'I', 'D', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(bytes, 8);
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char bytes[8];
  if (!is.read(reinterpret_cast<char*>(bytes), 8)) throw IoError("field container truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return v;
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace

void write_field(std::ostream& os, const Field& f) {
  os.write(kMagic, 7);
  os.put(f.space() == Space::Physical ? '\0' : '\1');
  put_u64(os, static_cast<std::uint64_t>(f.grid().dim()));
  put_u64(os, static_cast<std::uint64_t>(f.grid().points()));
  put_f64(os, f.grid().extent());
  for (const auto& v : f.values()) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw IoError("failed to write field");
}

Field read_field(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8)) throw IoError("field container truncated");
  if (std::memcmp(magic, kMagic, 7) != 0) throw IoError("not an FHGRID1 container");
  if (magic[7] != '\0' && magic[7] != '\1') throw IoError("unknown representation tag");
  const Space space = magic[7] == '\0' ? Space::Physical : Space::Frequency;
  const auto dim = static_cast<int>(get_u64(is));
  const auto n = static_cast<std::size_t>(get_u64(is));
  const double extent = get_f64(is);
  GridSpec grid = [&] {
    try {
      return GridSpec(dim, extent, n);
    } catch (const ParameterError& e) {
      throw IoError(std::string("invalid grid header: ") + e.what());
    }
  }();
  std::vector<Complex> v(grid.size());
  for (auto& c : v) {
    const double re = get_f64(is);
    const double im = get_f64(is);
    c = Complex(re, im);
  }
  return Field(grid, std::move(v), space);
}

void save_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path + " for writing");
  write_field(os, f);
}

Field load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_field(is);
}

std::string serialize_field(const Field& f) {
  std::ostringstream os(std::ios::binary);
  write_field(os, f);
  return os.str();
}

}  // namespace frachartree
