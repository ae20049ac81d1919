#include "frachartree/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "frachartree/errors.hpp"

namespace frachartree::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~PlanPair() {
    if (forward != nullptr) fftw_destroy_plan(forward);
    if (backward != nullptr) fftw_destroy_plan(backward);
  }
};

// The FFTW planner is not thread-safe; execution with the new-array API is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

const PlanPair& plans_for(int dim, std::size_t n) {
  static std::map<std::pair<int, std::size_t>, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto& slot = cache[{dim, n}];
  if (!slot) {
    std::size_t total = 1;
    int dims[3];
    for (int a = 0; a < dim; ++a) {
      dims[a] = static_cast<int>(n);
      total *= n;
    }
    auto* buf = fftw_alloc_complex(total);
    auto pair = std::make_unique<PlanPair>();
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    pair->forward = fftw_plan_dft(dim, dims, buf, buf, FFTW_FORWARD, flags);
    pair->backward = fftw_plan_dft(dim, dims, buf, buf, FFTW_BACKWARD, flags);
    fftw_free(buf);
    if (pair->forward == nullptr || pair->backward == nullptr) {
      throw Error("FFTW failed to create a plan");
    }
    slot = std::move(pair);
  }
  return *slot;
}

}  // namespace

Fft::Fft(int dim, std::size_t n) : dim_(dim), n_(n), size_(1) {
  for (int a = 0; a < dim; ++a) size_ *= n;
  const auto& p = plans_for(dim, n);
  forward_plan_ = p.forward;
  backward_plan_ = p.backward;
}

void Fft::forward(std::span<Complex> data) const {
  if (data.size() != size_) throw StructuralError("fft: buffer size does not match plan");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), ptr, ptr);
}

void Fft::backward(std::span<Complex> data) const {
  if (data.size() != size_) throw StructuralError("fft: buffer size does not match plan");
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), ptr, ptr);
}

std::vector<double> raw_frequency_radii(const GridSpec& grid) {
  const std::size_t n = grid.points();
  const double fs = grid.freq_step();
  std::vector<double> out(grid.size());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto idx = grid.unravel(flat);
    double r2 = 0.0;
    for (int a = 0; a < grid.dim(); ++a) {
      const double xi = static_cast<double>(raw_mode(idx[a], n)) * fs;
      r2 += xi * xi;
    }
    out[flat] = std::sqrt(r2);
  }
  return out;
}

namespace {

// Natural index i <-> raw index (i + n/2) mod n; the map is an involution.
std::vector<Complex> half_shift(const GridSpec& grid, std::span<const Complex> in) {
  if (in.size() != grid.size()) throw StructuralError("spectrum size does not match grid");
  const std::size_t n = grid.points();
  std::vector<Complex> out(in.size());
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    auto idx = grid.unravel(flat);
    for (int a = 0; a < grid.dim(); ++a) idx[a] = (idx[a] + n / 2) % n;
    out[grid.ravel(idx)] = in[flat];
  }
  return out;
}

std::size_t ravel_cube(int dim, std::size_t n, const std::array<std::size_t, 3>& idx) {
  std::size_t flat = 0;
  for (int a = 0; a < dim; ++a) flat = flat * n + idx[a];
  return flat;
}

}  // namespace

std::vector<Complex> natural_to_raw(const GridSpec& grid, std::span<const Complex> natural) {
  return half_shift(grid, natural);
}

std::vector<Complex> raw_to_natural(const GridSpec& grid, std::span<const Complex> raw) {
  return half_shift(grid, raw);
}

std::vector<Complex> pad_raw_spectrum(int dim, std::size_t n, std::span<const Complex> spec) {
  const std::size_t m = 2 * n;
  std::size_t small = 1, big = 1;
  for (int a = 0; a < dim; ++a) {
    small *= n;
    big *= m;
  }
  if (spec.size() != small) throw StructuralError("pad_raw_spectrum: size mismatch");
  std::vector<Complex> out(big, Complex{});
  std::array<std::size_t, 3> idx{0, 0, 0};
  std::array<std::size_t, 3> target{0, 0, 0};
  for (std::size_t flat = 0; flat < small; ++flat) {
    std::size_t rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = rem % n;
      rem /= n;
    }
    for (int a = 0; a < dim; ++a) {
      const long k = raw_mode(idx[a], n);
      target[a] = static_cast<std::size_t>(k < 0 ? k + static_cast<long>(m) : k);
    }
    out[ravel_cube(dim, m, target)] = spec[flat];
  }
  return out;
}

std::vector<Complex> truncate_raw_spectrum(int dim, std::size_t n, std::span<const Complex> spec) {
  const std::size_t m = 2 * n;
  std::size_t small = 1, big = 1;
  for (int a = 0; a < dim; ++a) {
    small *= n;
    big *= m;
  }
  if (spec.size() != big) throw StructuralError("truncate_raw_spectrum: size mismatch");
  std::vector<Complex> out(small);
  std::array<std::size_t, 3> idx{0, 0, 0};
  std::array<std::size_t, 3> source{0, 0, 0};
  for (std::size_t flat = 0; flat < small; ++flat) {
    std::size_t rem = flat;
    for (int a = dim - 1; a >= 0; --a) {
      idx[a] = rem % n;
      rem /= n;
    }
    for (int a = 0; a < dim; ++a) {
      const long k = raw_mode(idx[a], n);
      source[a] = static_cast<std::size_t>(k < 0 ? k + static_cast<long>(m) : k);
    }
    out[flat] = spec[ravel_cube(dim, m, source)];
  }
  return out;
}

}  // namespace frachartree::detail
