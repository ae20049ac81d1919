#include "frachartree/hartree.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "frachartree/errors.hpp"

namespace frachartree {

std::string to_string(DcRule rule) {
  switch (rule) {
    case DcRule::LatticeZeta:
      return "lattice_zeta";
    case DcRule::CellAverage:
      return "cell_average";
    case DcRule::Zero:
      return "zero";
  }
  return "unknown";
}

DcRule dc_rule_from_string(const std::string& name) {
  if (name == "lattice_zeta") return DcRule::LatticeZeta;
  if (name == "cell_average") return DcRule::CellAverage;
  if (name == "zero") return DcRule::Zero;
  throw ParameterError("unknown DC rule '" + name + "'");
}

double riesz_constant(int dim, double gamma) {
  if (!(gamma > 0.0 && gamma < dim)) throw ParameterError("gamma must lie in (0, d)");
  const double d = dim;
  return std::pow(kPi, gamma - d / 2.0) * std::tgamma((d - gamma) / 2.0) / std::tgamma(gamma / 2.0);
}

double epstein_zeta(int dim, double s) {
  if (dim < 1 || dim > 3) throw ParameterError("epstein_zeta: dimension must be 1, 2 or 3");
  if (!(s > 0.0 && s < dim)) throw ParameterError("epstein_zeta: need 0 < s < d");
  const double d = dim;
  const double a = s / 2.0;
  const double b = (d - s) / 2.0;
  // pi^(-s/2) Gamma(s/2) Z(s) = -1/a - 1/b
  //   + sum' [ Gamma(a, pi k^2) (pi k^2)^-a + Gamma(b, pi k^2) (pi k^2)^-b ]
  constexpr int kRange = 5;  // exp(-pi * 25) is far below double precision
  double sum = -1.0 / a - 1.0 / b;
  const int hi1 = kRange;
  const int hi2 = dim >= 2 ? kRange : 0;
  const int hi3 = dim >= 3 ? kRange : 0;
  for (int i = -hi1; i <= hi1; ++i) {
    for (int j = -hi2; j <= hi2; ++j) {
      for (int l = -hi3; l <= hi3; ++l) {
        const int k2 = i * i + j * j + l * l;
        if (k2 == 0) continue;
        const double x = kPi * k2;
        sum += boost::math::tgamma(a, x) * std::pow(x, -a) + boost::math::tgamma(b, x) * std::pow(x, -b);
      }
    }
  }
  return sum * std::pow(kPi, a) / std::tgamma(a);
}

namespace {

// Integral of |xi|^-beta over the cube [-1, 1]^d, reduced by homogeneity to
// (2d / (d - beta)) * int_{[-1,1]^(d-1)} (1 + |y|^2)^(-beta/2) dy.
double unit_cube_singular_integral(int dim, double beta) {
  const double d = dim;
  using boost::math::quadrature::gauss;
  double face = 1.0;
  if (dim == 2) {
    face = gauss<double, 30>::integrate([beta](double y) { return std::pow(1.0 + y * y, -beta / 2.0); },
                                        -1.0, 1.0);
  } else if (dim == 3) {
    face = gauss<double, 30>::integrate(
        [beta](double y) {
          return gauss<double, 30>::integrate(
              [beta, y](double z) { return std::pow(1.0 + y * y + z * z, -beta / 2.0); }, -1.0, 1.0);
        },
        -1.0, 1.0);
  }
  return 2.0 * d / (d - beta) * face;
}

}  // namespace

double singular_cell_weight(int dim, double beta, double freq_step, DcRule rule) {
  if (!(beta > 0.0 && beta < dim)) throw ParameterError("singular weight needs 0 < beta < d");
  switch (rule) {
    case DcRule::LatticeZeta:
      return -epstein_zeta(dim, beta) * std::pow(freq_step, -beta);
    case DcRule::CellAverage: {
      const double half = freq_step / 2.0;
      return std::pow(half, dim - beta) * unit_cube_singular_integral(dim, beta) /
             std::pow(freq_step, dim);
    }
    case DcRule::Zero:
      return 0.0;
  }
  return 0.0;
}

HartreeKernel::HartreeKernel(const GridSpec& grid, double lambda, double gamma, DcRule rule)
    : grid_(grid),
      lambda_(lambda),
      gamma_(gamma),
      riesz_constant_(0.0),
      dc_rule_(rule),
      symbol_(Field::zeros(grid, Space::Frequency)),
      k1_(Field::zeros(grid, Space::Frequency)),
      k2_(Field::zeros(grid, Space::Frequency)) {
  if (!(gamma > 0.0 && gamma < grid.dim())) {
    throw ParameterError("Hartree kernel needs 0 < gamma < d (symbol not locally integrable otherwise)");
  }
  if (!std::isfinite(lambda)) throw ParameterError("Hartree coupling must be finite");
  riesz_constant_ = frachartree::riesz_constant(grid.dim(), gamma);

  const double beta = symbol_exponent();
  const double dc = lambda * riesz_constant_ * singular_cell_weight(grid.dim(), beta, grid.freq_step(), rule);

  std::vector<Complex> full(grid.size()), inner(grid.size()), outer(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i, Space::Frequency);
    const double v = r > 0.0 ? symbol_at(r) : dc;
    full[i] = v;
    (r <= 1.0 ? inner[i] : outer[i]) = v;
  }
  raw_symbol_.resize(grid.size());
  const auto raw = detail::natural_to_raw(grid, full);
  for (std::size_t i = 0; i < raw.size(); ++i) raw_symbol_[i] = raw[i].real();
  symbol_ = Field(grid, std::move(full), Space::Frequency);
  k1_ = Field(grid, std::move(inner), Space::Frequency);
  k2_ = Field(grid, std::move(outer), Space::Frequency);
}

double HartreeKernel::symbol_at(double radius) const {
  return lambda_ * riesz_constant_ * std::pow(radius, -symbol_exponent());
}

HartreeKernel build_kernel(const GridSpec& grid, double lambda, double gamma, DcRule rule) {
  return HartreeKernel(grid, lambda, gamma, rule);
}

std::pair<double, double> kernel_split_norms(const HartreeKernel& k, double p, double r) {
  const double d = k.dim();
  const double beta = k.symbol_exponent();
  const double critical = d / beta;
  if (!(p >= 1.0 && p < critical)) throw ParameterError("||k1||_p diverges unless 1 <= p < d/(d-gamma)");
  if (!(r > critical)) throw ParameterError("||k2||_r diverges unless r > d/(d-gamma)");

  const auto& grid = k.grid();
  const double cell = grid.cell_volume(Space::Frequency);
  const double amplitude = std::abs(k.lambda()) * k.riesz_constant();

  double inner = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rad = grid.radius(i, Space::Frequency);
    if (rad == 0.0) continue;
    const double v = std::abs(k.symbol_at(rad));
    if (rad <= 1.0) {
      inner += std::pow(v, p);
    } else if (!std::isinf(r)) {
      outer += std::pow(v, r);
    }
  }
  inner += std::pow(amplitude, p) * singular_cell_weight(grid.dim(), beta * p, grid.freq_step(), k.dc_rule());
  const double k1_norm = std::pow(inner * cell, 1.0 / p);
  const double k2_norm = std::isinf(r) ? amplitude : std::pow(outer * cell, 1.0 / r);
  return {k1_norm, k2_norm};
}

Field riesz_potential(const Field& f, const HartreeKernel& k) {
  if (f.space() != Space::Physical) throw StructuralError("riesz_potential expects a physical-space field");
  if (!(f.grid() == k.grid())) throw StructuralError("riesz_potential: field and kernel grids differ");
  const auto& grid = f.grid();
  const detail::Fft fft(grid.dim(), grid.points());
  std::vector<Complex> work(f.values().begin(), f.values().end());
  fft.forward(work);
  const auto sym = k.raw_symbol();
  const double inv = 1.0 / static_cast<double>(grid.size());
  for (std::size_t i = 0; i < work.size(); ++i) work[i] *= sym[i] * inv;
  fft.backward(work);
  return Field(grid, std::move(work), Space::Physical);
}

PotentialEvaluator::PotentialEvaluator(const HartreeKernel& k)
    : grid_(k.grid()),
      fft_(k.grid().dim(), k.grid().points()),
      fine_fft_(k.grid().dim(), 2 * k.grid().points()),
      symbol_(k.raw_symbol().begin(), k.raw_symbol().end()),
      work_(k.grid().size()) {}

void PotentialEvaluator::potential(std::span<const Complex> u, std::span<Complex> out) {
  if (u.size() != grid_.size() || out.size() != grid_.size()) {
    throw StructuralError("hartree potential: buffer does not match kernel grid");
  }
  const int dim = grid_.dim();
  const std::size_t n = grid_.points();
  const double coarse = static_cast<double>(grid_.size());
  const double refine = std::pow(2.0, dim);

  std::copy(u.begin(), u.end(), work_.begin());
  fft_.forward(work_);
  auto fine = detail::pad_raw_spectrum(dim, n, work_);
  fine_fft_.backward(fine);
  // fine now holds coarse * u on the 2N lattice.
  const double density_scale = 1.0 / (coarse * coarse);
  for (auto& v : fine) v = Complex(std::norm(v) * density_scale, 0.0);
  fine_fft_.forward(fine);
  auto spectrum = detail::truncate_raw_spectrum(dim, n, fine);
  // spectrum / 2^d is the aliasing-free raw DFT of |u|^2 on the N lattice.
  const double scale = 1.0 / (refine * coarse);
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= symbol_[i] * scale;
  fft_.backward(spectrum);
  std::copy(spectrum.begin(), spectrum.end(), out.begin());
}

Field hartree_potential(const Field& u, const HartreeKernel& k) {
  if (u.space() != Space::Physical) throw StructuralError("hartree_potential expects a physical-space field");
  if (!(u.grid() == k.grid())) throw StructuralError("hartree_potential: field and kernel grids differ");
  std::vector<Complex> out(u.size());
  PotentialEvaluator(k).potential(u.values(), out);
  return Field(u.grid(), std::move(out), Space::Physical);
}

Field nonlinearity(const Field& u, const HartreeKernel& k) {
  const Field v = hartree_potential(u, k);
  std::vector<Complex> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] * u[i];
  return Field(u.grid(), std::move(out), Space::Physical);
}

}  // namespace frachartree
