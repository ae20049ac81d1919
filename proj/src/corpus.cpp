#include "frachartree/corpus.hpp"

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "frachartree/errors.hpp"

namespace frachartree {

namespace {

double norm2(std::span<const double> x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  return r;
}

double bump_value(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

std::string width_label(double w) {
  std::ostringstream os;
  os << w;
  return os.str();
}

}  // namespace

TestFunction TestFunction::dilated(double mu) const {
  if (!(mu > 0.0)) throw ParameterError("dilation factor must be positive");
  auto inner = eval;
  TestFunction t{id + "@x" + width_label(mu), radial, nullptr};
  t.eval = [inner, mu](std::span<const double> x) {
    std::array<double, GridSpec::kMaxDim> y{};
    for (std::size_t a = 0; a < x.size(); ++a) y[a] = mu * x[a];
    return inner(std::span<const double>(y.data(), x.size()));
  };
  return t;
}

TestFunction TestFunction::scaled(Complex c) const {
  auto inner = eval;
  return TestFunction{id, radial, [inner, c](std::span<const double> x) { return c * inner(x); }};
}

TestFunction gaussian(double width) {
  if (!(width > 0.0)) throw ParameterError("Gaussian width must be positive");
  return TestFunction{"gauss_w" + width_label(width), true, [width](std::span<const double> x) {
                        return Complex(std::exp(-kPi * norm2(x) / (width * width)), 0.0);
                      }};
}

TestFunction bump(double radius) {
  if (!(radius > 0.0)) throw ParameterError("bump radius must be positive");
  return TestFunction{"bump", true, [radius](std::span<const double> x) {
                        return Complex(bump_value(norm2(x) / (radius * radius)), 0.0);
                      }};
}

std::vector<double> corpus_gaussian_widths() { return {0.5, 1.0, 2.0, 4.0}; }

std::vector<TestFunction> standard_corpus(int dim, std::uint64_t seed) {
  if (dim < 1 || dim > GridSpec::kMaxDim) throw ParameterError("corpus dimension must be 1..3");
  std::vector<TestFunction> corpus;
  for (double w : corpus_gaussian_widths()) corpus.push_back(gaussian(w));
  corpus.push_back(bump(1.5));

  // Two off-centre bumps of different size, the second with a phase: neither
  // radial nor real.
  corpus.push_back(TestFunction{"two_bump", false, [](std::span<const double> x) {
                                  double a = 0.0, b = 0.0;
                                  for (std::size_t i = 0; i < x.size(); ++i) {
                                    const double ca = i == 0 ? 1.0 : 0.0;
                                    const double cb = i == 0 ? -1.2 : 0.5;
                                    a += (x[i] - ca) * (x[i] - ca);
                                    b += (x[i] - cb) * (x[i] - cb) / 0.49;
                                  }
                                  return Complex(bump_value(a), 0.0) + Complex(0.0, 0.6) * bump_value(b);
                                }});

  // Random trigonometric sum with frequencies on a fixed 1/4 lattice, under a
  // Gaussian envelope of width 2.
  struct Mode {
    std::array<double, GridSpec::kMaxDim> freq{};
    Complex coeff;
  };
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(-8, 8);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Mode> modes(6);
  for (auto& m : modes) {
    for (int a = 0; a < dim; ++a) m.freq[a] = 0.25 * pick(rng);
    const double re = normal(rng);
    const double im = normal(rng);
    m.coeff = Complex(re, im);
  }
  corpus.push_back(TestFunction{"random_band", false, [modes](std::span<const double> x) {
                                  Complex sum(0.0, 0.0);
                                  for (const auto& m : modes) {
                                    double phase = 0.0;
                                    for (std::size_t a = 0; a < x.size(); ++a) phase += m.freq[a] * x[a];
                                    sum += m.coeff * std::polar(1.0, 2.0 * kPi * phase);
                                  }
                                  return sum * std::exp(-kPi * norm2(x) / 4.0);
                                }});
  return corpus;
}

std::vector<TestFunction> radial_only(const std::vector<TestFunction>& corpus) {
  std::vector<TestFunction> out;
  for (const auto& f : corpus) {
    if (f.radial) out.push_back(f);
  }
  return out;
}

}  // namespace frachartree
