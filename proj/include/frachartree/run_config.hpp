#pragma once

// Flat "section.key = value" run configuration.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "frachartree/campaigns.hpp"
#include "frachartree/estimates.hpp"
#include "frachartree/solver.hpp"

namespace frachartree {

struct RunConfig {
  // grid
  int dim = 1;
  double extent = 8.0;
  std::size_t points = 256;
  std::size_t max_points_3d = 64;
  // kernel
  double lambda = 1.0;
  Rational gamma{2, 5};
  DcRule dc_rule = DcRule::LatticeZeta;
  // propagator
  Rational alpha{2};
  double phase_constant = kPi;
  Direction direction = Direction::Forward;
  // solver
  Method method = Method::StrangSplit;
  double dt = 1e-3;
  double t_end = 1.0;
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  std::size_t picard_window = 0;
  std::size_t record_stride = 10;
  // norms
  bool record_l2 = true;
  bool record_fl1 = true;
  std::vector<MixedExponents> mpq;
  std::size_t x_stride = 1;
  std::size_t w_stride = 1;
  double window_width = 1.0;
  // data space M^{p,q} used by the hypothesis gate
  Rational theory_p{2};
  Rational theory_q{1};
  // initial data
  std::string profile = "gaussian";
  double width = 1.0;
  double amplitude = 1.0;
  std::string initial_path;
  std::uint64_t seed = 20240917;
  // output
  std::string output_dir = "run_output";
  // verification campaigns
  double verify_extent = 16.0;
  std::size_t verify_points = 512;
  double verify_lambda = 1.0;
  double verify_gamma = 0.5;
  double verify_p = 1.0;
  double verify_q = 1.0;
  bool verify_refine = true;

  /// Every key with its resolved value, as written by to_text().
  std::map<std::string, std::string> resolved() const;
  std::string to_text() const;
  nlohmann::json to_json() const;

  GridSpec grid() const;
  PropagatorSpec propagator() const;
  HartreeKernel kernel() const;
  SolveConfig solve_config() const;
  /// Initial data on grid(); file profiles must match the grid exactly.
  Field initial_field() const;
  RangeReport gate() const;
  VerifyOptions verify_options() const;

  /// Throws ParameterError when a value is out of range.
  void validate() const;
};

/// Parses key = value lines ('#' starts a comment). Unknown or repeated keys
/// and malformed values throw ParameterError; relative initial.path values
/// are resolved against base_dir.
RunConfig parse_run_config(std::istream& is, const std::filesystem::path& base_dir = {});
RunConfig parse_run_config_entries(const std::map<std::string, std::string>& entries,
                                   const std::filesystem::path& base_dir = {});
/// Reads a config file; a .json file is taken to be a run manifest and its
/// "config" object is replayed.
RunConfig load_run_config(const std::filesystem::path& path);

/// Every key recognized by the parser.
std::vector<std::string> known_config_keys();

}  // namespace frachartree
