#pragma once

// Verification campaigns: measured quotients lhs / rhs of the inequalities
// used in the well-posedness argument, evaluated over a corpus at two grid
// resolutions.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frachartree/corpus.hpp"
#include "frachartree/estimates.hpp"
#include "frachartree/grid.hpp"
#include "frachartree/propagator.hpp"
#include "frachartree/timefreq.hpp"

namespace frachartree {

struct CampaignGrid {
  int dim = 1;
  double extent = 16.0;
  std::size_t points = 512;

  GridSpec spec() const { return GridSpec(dim, extent, points); }
  CampaignGrid refined() const { return CampaignGrid{dim, extent, 2 * points}; }
};

struct Quotient {
  std::string input_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

/// Quotient with ratio lhs / rhs (0 when both vanish).
Quotient make_quotient(std::string id, double lhs, double rhs);

struct EstimateReport {
  std::string name;
  std::vector<Quotient> quotients;
  double sup_ratio = 0.0;
  /// sup ratio at the refined grid, and |refined - base| / base.
  double refined_sup_ratio = 0.0;
  double grid_refinement_drift = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  std::vector<std::string> failures;

  bool failed() const { return !failures.empty(); }
  void add_metric(const std::string& key, double value) { metrics.emplace_back(key, value); }
  /// Throws std::out_of_range for an unknown key.
  double metric(const std::string& key) const;

  /// Sets sup_ratio from the base quotients; when `refined` is non-empty also
  /// sets the refinement drift and applies the refinement rule (FAIL when the
  /// drift exceeds max_drift). Non-finite ratios always FAIL.
  void finish(const std::vector<Quotient>& refined, double max_drift = 1.0);
};

/// Shared campaign parameters.
struct CampaignSettings {
  CampaignGrid grid;
  double lambda = 1.0;
  double gamma = 0.5;
  double alpha = 2.0;
  /// Modulation exponents of the estimate.
  double p = 1.0;
  double q = 1.0;
  /// Window and analysis lattice for modulation norms.
  ModulationParams lattice;
  /// Also evaluate at N -> 2N.
  bool refine = true;
};

/// ||(K*|f|^2) f||_{M^{p,q}} / ||f||^3_{M^{p,q}}. Requires 1 <= p <= 2 and
/// 1 <= q < 2d/(d+gamma).
EstimateReport verify_trilinear(const std::vector<TestFunction>& corpus, const CampaignSettings& settings);

/// Difference quotient over consecutive corpus pairs, plus the degenerate
/// g = 0 pair and a directional-derivative consistency check.
EstimateReport verify_difference(const std::vector<TestFunction>& corpus, const CampaignSettings& settings);

struct StrichartzSettings {
  CampaignGrid grid{2, 12.0, 256};
  PropagatorSpec prop{1.5};
  double t_end = 1.0;
  std::size_t time_steps = 64;
  bool refine = true;
  /// Largest accepted max/min quotient over the family.
  double max_spread = 3.0;
};

/// ||U(t) phi||_{L^q_t L^r_x([0,T])} / ||phi||_2 over a radial family.
/// Throws ParameterError for non-radial members or d < 2.
EstimateReport verify_strichartz(const std::vector<TestFunction>& family, const AdmissiblePair& pair,
                                 const StrichartzSettings& settings);

struct HlsSettings {
  CampaignGrid grid{2, 16.0, 512};
  Rational gamma{1};
  Rational p{4, 3};
  std::vector<double> dilations{0.5, 1.0, 2.0};
  /// Function whose dilations are compared.
  TestFunction scaling_probe = gaussian(1.0);
  double max_scaling_variation = 0.02;
  bool refine = true;
};

/// || |x|^-gamma * f ||_{L^q} / ||f||_{L^p} with q the HLS conjugate of p.
EstimateReport verify_hls(const std::vector<TestFunction>& corpus, const HlsSettings& settings);

struct PropagatorCampaignSettings {
  CampaignGrid grid;
  PropagatorSpec prop;
  std::vector<double> times{0.5, 1.0, 2.0};
  std::vector<double> p_values{1.0, 2.0};
  double q = 1.0;
  ModulationParams lattice;
  /// Accepted excess over (1+t)^{d|1/p-1/2|}.
  double slack = 0.1;
  bool refine = true;
};

/// ||U(t) f||_{M^{p,q}} / ||f||_{M^{p,q}} against (1+t)^{d|1/p - 1/2|}; the
/// reported ratio is measured / bound.
EstimateReport verify_propagator(const std::vector<TestFunction>& corpus, const PropagatorCampaignSettings& settings);

/// ||f g||_{FL^1} / (||f||_{FL^1} ||g||_{FL^1}) over all corpus pairs.
EstimateReport verify_algebra(const std::vector<TestFunction>& corpus, const CampaignSettings& settings);

/// ||f g||_{M^{p,q}} / (||f||_{FL^1} ||g||_{M^{p,q}}); FAIL when the sup drifts
/// by more than 20% under refinement.
EstimateReport verify_module(const std::vector<TestFunction>& corpus, const CampaignSettings& settings);

/// One report per embedding arrow, plus window-independence and
/// conjugation-invariance checks.
std::vector<EstimateReport> verify_embeddings(const std::vector<TestFunction>& corpus,
                                              const CampaignSettings& settings);

/// Per-suite settings for the CLI and the acceptance suite.
struct VerifyOptions {
  std::uint64_t seed = 20240917;
  CampaignSettings base;  // trilinear, difference, algebra, module, embeddings
  StrichartzSettings strichartz;
  Rational strichartz_alpha{3, 2};
  Rational strichartz_gamma{7, 10};
  HlsSettings hls2;
  HlsSettings hls3;
  PropagatorCampaignSettings propagator;

  VerifyOptions();
};

std::vector<std::string> suite_names();

/// Runs one suite ("trilinear", "difference", "strichartz", "hls",
/// "propagator", "algebra", "embeddings") or "all". Throws ParameterError for
/// an unknown suite.
std::vector<EstimateReport> run_suite(const std::string& suite, const VerifyOptions& options);

}  // namespace frachartree
