#include "frachartree/run_config.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <sstream>

#include "frachartree/corpus.hpp"
#include "frachartree/errors.hpp"
#include "frachartree/io.hpp"

namespace frachartree {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  if (v == "inf" || v == "infinity") return kInfinity;
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (const std::exception&) {
  }
  // Accept rationals like 7/10 as well.
  try {
    return to_double(parse_rational(v));
  } catch (const ParameterError&) {
    throw ParameterError(key + ": expected a number, got '" + v + "'");
  }
}

long long to_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long n = std::stoll(v, &pos);
    if (pos == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw ParameterError(key + ": expected an integer, got '" + v + "'");
}

std::size_t to_count(const std::string& key, const std::string& v) {
  const long long n = to_integer(key, v);
  if (n < 0) throw ParameterError(key + ": must be non-negative");
  return static_cast<std::size_t>(n);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ParameterError(key + ": expected true or false, got '" + v + "'");
}

Rational to_rational(const std::string& key, const std::string& v) {
  try {
    return parse_rational(v);
  } catch (const ParameterError&) {
    throw ParameterError(key + ": expected a rational such as 7/10 or 0.7, got '" + v + "'");
  }
}

std::string real_text(double v) { return format_double(v); }

std::string exponent_text(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<MixedExponents> parse_mpq(const std::string& key, const std::string& v) {
  std::vector<MixedExponents> out;
  std::stringstream entries(v);
  std::string entry;
  while (std::getline(entries, entry, ';')) {
    entry = trim(entry);
    if (entry.empty()) continue;
    std::vector<std::string> parts;
    std::stringstream fields(entry);
    std::string part;
    while (std::getline(fields, part, ',')) parts.push_back(trim(part));
    if (parts.size() < 2 || parts.size() > 3) {
      throw ParameterError(key + ": entries are 'p,q' or 'p,q,s', got '" + entry + "'");
    }
    MixedExponents e;
    e.p = to_real(key, parts[0]);
    e.q = to_real(key, parts[1]);
    e.s = parts.size() == 3 ? to_real(key, parts[2]) : 0.0;
    out.push_back(e);
  }
  return out;
}

std::string mpq_text(const std::vector<MixedExponents>& list) {
  std::string out;
  for (const auto& e : list) {
    if (!out.empty()) out += "; ";
    out += exponent_text(e.p) + "," + exponent_text(e.q) + "," + exponent_text(e.s);
  }
  return out;
}

struct Key {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::map<std::string, Key>& key_table() {
  using C = RunConfig;
  using S = const std::string&;
  static const std::map<std::string, Key> table = {
      {"grid.dim", {[](C& c, S k, S v) { c.dim = static_cast<int>(to_integer(k, v)); },
                    [](const C& c) { return std::to_string(c.dim); }}},
      {"grid.L", {[](C& c, S k, S v) { c.extent = to_real(k, v); }, [](const C& c) { return real_text(c.extent); }}},
      {"grid.N", {[](C& c, S k, S v) { c.points = to_count(k, v); },
                  [](const C& c) { return std::to_string(c.points); }}},
      {"grid.max_points_3d", {[](C& c, S k, S v) { c.max_points_3d = to_count(k, v); },
                              [](const C& c) { return std::to_string(c.max_points_3d); }}},
      {"kernel.lambda", {[](C& c, S k, S v) { c.lambda = to_real(k, v); },
                         [](const C& c) { return real_text(c.lambda); }}},
      {"kernel.gamma", {[](C& c, S k, S v) { c.gamma = to_rational(k, v); },
                        [](const C& c) { return format_rational(c.gamma); }}},
      {"kernel.dc_rule", {[](C& c, S, S v) { c.dc_rule = dc_rule_from_string(v); },
                          [](const C& c) { return to_string(c.dc_rule); }}},
      {"propagator.alpha", {[](C& c, S k, S v) { c.alpha = to_rational(k, v); },
                            [](const C& c) { return format_rational(c.alpha); }}},
      {"propagator.phase_constant", {[](C& c, S k, S v) { c.phase_constant = to_real(k, v); },
                                     [](const C& c) { return real_text(c.phase_constant); }}},
      {"propagator.direction",
       {[](C& c, S k, S v) {
          if (v == "forward") {
            c.direction = Direction::Forward;
          } else if (v == "backward") {
            c.direction = Direction::Backward;
          } else {
            throw ParameterError(k + ": expected forward or backward");
          }
        },
        [](const C& c) { return std::string(c.direction == Direction::Forward ? "forward" : "backward"); }}},
      {"solver.method", {[](C& c, S, S v) { c.method = method_from_string(v); },
                         [](const C& c) { return to_string(c.method); }}},
      {"solver.dt", {[](C& c, S k, S v) { c.dt = to_real(k, v); }, [](const C& c) { return real_text(c.dt); }}},
      {"solver.t_end", {[](C& c, S k, S v) { c.t_end = to_real(k, v); },
                        [](const C& c) { return real_text(c.t_end); }}},
      {"solver.picard_tol", {[](C& c, S k, S v) { c.picard_tol = to_real(k, v); },
                             [](const C& c) { return real_text(c.picard_tol); }}},
      {"solver.picard_max_iter", {[](C& c, S k, S v) { c.picard_max_iter = static_cast<int>(to_integer(k, v)); },
                                  [](const C& c) { return std::to_string(c.picard_max_iter); }}},
      {"solver.picard_window", {[](C& c, S k, S v) { c.picard_window = to_count(k, v); },
                                [](const C& c) { return std::to_string(c.picard_window); }}},
      {"solver.record_stride", {[](C& c, S k, S v) { c.record_stride = to_count(k, v); },
                                [](const C& c) { return std::to_string(c.record_stride); }}},
      {"norms.l2", {[](C& c, S k, S v) { c.record_l2 = to_bool(k, v); },
                    [](const C& c) { return std::string(c.record_l2 ? "true" : "false"); }}},
      {"norms.fl1", {[](C& c, S k, S v) { c.record_fl1 = to_bool(k, v); },
                     [](const C& c) { return std::string(c.record_fl1 ? "true" : "false"); }}},
      {"norms.mpq", {[](C& c, S k, S v) { c.mpq = parse_mpq(k, v); }, [](const C& c) { return mpq_text(c.mpq); }}},
      {"norms.x_stride", {[](C& c, S k, S v) { c.x_stride = to_count(k, v); },
                          [](const C& c) { return std::to_string(c.x_stride); }}},
      {"norms.w_stride", {[](C& c, S k, S v) { c.w_stride = to_count(k, v); },
                          [](const C& c) { return std::to_string(c.w_stride); }}},
      {"norms.window_width", {[](C& c, S k, S v) { c.window_width = to_real(k, v); },
                              [](const C& c) { return real_text(c.window_width); }}},
      {"theory.p", {[](C& c, S k, S v) { c.theory_p = to_rational(k, v); },
                    [](const C& c) { return format_rational(c.theory_p); }}},
      {"theory.q", {[](C& c, S k, S v) { c.theory_q = to_rational(k, v); },
                    [](const C& c) { return format_rational(c.theory_q); }}},
      {"initial.profile", {[](C& c, S, S v) { c.profile = v; }, [](const C& c) { return c.profile; }}},
      {"initial.width", {[](C& c, S k, S v) { c.width = to_real(k, v); },
                         [](const C& c) { return real_text(c.width); }}},
      {"initial.amplitude", {[](C& c, S k, S v) { c.amplitude = to_real(k, v); },
                             [](const C& c) { return real_text(c.amplitude); }}},
      {"initial.path", {[](C& c, S, S v) { c.initial_path = v; }, [](const C& c) { return c.initial_path; }}},
      {"seed", {[](C& c, S k, S v) { c.seed = static_cast<std::uint64_t>(to_integer(k, v)); },
                [](const C& c) { return std::to_string(c.seed); }}},
      {"output.dir", {[](C& c, S, S v) { c.output_dir = v; }, [](const C& c) { return c.output_dir; }}},
      {"verify.L", {[](C& c, S k, S v) { c.verify_extent = to_real(k, v); },
                    [](const C& c) { return real_text(c.verify_extent); }}},
      {"verify.N", {[](C& c, S k, S v) { c.verify_points = to_count(k, v); },
                    [](const C& c) { return std::to_string(c.verify_points); }}},
      {"verify.lambda", {[](C& c, S k, S v) { c.verify_lambda = to_real(k, v); },
                         [](const C& c) { return real_text(c.verify_lambda); }}},
      {"verify.gamma", {[](C& c, S k, S v) { c.verify_gamma = to_real(k, v); },
                        [](const C& c) { return real_text(c.verify_gamma); }}},
      {"verify.p", {[](C& c, S k, S v) { c.verify_p = to_real(k, v); },
                    [](const C& c) { return real_text(c.verify_p); }}},
      {"verify.q", {[](C& c, S k, S v) { c.verify_q = to_real(k, v); },
                    [](const C& c) { return real_text(c.verify_q); }}},
      {"verify.refine", {[](C& c, S k, S v) { c.verify_refine = to_bool(k, v); },
                         [](const C& c) { return std::string(c.verify_refine ? "true" : "false"); }}},
  };
  return table;
}

}  // namespace

std::vector<std::string> known_config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : key_table()) keys.push_back(k);
  return keys;
}

std::map<std::string, std::string> RunConfig::resolved() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, key] : key_table()) out[k] = key.get(*this);
  return out;
}

std::string RunConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : resolved()) out += k + " = " + v + "\n";
  return out;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : resolved()) j[k] = v;
  return j;
}

RunConfig parse_run_config_entries(const std::map<std::string, std::string>& entries,
                                   const std::filesystem::path& base_dir) {
  RunConfig cfg;
  const auto& table = key_table();
  for (const auto& [k, v] : entries) {
    const auto it = table.find(k);
    if (it == table.end()) throw ParameterError("unknown config key '" + k + "'");
    it->second.set(cfg, k, v);
  }
  if (!cfg.initial_path.empty() && !base_dir.empty()) {
    const std::filesystem::path p(cfg.initial_path);
    if (p.is_relative()) cfg.initial_path = (base_dir / p).lexically_normal().string();
  }
  return cfg;
}

RunConfig parse_run_config(std::istream& is, const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> entries;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("line " + std::to_string(number) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParameterError("line " + std::to_string(number) + ": empty key");
    if (!entries.emplace(key, value).second) {
      throw ParameterError("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return parse_run_config_entries(entries, base_dir);
}

RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("config file '" + path.string() + "' does not exist");
  const std::string text = read_text_file(path);
  const auto base = path.parent_path();
  if (path.extension() == ".json") {
    nlohmann::json manifest;
    try {
      manifest = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParameterError("manifest '" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (!manifest.contains("config") || !manifest["config"].is_object()) {
      throw ParameterError("manifest '" + path.string() + "' has no config object");
    }
    std::map<std::string, std::string> entries;
    for (const auto& [k, v] : manifest["config"].items()) {
      entries[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    return parse_run_config_entries(entries, base);
  }
  std::istringstream is(text);
  return parse_run_config(is, base);
}

void RunConfig::validate() const {
  if (dim < 1 || dim > 3) throw ParameterError("grid.dim must be 1, 2 or 3");
  if (dim == 3 && points > max_points_3d) {
    throw ParameterError("grid.N = " + std::to_string(points) + " exceeds grid.max_points_3d for d = 3");
  }
  if (!(lambda == lambda) || !std::isfinite(lambda)) throw ParameterError("kernel.lambda must be finite");
  if (x_stride < 1 || w_stride < 1) throw ParameterError("norm strides must be >= 1");
  if (!(amplitude == amplitude) || !std::isfinite(amplitude)) throw ParameterError("initial.amplitude must be finite");
  if (!(width > 0.0)) throw ParameterError("initial.width must be positive");
  grid();
  propagator().validate();
  solve_config().validate();
}

GridSpec RunConfig::grid() const { return GridSpec(dim, extent, points); }

PropagatorSpec RunConfig::propagator() const {
  return PropagatorSpec{to_double(alpha), phase_constant, direction};
}

HartreeKernel RunConfig::kernel() const { return HartreeKernel(grid(), lambda, to_double(gamma), dc_rule); }

SolveConfig RunConfig::solve_config() const {
  SolveConfig cfg(kernel());
  cfg.prop = propagator();
  cfg.t_end = t_end;
  cfg.dt = dt;
  cfg.method = method;
  cfg.picard_tol = picard_tol;
  cfg.picard_max_iter = picard_max_iter;
  cfg.picard_window = picard_window;
  cfg.record_l2 = record_l2;
  cfg.record_fl1 = record_fl1;
  cfg.mpq = mpq;
  cfg.mpq_lattice.window = Window::gaussian(window_width);
  cfg.mpq_lattice.x_stride = x_stride;
  cfg.mpq_lattice.w_step = static_cast<double>(w_stride) * grid().freq_step();
  cfg.record_stride = record_stride;
  return cfg;
}

Field RunConfig::initial_field() const {
  const GridSpec g = grid();
  if (profile == "file") {
    if (initial_path.empty()) throw ParameterError("initial.profile = file needs initial.path");
    Field f = load_field(initial_path);
    if (!(f.grid() == g)) throw ParameterError("initial field '" + initial_path + "' does not match the grid");
    if (f.space() != Space::Physical) f = idft(f);
    return Complex(amplitude) * f;
  }
  TestFunction fn;
  if (profile == "gaussian") {
    fn = gaussian(width);
  } else if (profile == "bump") {
    fn = bump(width);
  } else {
    bool found = false;
    for (auto& candidate : standard_corpus(dim, seed)) {
      if (candidate.id == profile) {
        fn = std::move(candidate);
        found = true;
        break;
      }
    }
    if (!found) throw ParameterError("unknown initial.profile '" + profile + "'");
  }
  return fn.scaled(Complex(amplitude)).sample(g);
}

RangeReport RunConfig::gate() const { return range_gate(alpha, dim, gamma, theory_p, theory_q); }

VerifyOptions RunConfig::verify_options() const {
  VerifyOptions o;
  o.seed = seed;
  o.base.grid = CampaignGrid{1, verify_extent, verify_points};
  o.base.lambda = verify_lambda;
  o.base.gamma = verify_gamma;
  o.base.p = verify_p;
  o.base.q = verify_q;
  o.base.refine = verify_refine;
  o.propagator.grid = CampaignGrid{1, verify_extent, verify_points};
  o.propagator.refine = verify_refine;
  o.strichartz.refine = verify_refine;
  o.hls2.refine = verify_refine;
  o.hls3.refine = verify_refine;
  return o;
}

}  // namespace frachartree
