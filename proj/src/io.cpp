#include "frachartree/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "frachartree/errors.hpp"

namespace frachartree {

std::string git_blob_hash(const std::string& bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), header.data(), header.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &length) != 1) {
    throw IoError("SHA-1 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

std::string field_hash(const Field& f) { return git_blob_hash(serialize_field(f)); }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

nlohmann::json to_json(const EstimateReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["status"] = report.failed() ? "FAIL" : "PASS";
  j["sup_ratio"] = json_number(report.sup_ratio);
  j["refined_sup_ratio"] = json_number(report.refined_sup_ratio);
  j["grid_refinement_drift"] = json_number(report.grid_refinement_drift);
  auto& qs = j["quotients"] = nlohmann::json::array();
  for (const auto& q : report.quotients) {
    qs.push_back({{"input_id", q.input_id},
                  {"lhs", json_number(q.lhs)},
                  {"rhs", json_number(q.rhs)},
                  {"ratio", json_number(q.ratio)}});
  }
  auto& metrics = j["metrics"] = nlohmann::json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = json_number(v);
  j["notes"] = report.notes;
  j["failures"] = report.failures;
  return j;
}

nlohmann::json to_json(const std::vector<EstimateReport>& reports) {
  nlohmann::json j;
  bool failed = false;
  auto& arr = j["campaigns"] = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    failed = failed || r.failed();
  }
  j["status"] = failed ? "FAIL" : "PASS";
  return j;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_reports_csv(std::ostream& os, const std::vector<EstimateReport>& reports) {
  os << "report,input_id,lhs,rhs,ratio\n";
  for (const auto& r : reports) {
    for (const auto& q : r.quotients) {
      os << csv_field(r.name) << ',' << csv_field(q.input_id) << ',' << format_double(q.lhs) << ','
         << format_double(q.rhs) << ',' << format_double(q.ratio) << '\n';
    }
  }
}

void write_norm_rows_csv(std::ostream& os, const std::vector<NormRow>& rows) {
  os << "function_id,norm_name,p,q,s,value\n";
  for (const auto& r : rows) {
    os << csv_field(r.function_id) << ',' << csv_field(r.norm_name) << ',' << format_double(r.p) << ','
       << format_double(r.q) << ',' << format_double(r.s) << ',' << format_double(r.value) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  os << text;
  if (!os) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace frachartree
