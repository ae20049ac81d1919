#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "frachartree/campaigns.hpp"
#include "frachartree/grid.hpp"

namespace frachartree {

/// SHA-1 of the git blob "blob <size>\0<bytes>", as lowercase hex.
std::string git_blob_hash(const std::string& bytes);
/// git_blob_hash of the serialized field.
std::string field_hash(const Field& f);

/// JSON number, with +-infinity and NaN written as strings.
nlohmann::json json_number(double v);

nlohmann::json to_json(const EstimateReport& report);
nlohmann::json to_json(const std::vector<EstimateReport>& reports);

/// Columns report, input_id, lhs, rhs, ratio.
void write_reports_csv(std::ostream& os, const std::vector<EstimateReport>& reports);

struct NormRow {
  std::string function_id;
  std::string norm_name;
  double p = 0.0;
  double q = 0.0;
  double s = 0.0;
  double value = 0.0;
};

/// Columns function_id, norm_name, p, q, s, value.
void write_norm_rows_csv(std::ostream& os, const std::vector<NormRow>& rows);

/// Writes the whole string, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

/// %.17g, or inf / -inf / nan.
std::string format_double(double v);

}  // namespace frachartree
