#pragma once

#include "rmhmc/types.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmhmc {

struct LabeledMatrix {
  std::vector<std::string> columns;
  Matrix values;
};

/// Header line followed by one comma-separated row per matrix row, written
/// with max_digits10 so that parsing recovers every value exactly.
void write_matrix_csv(std::ostream& out, const LabeledMatrix& m);
LabeledMatrix read_matrix_csv(std::istream& in);

/// {"columns": [...], "rows": [[...], ...]}
nlohmann::ordered_json matrix_to_json(const LabeledMatrix& m);
LabeledMatrix matrix_from_json(const nlohmann::json& j);

/// Writes `content` to `path`, creating parent directories. Throws
/// ConfigError when the location is not writable.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace rmhmc
