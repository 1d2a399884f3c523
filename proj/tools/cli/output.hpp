#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "revsphere/profiles.hpp"

namespace revsphere::cli {

using Json = nlohmann::ordered_json;

// %.17g, independent of the global locale. Non-finite values print as nan, inf, -inf.
std::string format_real(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Header row, one line per row, then each summary line prefixed with "# ".
std::string to_csv(const Table& t, const std::vector<std::string>& summary = {});

// Columns as named arrays.
Json columns_json(const Table& t);

// schema_version, tool, version, command and the family block.
Json envelope(const std::string& command, const MetricProfile& p);
Json envelope(const std::string& command);

Json family_json(const MetricProfile& p);

std::string dump(const Json& j);

}  // namespace revsphere::cli
