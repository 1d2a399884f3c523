#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "cli.hpp"

namespace revsphere::cli {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // snprintf honours LC_NUMERIC; the decimal separator is always '.' here.
  for (char& c : buf)
    if (c == ',') c = '.';
  return buf;
}

std::string to_csv(const Table& t, const std::vector<std::string>& summary) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_real(row[i]);
    os << '\n';
  }
  for (const auto& line : summary) os << "# " << line << '\n';
  return os.str();
}

Json columns_json(const Table& t) {
  Json cols = Json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    Json arr = Json::array();
    for (const auto& row : t.rows) arr.push_back(row[c]);
    cols[t.columns[c]] = std::move(arr);
  }
  return cols;
}

Json family_json(const MetricProfile& p) {
  Json f = Json::object();
  f["name"] = family_name(p.family());
  f["description"] = p.describe();
  f["a"] = p.a();
  switch (p.family()) {
    case Family::unit_sphere: break;
    case Family::lambda: f["lambda"] = p.lambda(); break;
    case Family::h_generated:
    case Family::theorem_a:
      f["alpha"] = p.generator()->alpha();
      f["n"] = p.generator()->n();
      f["b"] = p.generator()->b().describe();
      break;
  }
  return f;
}

Json envelope(const std::string& command) {
  Json j = Json::object();
  j["schema_version"] = 1;
  j["tool"] = "revsphere";
  j["version"] = REVSPHERE_VERSION;
  j["command"] = command;
  return j;
}

Json envelope(const std::string& command, const MetricProfile& p) {
  Json j = envelope(command);
  j["family"] = family_json(p);
  return j;
}

std::string dump(const Json& j) {
  return j.dump(2) + "\n";
}

}  // namespace revsphere::cli
