#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "bose/free_cells.hpp"
#include "bose/loops.hpp"
#include "bose/pareto_walk.hpp"
#include "bose/poisson_dirichlet.hpp"
#include "bose/rdm.hpp"
#include "bose/spectral_kernel.hpp"
#include "bose/tilted.hpp"

namespace bose {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// One JSON object per line, `schema` first.
class JsonLines {
 public:
  explicit JsonLines(std::ostream& os) : os_(os) {}
  void write(const json& record);

 private:
  std::ostream& os_;
};

/// RFC 4180 CSV: CRLF line endings, fields quoted when they contain a comma,
/// quote, or line break; embedded quotes doubled.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& os_;
  std::size_t width_;
};

std::string csv_escape(std::string_view field);
/// Shortest round-trip decimal representation.
std::string format_double(double v);

json to_json(const KernelBoundsReport& r);
json to_json(const ConcentrationReport& r);
json to_json(const PdReport& r);
json to_json(const ParetoLcltReport& r);
json to_json(const FreeCellsReport& r);
json to_json(const LocalCltReport& r);
json to_json(const OdlroReport& r);
json to_json(const EigenResult& r);

}  // namespace bose
