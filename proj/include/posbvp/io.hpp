#pragma once

/// \file
/// CSV export/import of grid functions and JSON views of the reports.

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "posbvp/certification.hpp"
#include "posbvp/nonlinearity.hpp"
#include "posbvp/numerics.hpp"
#include "posbvp/solver.hpp"

namespace posbvp {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest-round-trip decimal text with at most 17 significant digits,
/// independent of the global locale.
std::string format_double(double x);
double parse_double(std::string_view text);

/// Header `t,u,du`, one row per node, LF line endings.
void write_csv(std::ostream& os, const GridFunction& u);
std::string to_csv(const GridFunction& u);

/// Reads a CSV produced by write_csv. The nodes must be uniformly spaced
/// from 0; the grid is rebuilt from the last node and the row count.
GridFunction read_csv(std::istream& is);

nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const HypothesisReport& r);
nlohmann::json to_json(const DegreeReport& r);
nlohmann::json to_json(const PositivityCertificate& c);
nlohmann::json to_json(const GrowthReport& g);
nlohmann::json to_json(const ConditionCheck& c);

}  // namespace posbvp
