#include "posbvp/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace posbvp {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double x = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw FormatError("not a number: '" + std::string(text) + "'");
  }
  return x;
}

void write_csv(std::ostream& os, const GridFunction& u) {
  const auto us = u.u();
  const auto dus = u.du();
  std::string out = "t,u,du\n";
  for (std::size_t i = 0; i < us.size(); ++i) {
    out += format_double(u.grid().node(i));
    out += ',';
    out += format_double(us[i]);
    out += ',';
    out += format_double(dus[i]);
    out += '\n';
  }
  os << out;
}

std::string to_csv(const GridFunction& u) {
  std::ostringstream os;
  write_csv(os, u);
  return os.str();
}

GridFunction read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,u,du") {
    throw FormatError("CSV header must be 't,u,du'");
  }
  std::vector<double> ts, us, dus;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos) {
      throw FormatError("CSV row must have three fields: '" + line + "'");
    }
    const std::string_view sv(line);
    ts.push_back(parse_double(sv.substr(0, c1)));
    us.push_back(parse_double(sv.substr(c1 + 1, c2 - c1 - 1)));
    dus.push_back(parse_double(sv.substr(c2 + 1)));
  }
  if (ts.size() < 3) throw FormatError("CSV needs at least three rows");
  if (ts.front() != 0.0) throw FormatError("CSV grid must start at t=0");
  const Grid grid(ts.back(), static_cast<int>(ts.size() - 1));
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (std::abs(ts[i] - grid.node(i)) > 1e-12 * grid.length()) {
      throw FormatError("CSV nodes are not uniformly spaced");
    }
  }
  return GridFunction(grid, std::move(us), std::move(dus));
}

using nlohmann::json;

json to_json(const SolveReport& r) {
  return json{{"converged", r.converged},
              {"method", r.method},
              {"iterations", r.iterations},
              {"newton_iterations", r.newton_iterations},
              {"residual", r.residual},
              {"boundary_defect", r.boundary_defect},
              {"fixed_point_gap", r.fixed_point_gap},
              {"sup_norm", r.sup_norm},
              {"deriv_sup_norm", r.deriv_sup_norm},
              {"n", r.solution.grid().intervals()},
              {"T", r.solution.grid().length()},
              {"note", r.note}};
}

json to_json(const HypothesisReport& r) {
  json norms = json::array();
  for (const auto& [p, nrm] : r.sweep_norms) norms.push_back({{"parameter", p}, {"norm", nrm}});
  return json{{"target", r.target},
              {"band", r.band},
              {"integral_value", r.integral_value},
              {"integral_passes", r.integral_passes},
              {"sweep_norms", norms},
              {"failed_parameters", r.failed_parameters},
              {"norm_avoidance", r.norm_avoidance},
              {"nonexistence_at_alpha0", r.nonexistence_at_alpha0},
              {"norm_escape", r.norm_escape},
              {"passed", r.passed},
              {"note", r.note}};
}

json to_json(const DegreeReport& r) {
  auto opt = [](const std::optional<int>& x) { return x ? json(*x) : json(nullptr); };
  return json{{"r", r.r},
              {"R", r.R},
              {"M_r", r.M_r},
              {"M_R", r.M_R},
              {"h_left", r.h_left},
              {"h_right", r.h_right},
              {"deg_kernel", r.deg_kernel},
              {"deg_omega_r", r.deg_omega_r},
              {"deg_omega_R", opt(r.deg_omega_R)},
              {"deg_annulus", opt(r.deg_annulus)},
              {"theorem_applicable", r.theorem_applicable},
              {"hr", to_json(r.hr)},
              {"hR", to_json(r.hR)},
              {"note", r.note}};
}

json to_json(const PositivityCertificate& c) {
  return json{{"verdict", std::string(to_string(c.verdict))},
              {"min_value", c.min_value},
              {"min_location", c.min_location},
              {"margin_interior", c.margin_interior}};
}

json to_json(const ConditionCheck& c) {
  return json{{"passed", c.passed}, {"margin", c.margin}, {"note", c.note}};
}

json to_json(const GrowthReport& g) {
  return json{{"f1", to_json(g.f1)},
              {"f2", to_json(g.f2)},
              {"nagumo_bound", to_json(g.nagumo_bound)},
              {"nagumo_liminf", to_json(g.nagumo_liminf)},
              {"nagumo_divergence", to_json(g.nagumo_divergence)},
              {"probe_density", g.probe_density},
              {"all_passed", g.all_passed()}};
}

}  // namespace posbvp
