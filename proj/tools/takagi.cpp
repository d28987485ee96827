// Command-line front end. Exit codes: 0 all pass, 2 identity failure,
// 3 input error, 4 numeric fault.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "takagi/analysis.hpp"
#include "takagi/report.hpp"

namespace {

using namespace takagi;

constexpr int kPass = 0;
constexpr int kIdentityFailure = 2;
constexpr int kInputError = 3;
constexpr int kNumericFault = 4;

struct Common {
  std::string manifold;
  std::string strategy;
  std::uint64_t seed = 42;
  std::size_t points = 20;
  double tol_scale = 1.0;
  bool json = false;
  bool timing = false;
};

void add_common(CLI::App* cmd, Common& c, bool sampling) {
  cmd->add_option("manifold", c.manifold, "catalog name or metric file")->required();
  cmd->add_option("--strategy", c.strategy, "diagonal, ldl or numeric")
      ->check(CLI::IsMember({"diagonal", "ldl", "numeric"}));
  cmd->add_flag("--json", c.json, "print a JSON document");
  if (sampling) {
    cmd->add_option("--seed", c.seed, "sample point seed");
    cmd->add_option("--points", c.points, "number of sample points")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-scale", c.tol_scale, "multiplier for every tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--timing", c.timing, "include wall-clock timing");
  }
}

Point parse_point(const std::string& text, std::size_t dim, const char* what) {
  Point p;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') {
      throw InputError(std::string(what) + ": '" + item + "' is not a number");
    }
    p.push_back(v);
  }
  if (p.size() != dim) {
    throw InputError(std::string(what) + " needs " + std::to_string(dim) + " values, got " +
                     std::to_string(p.size()));
  }
  return p;
}

Strategy pick_strategy(const Common& c, const MetricField& g) {
  return c.strategy.empty() ? default_strategy(g) : *parse_strategy(c.strategy);
}

AnalysisOptions analysis_options(const Common& c, const MetricField& g) {
  AnalysisOptions o;
  o.strategy = pick_strategy(c, g);
  o.seed = c.seed;
  o.points = c.points;
  o.tol_scale = c.tol_scale;
  return o;
}

int cmd_list(bool json) {
  if (json) {
    Json a = Json::array();
    for (const ManifoldSpec& m : catalog()) {
      Json row;
      row["name"] = m.name;
      row["description"] = m.description;
      row["coordinates"] = m.chart.coordinates;
      row["signature"] = {m.chart.positive, m.chart.negative};
      row["expected"] = m.expected ? Json(flatness_name(*m.expected)) : Json(nullptr);
      a.push_back(std::move(row));
    }
    std::cout << dump_json(a);
    return kPass;
  }
  for (const ManifoldSpec& m : catalog()) {
    std::string coords;
    for (const auto& c : m.chart.coordinates) coords += (coords.empty() ? "" : " ") + c;
    std::cout << std::left << std::setw(24) << m.name << std::setw(18) << ("(" + coords + ")")
              << m.description << "\n";
  }
  return kPass;
}

int cmd_factor(const Common& c, const std::string& point_text) {
  const ManifoldSpec spec = resolve_manifold(c.manifold);
  const MetricField g = spec.metric();
  const Strategy s = pick_strategy(c, g);
  const FormSet a = factor(g, s);
  const Point p = point_text.empty() ? domain_midpoint(g.chart)
                                     : parse_point(point_text, g.dim(), "--point");
  const ComplexMatrix v = a.at(p).transpose();
  const FactorizationReport rep = verify_factorization(a, g, std::vector<Point>{p});
  const std::size_t n = g.dim();

  if (c.json) {
    Json j;
    j["manifold"] = spec.name;
    j["strategy"] = strategy_name(s);
    j["point"] = p;
    Json rows = Json::array();
    for (std::size_t r = 0; r < n; ++r) {
      Json row = Json::array();
      for (std::size_t k = 0; k < n; ++k) row.push_back(complex_json(v(r, k)));
      rows.push_back(std::move(row));
    }
    j["v"] = std::move(rows);
    if (a.symbolic()) {
      Json forms = Json::array();
      for (std::size_t i = 0; i < a.sets; ++i) {
        Json row = Json::array();
        for (std::size_t b = 0; b < n; ++b) row.push_back(expr::to_string(a(i, b)));
        forms.push_back(std::move(row));
      }
      j["forms"] = std::move(forms);
    }
    if (!a.pivot_order.empty()) j["pivot_order"] = a.pivot_order;
    j["gauge"] = gauge_name(a.gauge);
    j["residual"] = rep.max_residual;
    j["abs_det"] = rep.min_abs_det;
    j["pass"] = rep.pass();
    std::cout << dump_json(j);
  } else {
    std::cout << spec.name << " [" << strategy_name(s) << "] at (";
    for (std::size_t k = 0; k < n; ++k) std::cout << (k ? ", " : "") << p[k];
    std::cout << ")\nV =\n";
    for (std::size_t r = 0; r < n; ++r) {
      std::cout << " ";
      for (std::size_t k = 0; k < n; ++k) {
        std::ostringstream cell;
        const auto z = v(r, k);
        cell << std::setprecision(6) << z.real();
        if (z.imag() != 0.0) cell << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
        std::cout << " " << std::setw(14) << cell.str();
      }
      std::cout << "\n";
    }
    if (a.symbolic()) {
      std::cout << "forms\n";
      for (std::size_t i = 0; i < a.sets; ++i) {
        std::cout << "  A" << i + 1 << " = (";
        for (std::size_t b = 0; b < n; ++b) std::cout << (b ? ", " : "") << expr::to_string(a(i, b));
        std::cout << ")\n";
      }
    }
    std::cout << "residual " << rep.max_residual << "   |det| " << rep.min_abs_det << "\n";
  }
  return rep.pass() ? kPass : kIdentityFailure;
}

int cmd_analyze(const Common& c, bool summary_only) {
  const ManifoldSpec spec = resolve_manifold(c.manifold);
  const AnalysisReport rep = analyze(spec, analysis_options(c, spec.metric()));
  if (c.json) {
    std::cout << dump_json(to_json(rep, c.timing));
  } else if (summary_only) {
    print_check(std::cout, rep);
  } else {
    print_report(std::cout, rep, c.timing);
  }
  return rep.all_pass() ? kPass : kIdentityFailure;
}

int cmd_classify(const Common& c) {
  const ManifoldSpec spec = resolve_manifold(c.manifold);
  AnalysisOptions o = analysis_options(c, spec.metric());
  const AnalysisReport rep = analyze(spec, o);
  const Classification& cl = rep.classification;
  if (c.json) {
    Json j = to_json(rep, false)["classification"];
    j["manifold"] = spec.name;
    j["strategy"] = strategy_name(o.strategy);
    std::cout << dump_json(j);
  } else {
    std::cout << spec.name << ": " << flatness_name(cl.verdict) << "  (" << classification_note(cl)
              << ")\n";
  }
  return cl.verdict == Flatness::Inconsistent || !rep.classification_matches() ? kIdentityFailure
                                                                                : kPass;
}

struct GeodesicArgs {
  std::string start, velocity, out;
  std::size_t steps = 1000;
  double h = 0.01;
};

int cmd_geodesic(const Common& c, const GeodesicArgs& args) {
  const ManifoldSpec spec = resolve_manifold(c.manifold);
  const MetricField g = spec.metric();
  const std::size_t n = g.dim();
  const Strategy s = pick_strategy(c, g);
  if (s == Strategy::Numeric) {
    throw InputError("the factored geodesic form needs symbolic forms; use diagonal or ldl");
  }
  const Point x0 = args.start.empty() ? domain_midpoint(g.chart)
                                      : parse_point(args.start, n, "--start");
  const Point u0 = args.velocity.empty() ? default_geodesic_velocity(g.chart)
                                         : parse_point(args.velocity, n, "--velocity");
  const FormSet a = factor(g, s);
  GeometryBuilder geo(g, invert_metric(g));
  const Tensor f = geo.compute_F(a);
  const GeodesicComparison cmp =
      compare_geodesics(geo, a, f, geo.christoffel_classical(), x0, u0, {args.steps, args.h});

  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) throw InputError("cannot write '" + args.out + "'");
  }
  std::ostream& csv = args.out.empty() ? std::cout : file;
  csv << "s";
  for (const char* route : {"classical", "factored"}) {
    for (const auto& name : g.chart.coordinates) csv << "," << route << "_" << name;
    for (const auto& name : g.chart.coordinates) csv << "," << route << "_u_" << name;
    csv << "," << route << "_norm";
  }
  csv << "\n" << std::setprecision(17);
  const std::size_t rows = std::min(cmp.classical.s.size(), cmp.factored.s.size());
  for (std::size_t k = 0; k < rows; ++k) {
    csv << cmp.classical.s[k];
    for (const Trajectory* t : {&cmp.classical, &cmp.factored}) {
      for (double x : t->x[k]) csv << "," << x;
      for (double u : t->u[k]) csv << "," << u;
      csv << "," << t->norm[k];
    }
    csv << "\n";
  }

  const double tol = 1e-6 * c.tol_scale;
  const bool ok = cmp.max_divergence <= tol && cmp.norm_drift <= tol;
  if (!args.out.empty() || c.json) {
    if (c.json) {
      Json j;
      j["manifold"] = spec.name;
      j["strategy"] = strategy_name(s);
      j["steps_taken"] = rows - 1;
      j["left_domain"] = cmp.classical.left_domain || cmp.factored.left_domain;
      j["max_divergence"] = cmp.max_divergence;
      j["norm_drift"] = cmp.norm_drift;
      j["pass"] = ok;
      (args.out.empty() ? std::cerr : std::cout) << dump_json(j);
    } else {
      std::cout << spec.name << ": " << rows - 1 << " steps, divergence " << cmp.max_divergence
                << ", norm drift " << cmp.norm_drift << (ok ? "" : "  FAIL") << "\n";
    }
  }
  return ok ? kPass : kIdentityFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric factorization and curvature analysis"};
  app.require_subcommand(1);

  Common common;
  std::string point;
  GeodesicArgs geo;

  auto* list = app.add_subcommand("list", "list the built-in metrics");
  list->add_flag("--json", common.json, "print a JSON document");
  auto* factor_cmd = app.add_subcommand("factor", "factor the metric at one point");
  add_common(factor_cmd, common, false);
  factor_cmd->add_option("--point", point, "comma-separated coordinates (default: domain midpoint)");
  auto* analyze_cmd = app.add_subcommand("analyze", "run the full identity suite");
  add_common(analyze_cmd, common, true);
  auto* check_cmd = app.add_subcommand("check", "run the identity suite, print failures only");
  add_common(check_cmd, common, true);
  auto* classify_cmd = app.add_subcommand("classify", "classify flatness from F and R");
  add_common(classify_cmd, common, true);
  auto* geodesic_cmd = app.add_subcommand("geodesic", "integrate a geodesic along both routes");
  // -h would collide with --h.
  geodesic_cmd->set_help_flag("--help", "print this help message and exit");
  add_common(geodesic_cmd, common, false);
  geodesic_cmd->add_option("--start", geo.start, "comma-separated start point");
  geodesic_cmd->add_option("--velocity", geo.velocity, "comma-separated initial velocity");
  geodesic_cmd->add_option("--steps", geo.steps, "RK4 steps")->check(CLI::PositiveNumber);
  geodesic_cmd->add_option("--h", geo.h, "step size")->check(CLI::PositiveNumber);
  geodesic_cmd->add_option("--out", geo.out, "CSV output path (default: stdout)");
  geodesic_cmd->add_option("--tol-scale", common.tol_scale, "multiplier for the tolerances")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (list->parsed()) return cmd_list(common.json);
    if (factor_cmd->parsed()) return cmd_factor(common, point);
    if (analyze_cmd->parsed()) return cmd_analyze(common, false);
    if (check_cmd->parsed()) return cmd_analyze(common, true);
    if (classify_cmd->parsed()) return cmd_classify(common);
    if (geodesic_cmd->parsed()) return cmd_geodesic(common, geo);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const UnknownSymbolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "numeric fault: " << e.what() << "\n";
    return kNumericFault;
  }
  return kInputError;
}
