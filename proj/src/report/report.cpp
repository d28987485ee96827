#include "takagi/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace takagi {

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

void write(std::string& out, const Json& j, int indent) {
  const std::string pad(2 * (indent + 1), ' ');
  const std::string close(2 * indent, ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write(out, value, indent + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::none_of(j.begin(), j.end(),
                                     [](const Json& x) { return x.is_structured(); });
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const Json& x : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write(out, x, indent + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case Json::value_t::number_float: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      out += buf;
      return;
    }
    default: out += j.dump();
  }
}

std::string sci(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

}  // namespace

Json complex_json(expr::Complex z) { return Json::array({number(z.real()), number(z.imag())}); }

std::string dump_json(const Json& j) {
  std::string out;
  write(out, j, 0);
  out += "\n";
  return out;
}

std::string classification_note(const Classification& c) {
  switch (c.verdict) {
    case Flatness::ClosedFlat: return "forms closed and Riemann tensor vanishes; exactness undetermined";
    case Flatness::Curved:
      return c.riemann_vanishes
                 ? "forms not closed although the Riemann tensor vanishes; closed forms are "
                   "sufficient, not necessary, for flatness"
                 : "forms not closed and the Riemann tensor does not vanish";
    case Flatness::Inconsistent:
      return "forms closed but the Riemann tensor does not vanish; factorization or numerical fault";
    case Flatness::Undetermined: return "no symbolic forms, closedness not tested";
  }
  return {};
}

Json to_json(const AnalysisReport& r, bool include_timing) {
  Json j;
  j["manifold"] = r.manifold;
  j["description"] = r.description;
  j["coordinates"] = r.coordinates;
  j["strategy"] = strategy_name(r.strategy);
  j["seed"] = r.seed;
  j["tol_scale"] = number(r.tol_scale);
  Json pts = Json::array();
  for (const Point& p : r.points) pts.push_back(numbers(p));
  j["sample_points"] = std::move(pts);

  Json ids = Json::array();
  for (const IdentityResult& x : r.identities) {
    Json row;
    row["name"] = x.name;
    row["residual"] = number(x.residual);
    row["tolerance"] = number(x.tolerance);
    row["bound"] = x.lower_bound ? "lower" : "upper";
    row["status"] = status_name(x.status);
    row["note"] = x.note;
    ids.push_back(std::move(row));
  }
  j["identities"] = std::move(ids);

  Json tensors = Json::array();
  for (const TensorSummary& t : r.tensors) {
    Json row;
    row["name"] = t.name;
    row["rank"] = t.rank;
    row["set_extent"] = t.set_extent;
    row["components"] = t.components;
    row["nonzero"] = t.nonzero;
    row["max_abs"] = number(t.max_abs);
    row["max_imag"] = number(t.max_imag);
    tensors.push_back(std::move(row));
  }
  j["tensors"] = std::move(tensors);

  const Classification& c = r.classification;
  Json cls;
  cls["verdict"] = flatness_name(c.verdict);
  cls["expected"] = r.expected ? Json(flatness_name(*r.expected)) : Json(nullptr);
  cls["matches_expected"] = r.classification_matches();
  cls["max_f"] = c.verdict == Flatness::Undetermined ? Json(nullptr) : number(c.max_f);
  cls["max_riemann"] = number(c.max_riemann);
  cls["threshold"] = number(c.threshold);
  cls["forms_closed"] = c.forms_closed;
  cls["riemann_vanishes"] = c.riemann_vanishes;
  cls["note"] = classification_note(c);
  j["classification"] = std::move(cls);

  j["decomposition_residual"] = numbers(r.decomposition_residual);

  Json killing = Json::array();
  for (const KillingForm& k : r.killing) {
    Json row;
    row["set"] = k.set + 1;
    row["max_f"] = number(k.max_f);
    row["max_s"] = number(k.max_s);
    row["max_lie"] = number(k.max_lie);
    row["closed"] = k.closed;
    row["killing"] = k.killing;
    killing.push_back(std::move(row));
  }
  j["killing"] = std::move(killing);

  if (r.geodesic) {
    const GeodesicSummary& g = *r.geodesic;
    Json geo;
    geo["start"] = numbers(g.start);
    geo["velocity"] = numbers(g.velocity);
    geo["steps"] = g.options.steps;
    geo["h"] = number(g.options.h);
    geo["steps_taken"] = g.steps_taken;
    geo["left_domain"] = g.left_domain;
    geo["max_divergence"] = number(g.max_divergence);
    geo["norm_drift"] = number(g.norm_drift);
    geo["max_discarded_imag"] = number(g.max_discarded_imag);
    j["geodesic"] = std::move(geo);
  } else {
    j["geodesic"] = nullptr;
  }
  j["all_pass"] = r.all_pass();
  if (include_timing) {
    Json t;
    t["simd"] = r.isa;
    t["symbolic_seconds"] = number(r.timing.symbolic_seconds);
    t["evaluation_seconds"] = number(r.timing.evaluation_seconds);
    t["geodesic_seconds"] = number(r.timing.geodesic_seconds);
    j["timing"] = std::move(t);
  }
  return j;
}

void print_report(std::ostream& out, const AnalysisReport& r, bool include_timing) {
  const Classification& c = r.classification;
  out << "manifold  " << r.manifold;
  if (!r.description.empty()) out << "  (" << r.description << ")";
  out << "\nstrategy  " << strategy_name(r.strategy) << "   seed " << r.seed << "   points "
      << r.points.size() << "   tol-scale " << r.tol_scale << "\n";
  out << "verdict   " << flatness_name(c.verdict);
  if (r.expected) out << "  (expected " << flatness_name(*r.expected) << ")";
  out << "\n          " << classification_note(c) << "\n";
  if (c.verdict != Flatness::Undetermined) out << "          max|F| " << sci(c.max_f);
  else out << "         ";
  out << "  max|R| " << sci(c.max_riemann) << "\n\n";

  out << std::left << std::setw(40) << "identity" << std::setw(12) << "residual"
      << std::setw(12) << "tolerance" << "status\n";
  for (const IdentityResult& x : r.identities) {
    out << std::setw(40) << x.name;
    if (x.status == Status::Skipped) {
      out << std::setw(12) << "-" << std::setw(12) << "-";
    } else {
      out << std::setw(12) << sci(x.residual)
          << std::setw(12) << (x.status == Status::Reported ? "-" : (x.lower_bound ? ">" : "") + sci(x.tolerance));
    }
    out << status_name(x.status);
    if (x.status == Status::Skipped && !x.note.empty()) out << "  (" << x.note << ")";
    out << "\n";
  }

  out << "\n" << std::setw(26) << "tensor" << std::setw(6) << "rank" << std::setw(5) << "set"
      << std::setw(12) << "nonzero" << std::setw(12) << "max|.|" << "max|im|\n";
  for (const TensorSummary& t : r.tensors) {
    out << std::setw(26) << t.name << std::setw(6) << t.rank << std::setw(5) << t.set_extent
        << std::setw(12) << (std::to_string(t.nonzero) + "/" + std::to_string(t.components))
        << std::setw(12) << sci(t.max_abs) << sci(t.max_imag) << "\n";
  }

  if (!r.decomposition_residual.empty()) {
    out << "\ndecomposition residual per point\n";
    for (std::size_t k = 0; k < r.decomposition_residual.size(); ++k) {
      out << "  " << std::setw(4) << k << sci(r.decomposition_residual[k]) << "\n";
    }
  }
  if (!r.killing.empty()) {
    out << "\n" << std::setw(6) << "form" << std::setw(12) << "max|F|" << std::setw(12)
        << "max|S|" << std::setw(12) << "max|L g|" << "\n";
    for (const KillingForm& k : r.killing) {
      out << std::setw(6) << ("A" + std::to_string(k.set + 1)) << std::setw(12) << sci(k.max_f)
          << std::setw(12) << sci(k.max_s) << std::setw(12) << sci(k.max_lie)
          << (k.closed ? "closed" : "") << (k.killing ? " killing" : "") << "\n";
    }
  }
  if (r.geodesic) {
    const GeodesicSummary& g = *r.geodesic;
    out << "\ngeodesic  " << g.steps_taken << "/" << g.options.steps << " steps, h " << g.options.h
        << (g.left_domain ? ", left the domain" : "") << "\n          divergence "
        << sci(g.max_divergence) << "   norm drift " << sci(g.norm_drift) << "\n";
  }
  if (include_timing) {
    out << "\ntiming    symbolic " << r.timing.symbolic_seconds << " s   evaluation "
        << r.timing.evaluation_seconds << " s   geodesic " << r.timing.geodesic_seconds
        << " s   simd " << r.isa << "\n";
  }
  out << "\n" << (r.all_pass() ? "PASS" : "FAIL") << "\n";
  out << std::right;
}

void print_check(std::ostream& out, const AnalysisReport& r) {
  std::size_t passed = 0, asserted = 0;
  for (const IdentityResult& x : r.identities) {
    if (x.status == Status::Pass || x.status == Status::Fail) ++asserted;
    if (x.status == Status::Pass) ++passed;
    if (x.status == Status::Fail) {
      out << "FAIL  " << x.name << "  residual " << sci(x.residual) << "  tolerance "
          << sci(x.tolerance) << "\n";
    }
  }
  if (!r.classification_matches()) {
    out << "FAIL  classification " << flatness_name(r.classification.verdict) << ", expected "
        << flatness_name(*r.expected) << "\n";
  }
  out << r.manifold << " [" << strategy_name(r.strategy) << "]: " << passed << "/" << asserted
      << " identities pass, verdict " << flatness_name(r.classification.verdict) << ": "
      << (r.all_pass() ? "PASS" : "FAIL") << "\n";
}

}  // namespace takagi
