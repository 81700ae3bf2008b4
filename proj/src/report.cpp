#include "phlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "phlab/config.hpp"

namespace phlab {

Json real(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format_csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_real(v);
}

namespace {

void write(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        write(it.value(), out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += flat ? "[" : "[\n";
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",\n";
        first = false;
        if (!flat) out += pad;
        write(e, out, indent + 2);
      }
      out += flat ? "]" : "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += std::isnan(v) ? "null" : (v > 0 ? "\"inf\"" : "\"-inf\"");
        return;
      }
      std::string s = format_real(v);
      if (s.find_first_of(".eE") == std::string::npos) s += ".0";
      out += s;
      return;
    }
    default:
      out += j.dump();
  }
}

Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

Json point(const TorusPoint& p) {
  Json a = Json::array();
  for (int i = 0; i < p.dim(); ++i) a.push_back(real(p[i]));
  return a;
}

Json vec(const Vec& v) {
  Json a = Json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(real(v[i]));
  return a;
}

}  // namespace

std::string write_json(const Json& j) {
  std::string out;
  write(j, out, 0);
  out += "\n";
  return out;
}

Json to_json(const SystemSpec& sys) {
  Json j;
  j["kind"] = kind_name(sys.kind());
  j["dimension"] = sys.dim();
  Json m = Json::array();
  for (int r = 0; r < sys.dim(); ++r) {
    Json row = Json::array();
    for (int c = 0; c < sys.dim(); ++c) row.push_back(sys.matrix()(r, c));
    m.push_back(row);
  }
  j["matrix"] = m;
  j["degree"] = sys.degree();
  Json eig = Json::array();
  for (const auto& e : sys.eigendata()) eig.push_back(real(e.value));
  j["eigenvalues"] = eig;
  if (sys.kind() == SystemKind::ProductRotation) j["rotation"] = real(sys.rotation());
  if (sys.mane()) {
    j["q"] = point(sys.mane()->q);
    j["rho"] = real(sys.mane()->rho);
    j["rho_inner"] = real(sys.mane()->rho_inner);
    j["strength"] = real(sys.mane()->strength);
  }
  return j;
}

Json to_json(const PressureEstimate& e) {
  Json j;
  j["value"] = real(e.value);
  j["error_bar"] = real(e.error_bar);
  j["method"] = e.method;
  j["counting"] = e.counting;
  j["delta"] = real(e.delta);
  j["eps"] = real(e.eps);
  j["n_min"] = e.n_min;
  j["n_max"] = e.n_max;
  j["sample_size"] = e.sample_size;
  j["counts_monotone"] = e.counts_monotone;
  if (e.method == "stable-branches") j["components"] = e.components;
  j["seed"] = e.seed;
  Json rows = Json::array();
  for (const auto& r : e.per_n)
    rows.push_back({{"n", r.n}, {"count", real(r.count)}, {"logLambda", real(r.log_lambda)},
                    {"slope_so_far", real(r.slope_so_far)}});
  j["per_n"] = rows;
  return j;
}

Json to_json(const BadPressureReport& r) {
  Json j;
  j["full"] = to_json(r.full);
  j["bad"] = to_json(r.bad);
  j["gap"] = real(r.gap);
  j["gap_per_n"] = reals(r.gap_per_n);
  j["empty_n"] = r.empty_n;
  j["bad_candidates"] = r.bad_candidates;
  return j;
}

Json to_json(const RScanReport& r) {
  Json j;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"r", real(row.r)},
                    {"fraction_good", real(row.fraction_good)},
                    {"bad_mass", real(row.bad_mass)},
                    {"bad_pressure", real(row.bad_pressure)},
                    {"full_pressure", real(row.full_pressure)},
                    {"gap", real(row.gap)}});
  j["rows"] = rows;
  j["histogram"] = {{"edges", reals(r.hist_edges)}, {"counts", r.hist_counts}};
  j["center_exponents"] = reals(r.center_exponents);
  return j;
}

Json to_json(const GlueReport& r) {
  Json j;
  j["delta"] = real(r.delta);
  j["T_max"] = r.T_max;
  j["T_analytic"] = r.T_analytic;
  j["L"] = real(r.L);
  Json segs = Json::array();
  for (const auto& s : r.segments) segs.push_back({{"start", point(s.history.head())}, {"length", s.length}});
  j["segments"] = segs;
  j["gluing_times"] = r.gluing_times;
  j["block_starts"] = r.block_starts;
  j["block_errors"] = reals(r.block_errors);
  j["max_shadow_error"] = real(r.max_shadow_error);
  j["consistency"] = real(r.consistency);
  Json js = Json::array();
  for (const auto& x : r.junctions)
    js.push_back({{"T", x.T},
                  {"sigma", real(x.sigma)},
                  {"u", vec(x.u)},
                  {"w", vec(x.w)},
                  {"cs", {real(x.cs_a), real(x.cs_b)}},
                  {"cloud_distance", real(x.cloud_distance)}});
  j["junctions"] = js;
  j["orbit_length"] = r.orbit.size();
  if (!r.orbit.empty()) j["glued_start"] = point(r.orbit.front());
  return j;
}

Json to_json(const ExpansivityReport& r) {
  Json j;
  j["eps"] = real(r.eps);
  j["window"] = r.window;
  j["tolerance"] = real(r.tolerance);
  j["fraction_nonexpansive"] = real(r.fraction);
  j["samples"] = r.diameters.size();
  j["diameters"] = reals(r.diameters);
  j["center_exponents"] = reals(r.center_exponents);
  return j;
}

Json to_json(const Certificate& c) {
  Json j;
  j["system"] = c.system;
  j["potential"] = c.potential;
  const auto& o = c.options;
  j["scales"] = {{"r", real(o.r)},
                 {"delta", real(o.delta)},
                 {"eps", real(o.eps)},
                 {"pressure_delta", real(o.pressure_delta)},
                 {"n_min", o.n_min},
                 {"n_max", o.n_max}};
  j["budgets"] = {{"glue_pairs", o.glue_pairs},
                  {"distortion_segments", o.distortion_segments},
                  {"segment_length", o.segment_length},
                  {"expansivity_samples", o.expansivity_samples},
                  {"window", o.window}};
  j["seed"] = o.seed;
  Json checks = Json::array();
  for (const auto& k : c.checks) {
    Json cj;
    cj["id"] = k.id;
    cj["name"] = k.name;
    cj["passed"] = k.passed;
    cj["informational"] = k.id == 0;
    cj["error"] = k.error.empty() ? Json(nullptr) : Json(k.error);
    cj["message"] = k.message;
    Json vals = Json::object();
    for (const auto& [name, v] : k.values) vals[name] = real(v);
    cj["values"] = vals;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["all_passed"] = c.all_passed;
  j["note"] = c.note;
  return j;
}

std::string per_n_csv(const PressureEstimate& e) {
  std::ostringstream os;
  os << "n,count,logLambda,slope_so_far\n";
  for (const auto& r : e.per_n)
    os << r.n << ',' << format_csv_real(r.count) << ',' << format_csv_real(r.log_lambda) << ','
       << format_csv_real(r.slope_so_far) << '\n';
  return os.str();
}

std::string r_scan_csv(const RScanReport& r) {
  std::ostringstream os;
  os << "r,fraction_good,bad_pressure,full_pressure,gap\n";
  for (const auto& row : r.rows)
    os << format_csv_real(row.r) << ',' << format_csv_real(row.fraction_good) << ','
       << format_csv_real(row.bad_pressure) << ',' << format_csv_real(row.full_pressure) << ','
       << format_csv_real(row.gap) << '\n';
  return os.str();
}

std::string expansivity_csv(const ExpansivityReport& r) {
  std::ostringstream os;
  os << "sample,diameter,center_exponent\n";
  for (std::size_t i = 0; i < r.diameters.size(); ++i)
    os << i << ',' << format_csv_real(r.diameters[i]) << ',' << format_csv_real(r.center_exponents[i]) << '\n';
  return os.str();
}

std::string glue_trace_text(const GlueReport& r) {
  std::ostringstream os;
  os << "# phlab glue trace v1: index then coordinates of the refined orbit\n";
  os << "blocks";
  for (int s : r.block_starts) os << ' ' << s;
  os << '\n';
  for (std::size_t i = 0; i < r.orbit.size(); ++i) {
    os << i;
    for (int k = 0; k < r.orbit[i].dim(); ++k) os << ' ' << format_real(r.orbit[i][k]);
    os << '\n';
  }
  return os.str();
}

}  // namespace phlab
