#include "phlab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <random>

#include "phlab/config.hpp"
#include "phlab/error.hpp"
#include "phlab/parallel.hpp"
#include "phlab/report.hpp"

namespace phlab {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"entropy", "pressure", "u-pressure", "s-pressure",
                                              "gap",     "decompose", "glue",      "gamma",
                                              "certify", "scan",      "example-mane"};
  return names;
}

double eigen_entropy(const std::vector<double>& ev) {
  double h = 0.0;
  for (double l : ev)
    if (std::fabs(l) > 1.0) h += std::log(std::fabs(l));
  return h;
}

double eigen_unstable_entropy(const std::vector<double>& ev, bool has_center) {
  double h = 0.0;
  for (std::size_t i = 0; i < ev.size(); ++i)
    if (!(has_center && i == 1) && std::fabs(ev[i]) > 1.0) h += std::log(std::fabs(ev[i]));
  return h;
}

double eigen_stable_entropy(const std::vector<double>& ev, double det, bool has_center) {
  double h = std::log(std::fabs(det));
  for (std::size_t i = 0; i < ev.size(); ++i)
    if (!(has_center && i == 1) && std::fabs(ev[i]) < 1.0) h -= std::log(std::fabs(ev[i]));
  return h;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Json reals_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

double pick(double v, double dflt) { return std::isnan(v) ? dflt : v; }
int pick(int v, int dflt) { return v < 0 ? dflt : v; }

void require_positive(const char* name, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorCode::ConfigError, std::string(name) + " must be positive");
}

struct Context {
  const RunConfig& cfg;
  const SystemSpec& sys;
  const Potential& phi;
  Json params = Json::object();
  Json result = Json::object();
  std::vector<Artifact> extra;
  std::vector<std::string> warnings;

  Context(const RunConfig& c, const SystemSpec& s, const Potential& p) : cfg(c), sys(s), phi(p) {}
  bool eigen() const { return cfg.mode == "eigen-oracle"; }
};

std::vector<double> eigenvalues(const SystemSpec& sys) {
  std::vector<double> ev;
  for (const auto& e : sys.eigendata()) ev.push_back(e.value);
  return ev;
}

void require_eigen_capable(const Context& c, bool zero_potential_only = true) {
  if (c.sys.kind() == SystemKind::Mane)
    fail(ErrorCode::ConfigError, "eigen-oracle mode needs a linear or product system");
  if (zero_potential_only && c.phi.name() != "zero")
    fail(ErrorCode::ConfigError, "eigen-oracle mode supports the zero potential only");
}

struct Range {
  int n_min, n_max;
};

Range range(const RunConfig& cfg, int lo, int hi) {
  Range r{pick(cfg.n_min, lo), pick(cfg.n_max, hi)};
  if (r.n_min < 1 || r.n_max < r.n_min) fail(ErrorCode::ConfigError, "need 1 <= n_min <= n_max");
  return r;
}

OrbitHistory seeded_history(const SystemSpec& sys, std::uint64_t seed, int depth) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vec x(sys.dim());
  for (int i = 0; i < sys.dim(); ++i) x[i] = ud(rng);
  return extend_history_one(sys, TorusPoint(x), depth, BranchPolicy::random(rng()));
}

void add_estimate(Context& c, const std::string& stem, const PressureEstimate& e) {
  c.extra.push_back({stem + "_per_n.csv", per_n_csv(e)});
}

void cmd_pressure(Context& c, bool entropy) {
  const Potential phi = entropy ? Potential::zero() : c.phi;
  if (c.eigen()) {
    require_eigen_capable(c, !entropy);
    const double h = eigen_entropy(eigenvalues(c.sys));
    c.result = {{"value", real(h)}, {"method", "eigen-oracle"}};
    return;
  }
  const double delta = pick(c.cfg.delta, 0.1);
  require_positive("delta", delta);
  const Range rg = range(c.cfg, 2, 6);
  PressureOptions po;
  po.seed = c.cfg.seed;
  const auto est = pressure_estimate(c.sys, phi, delta, rg.n_min, rg.n_max, po);
  c.params = {{"delta", real(delta)}, {"n_min", rg.n_min}, {"n_max", rg.n_max}};
  c.result = to_json(est);
  add_estimate(c, entropy ? "entropy" : "pressure", est);
}

struct LeafRun {
  PressureEstimate est;
  double delta, eps;
  Range rg;
  int depth;
};

LeafRun unstable_run(Context& c, const Potential& phi) {
  LeafRun r{{}, pick(c.cfg.delta, 1e-2), pick(c.cfg.eps, 1e-3), range(c.cfg, 3, 7), pick(c.cfg.depth, 40)};
  require_positive("delta", r.delta);
  require_positive("eps", r.eps);
  LeafOptions lo;
  lo.seed = c.cfg.seed;
  const auto h = seeded_history(c.sys, c.cfg.seed, r.depth);
  r.est = unstable_pressure_estimate(c.sys, phi, h, r.delta, r.eps, r.rg.n_min, r.rg.n_max, lo);
  return r;
}

LeafRun stable_run(Context& c, const Potential& phi) {
  LeafRun r{{}, pick(c.cfg.delta, 1e-2), pick(c.cfg.eps, 1e-3), range(c.cfg, 4, 8), pick(c.cfg.depth, 40)};
  require_positive("delta", r.delta);
  require_positive("eps", r.eps);
  LeafOptions lo;
  lo.seed = c.cfg.seed;
  const auto h = seeded_history(c.sys, c.cfg.seed, 0);
  r.est = stable_pressure_estimate(c.sys, phi, h.head(), r.delta, r.eps, r.rg.n_min, r.rg.n_max, lo);
  return r;
}

Json leaf_params(const LeafRun& r) {
  return {{"delta", real(r.delta)}, {"eps", real(r.eps)}, {"n_min", r.rg.n_min}, {"n_max", r.rg.n_max},
          {"depth", r.depth}};
}

void cmd_leaf(Context& c, bool unstable) {
  if (c.eigen()) {
    require_eigen_capable(c);
    const auto ev = eigenvalues(c.sys);
    const double h = unstable ? eigen_unstable_entropy(ev, c.sys.has_center())
                              : eigen_stable_entropy(ev, static_cast<double>(c.sys.det()), c.sys.has_center());
    c.result = {{"value", real(h)}, {"method", "eigen-oracle"}};
    return;
  }
  const LeafRun r = unstable ? unstable_run(c, c.phi) : stable_run(c, c.phi);
  c.params = leaf_params(r);
  c.result = to_json(r.est);
  add_estimate(c, unstable ? "u_pressure" : "s_pressure", r.est);
}

// P^u - P^s from the closed forms. The eigenvalue product equals det, so with a center the
// difference reduces to -log|lambda_c|.
double eigen_gap(const std::vector<double>& ev, double det, bool has_center) {
  if (has_center) return 0.0 - std::log(std::fabs(ev[1]));  // +0 rather than -0 when lambda_c = 1
  return eigen_unstable_entropy(ev, false) - eigen_stable_entropy(ev, det, false);
}

struct GapValue {
  double pu, ps, gap, error;
};

GapValue sets_gap(Context& c, const Potential& phi, const SystemSpec& sys, Json* params) {
  Context sub{c.cfg, sys, phi};
  const LeafRun u = unstable_run(sub, phi);
  const LeafRun s = stable_run(sub, phi);
  if (params) *params = {{"unstable", leaf_params(u)}, {"stable", leaf_params(s)}};
  return {u.est.value, s.est.value, u.est.value - s.est.value, u.est.error_bar + s.est.error_bar};
}

void cmd_gap(Context& c) {
  if (c.eigen()) {
    require_eigen_capable(c);
    const auto ev = eigenvalues(c.sys);
    const double det = static_cast<double>(c.sys.det());
    c.result = {{"unstable", real(eigen_unstable_entropy(ev, c.sys.has_center()))},
                {"stable", real(eigen_stable_entropy(ev, det, c.sys.has_center()))},
                {"gap", real(eigen_gap(ev, det, c.sys.has_center()))},
                {"method", "eigen-oracle"}};
    return;
  }
  Json params;
  const GapValue g = sets_gap(c, c.phi, c.sys, &params);
  c.params = params;
  c.result = {{"unstable", real(g.pu)}, {"stable", real(g.ps)}, {"gap", real(g.gap)},
              {"error_bar", real(g.error)}, {"method", "leaf-sets"}};
  if (std::fabs(g.gap) <= g.error)
    c.warnings.push_back("gap is within the combined error bars; its sign is not resolved in sets mode");
}

void cmd_decompose(Context& c) {
  RScanOptions o;
  o.sampling.seed = c.cfg.seed;
  o.sampling.count = pick(c.cfg.samples, 200);
  o.sampling.depth = pick(c.cfg.depth, 20);
  o.delta = pick(c.cfg.pressure_delta, pick(c.cfg.delta, 0.2));
  require_positive("delta", o.delta);
  const Range rg = range(c.cfg, 1, 2);
  o.n_min = rg.n_min;
  o.n_max = rg.n_max;
  o.bad.pressure.seed = c.cfg.seed;
  std::vector<double> rs = c.cfg.r_list.empty() ? std::vector<double>{0.005, 0.01, 0.02, 0.05} : c.cfg.r_list;
  for (double r : rs) require_positive("r", r);
  const auto rep = r_scan(c.sys, c.phi, rs, o);
  c.params = {{"r", reals_json(rs)}, {"delta", real(o.delta)}, {"n_min", o.n_min}, {"n_max", o.n_max},
              {"samples", o.sampling.count}, {"depth", o.sampling.depth}};
  c.result = to_json(rep);
  c.extra.push_back({"decompose.csv", r_scan_csv(rep)});
}

void cmd_glue(Context& c) {
  const double delta = pick(c.cfg.delta, 1e-3);
  require_positive("delta", delta);
  const double r = pick(c.cfg.r, 0.01);
  require_positive("r", r);
  const int pairs = pick(c.cfg.pairs, 1);
  const int len = pick(c.cfg.segment_length, 20);
  if (pairs < 1 || len < 1) fail(ErrorCode::ConfigError, "pairs and segment_length must be >= 1");
  SegmentSampling ss;
  ss.count = 8 * pairs;
  ss.min_length = std::min(4, len);
  ss.max_length = len;
  ss.depth = pick(c.cfg.depth, 32);
  ss.seed = c.cfg.seed;
  std::vector<OrbitSegment> good;
  for (auto& s : sample_segments(c.sys, ss))
    if (!c.sys.has_center() || is_good(c.sys, s.history, s.length, {r})) good.push_back(s);
  if (static_cast<int>(good.size()) < 2 * pairs)
    fail(ErrorCode::NoGoodSegments, "only " + std::to_string(good.size()) + " good segments among " +
                                        std::to_string(ss.count) + " samples at r = " + format_real(r));
  GlueOptions go;
  go.params.r = r;
  go.seed = c.cfg.seed;
  Json reports = Json::array();
  std::string trace;
  for (int p = 0; p < pairs; ++p) {
    const auto rep = glue_segments(c.sys, {good[static_cast<std::size_t>(2 * p)], good[static_cast<std::size_t>(2 * p + 1)]},
                                   delta, 0, go);
    reports.push_back(to_json(rep));
    trace += "# pair " + std::to_string(p) + "\n" + glue_trace_text(rep);
  }
  c.params = {{"delta", real(delta)}, {"r", real(r)}, {"pairs", pairs}, {"segment_length", len}, {"depth", ss.depth}};
  c.result = {{"reports", reports}};
  c.extra.push_back({"glue_trace.txt", trace});
}

void cmd_gamma(Context& c) {
  const double eps = pick(c.cfg.eps, 1e-2);
  require_positive("eps", eps);
  const int window = pick(c.cfg.window, 20);
  SegmentSampling ss;
  ss.count = pick(c.cfg.samples, 32);
  ss.min_length = ss.max_length = 1;
  ss.depth = std::max(window, pick(c.cfg.depth, window));
  ss.seed = c.cfg.seed;
  std::vector<OrbitHistory> hs;
  for (auto& s : sample_segments(c.sys, ss)) hs.push_back(s.history);
  GammaOptions g;
  g.seed = c.cfg.seed;
  const auto rep = expansivity_diagnostic(c.sys, hs, eps, window, 0.0, g);
  c.params = {{"eps", real(eps)}, {"window", window}, {"samples", ss.count}, {"depth", ss.depth}};
  c.result = to_json(rep);
  c.extra.push_back({"gamma.csv", expansivity_csv(rep)});
}

void cmd_certify(Context& c) {
  CertificateOptions o;
  o.r = pick(c.cfg.r, o.r);
  o.delta = pick(c.cfg.delta, o.delta);
  o.eps = pick(c.cfg.eps, o.eps);
  o.pressure_delta = pick(c.cfg.pressure_delta, o.pressure_delta);
  o.n_min = pick(c.cfg.n_min, o.n_min);
  o.n_max = pick(c.cfg.n_max, o.n_max);
  o.glue_pairs = pick(c.cfg.pairs, o.glue_pairs);
  o.segment_length = pick(c.cfg.segment_length, o.segment_length);
  o.expansivity_samples = pick(c.cfg.samples, o.expansivity_samples);
  o.window = pick(c.cfg.window, o.window);
  o.seed = c.cfg.seed;
  for (auto [name, v] : {std::pair{"r", o.r}, {"delta", o.delta}, {"eps", o.eps}, {"pressure_delta", o.pressure_delta}})
    require_positive(name, v);
  if (o.eps < 2000.0 * o.delta) c.warnings.push_back("eps < 2000 delta: the scale relation of the criterion is violated");
  const auto cert = certificate(c.sys, c.phi, o);
  c.result = to_json(cert);
}

// Matrix jitter keeps the sign pattern of the spectrum and |lambda| on the same side of 1.
bool same_shape(const Eigendata& a, const Eigendata& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((std::fabs(a[i].value) > 1.0) != (std::fabs(b[i].value) > 1.0)) return false;
    if ((a[i].value > 0.0) != (b[i].value > 0.0)) return false;
  }
  return true;
}

void cmd_scan(Context& c) {
  const int draws = pick(c.cfg.draws, 100);
  if (draws < 1) fail(ErrorCode::ConfigError, "draws must be >= 1");
  std::mt19937_64 rng(c.cfg.seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0), u01(0.0, 1.0);
  std::string csv = "draw,matrix_jitter,strength,potential_jitter,gap,gap_lower,gap_upper,flip\n";
  int flips = 0, rejected = 0;
  double min_lower = kInf;
  double base_gap;
  Json params;
  if (c.eigen()) {
    require_eigen_capable(c);
    const Mat base = c.sys.matrix_real();
    const auto base_eig = c.sys.eigendata();
    base_gap = eigen_gap(eigenvalues(c.sys), static_cast<double>(c.sys.det()), c.sys.has_center());
    const double jitter = pick(c.cfg.jitter, 1e-3);
    const double a = pick(c.cfg.potential_jitter, base_gap / 4.0);
    if (!(jitter >= 0.0)) fail(ErrorCode::ConfigError, "jitter must be >= 0");
    if (!(a >= 0.0) || !(a < std::fabs(base_gap) / 2.0))
      fail(ErrorCode::ConfigError, "potential jitter must satisfy 0 <= a < gap / 2");
    params = {{"draws", draws}, {"matrix_jitter", real(jitter)}, {"potential_jitter", real(a)},
              {"base_gap", real(base_gap)}};
    for (int d = 0; d < draws; ++d) {
      Mat m = base;
      Eigendata eig;
      double size = 0.0;
      for (int attempt = 0;; ++attempt) {
        if (attempt == 1000) fail(ErrorCode::SpectrumViolation, "matrix jitter keeps leaving the spectral shape");
        m = base;
        size = 0.0;
        for (int i = 0; i < m.rows(); ++i)
          for (int j = 0; j < m.cols(); ++j) {
            const double e = jitter * ud(rng);
            m(i, j) += e;
            size = std::max(size, std::fabs(e));
          }
        try {
          eig = real_eigendata(m);
        } catch (const Error&) {
          ++rejected;
          continue;
        }
        if (same_shape(base_eig, eig)) break;
        ++rejected;
      }
      std::vector<double> ev;
      for (const auto& e : eig) ev.push_back(e.value);
      const double g = eigen_gap(ev, m.determinant(), c.sys.has_center());
      // |P(psi) - P(phi)| <= sup|psi - phi| for both leaf pressures.
      const double pj = a * u01(rng);
      const double lo = g - 2.0 * pj, hi = g + 2.0 * pj;
      const bool flip = (lo > 0.0) != (base_gap > 0.0) || (g > 0.0) != (base_gap > 0.0);
      flips += flip;
      min_lower = std::min(min_lower, lo);
      csv += std::to_string(d) + "," + format_csv_real(size) + ",nan," + format_csv_real(pj) + "," +
             format_csv_real(g) + "," + format_csv_real(lo) + "," + format_csv_real(hi) + "," + (flip ? "1" : "0") + "\n";
    }
  } else {
    Json base_params;
    const GapValue g0 = sets_gap(c, c.phi, c.sys, &base_params);
    base_gap = g0.gap;
    const double sj = pick(c.cfg.strength_jitter, c.sys.mane() ? 0.01 : 0.0);
    const double a = pick(c.cfg.potential_jitter, std::fabs(base_gap) / 4.0);
    if (!(sj >= 0.0) || !(a >= 0.0)) fail(ErrorCode::ConfigError, "jitter radii must be >= 0");
    if (sj > 0.0 && !c.sys.mane()) fail(ErrorCode::ConfigError, "strength jitter needs a mane system");
    params = {{"draws", draws}, {"strength_jitter", real(sj)}, {"potential_jitter", real(a)},
              {"base_gap", real(base_gap)}, {"base_error_bar", real(g0.error)}, {"leaf", base_params}};
    for (int d = 0; d < draws; ++d) {
      std::optional<SystemSpec> sys;
      double strength = std::numeric_limits<double>::quiet_NaN();
      if (c.sys.mane()) {
        const auto& mp = *c.sys.mane();
        strength = mp.strength + sj * ud(rng);
        IMat base_m = c.sys.matrix();
        sys = build_mane_example(make_linear_spec(base_m), mp.q, mp.rho, mp.rho_inner, strength);
      } else {
        sys = c.sys;
      }
      const double pj = a * u01(rng);
      std::vector<int> k(static_cast<std::size_t>(c.sys.dim()));
      for (auto& ki : k) ki = static_cast<int>(std::floor(3.0 * u01(rng))) - 1;
      std::string wave = "wave:";
      for (std::size_t i = 0; i < k.size(); ++i) wave += (i ? "," : "") + std::to_string(k[i]);
      wave += ":" + format_real(pj) + ":" + format_real(6.283185307179586 * u01(rng));
      const Potential psi = c.phi.plus(Potential::parse(wave, c.sys.dim()));
      const GapValue g = sets_gap(c, psi, *sys, nullptr);
      const bool flip = (g.gap > 0.0) != (base_gap > 0.0);
      flips += flip;
      min_lower = std::min(min_lower, g.gap);
      csv += std::to_string(d) + ",0," + format_csv_real(strength) + "," + format_csv_real(pj) + "," +
             format_csv_real(g.gap) + "," + format_csv_real(g.gap - g.error) + "," + format_csv_real(g.gap + g.error) +
             "," + (flip ? "1" : "0") + "\n";
    }
  }
  c.params = params;
  c.result = {{"draws", draws}, {"sign_flips", flips}, {"rejected_draws", rejected}, {"base_gap", real(base_gap)},
              {"min_gap_lower", real(min_lower)}};
  c.extra.push_back({"scan.csv", csv});
}

void cmd_example_mane(Context& c) {
  const double strength = pick(c.cfg.strength, 0.1);
  const auto sys = catalog::mane(strength);
  c.params = {{"strength", real(strength)}};
  c.result = {{"config_file", "mane.cfg"}, {"system", to_json(sys)}};
  c.extra.push_back({"mane.cfg", system_to_config(sys)});
}

Json envelope(const RunConfig& cfg) {
  Json j;
  j["schema"] = kSchemaName;
  j["schema_version"] = kSchemaVersion;
  j["command"] = cfg.command;
  j["mode"] = cfg.mode;
  j["seed"] = cfg.seed;
  return j;
}

std::string stem(const std::string& command) {
  std::string s = command;
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

}  // namespace

RunResult run_command(const RunConfig& cfg) {
  RunResult out;
  Json doc = envelope(cfg);
  std::vector<Artifact> extra;
  try {
    if (std::find(command_names().begin(), command_names().end(), cfg.command) == command_names().end())
      fail(ErrorCode::ConfigError, "unknown command '" + cfg.command + "'");
    if (!cfg.seed_set) fail(ErrorCode::ConfigError, "a seed is mandatory");
    if (cfg.mode != "sets" && cfg.mode != "eigen-oracle") fail(ErrorCode::ConfigError, "mode must be sets or eigen-oracle");
    if (cfg.threads < 0) fail(ErrorCode::ConfigError, "threads must be >= 0");
    set_thread_cap(cfg.threads);
    if (cfg.command == "example-mane") {
      const SystemSpec dummy = catalog::doubling();
      const Potential zero = Potential::zero();
      Context c{cfg, dummy, zero};
      cmd_example_mane(c);
      doc["parameters"] = c.params;
      doc["result"] = c.result;
      extra = c.extra;
    } else {
      if (cfg.config_path.empty() && cfg.system_text.empty()) fail(ErrorCode::ConfigError, "a system config is required");
      const SystemSpec sys = cfg.config_path.empty() ? system_from_config(cfg.system_text) : load_system(cfg.config_path);
      Potential phi = Potential::parse(cfg.potential, sys.dim());
      if (!std::isnan(cfg.holder_K) || !std::isnan(cfg.holder_alpha))
        phi = phi.with_holder(pick(cfg.holder_alpha, phi.holder_exponent()), pick(cfg.holder_K, phi.holder_constant()));
      doc["system"] = to_json(sys);
      doc["potential"] = {{"spec", phi.name()}, {"K", real(phi.holder_constant())}, {"alpha", real(phi.holder_exponent())}};
      Context c{cfg, sys, phi};
      const std::string& cmd = cfg.command;
      if (cmd == "entropy") cmd_pressure(c, true);
      else if (cmd == "pressure") cmd_pressure(c, false);
      else if (cmd == "u-pressure") cmd_leaf(c, true);
      else if (cmd == "s-pressure") cmd_leaf(c, false);
      else if (cmd == "gap") cmd_gap(c);
      else if (cmd == "decompose") cmd_decompose(c);
      else if (cmd == "glue") cmd_glue(c);
      else if (cmd == "gamma") cmd_gamma(c);
      else if (cmd == "certify") cmd_certify(c);
      else if (cmd == "scan") cmd_scan(c);
      if (c.eigen() && cmd != "entropy" && cmd != "pressure" && cmd != "u-pressure" && cmd != "s-pressure" &&
          cmd != "gap" && cmd != "scan")
        c.warnings.push_back("mode eigen-oracle does not apply to " + cmd + "; ran in sets mode");
      doc["parameters"] = c.params;
      doc["result"] = c.result;
      extra = c.extra;
      out.warnings = c.warnings;
    }
    doc["status"] = "ok";
    doc["error"] = nullptr;
  } catch (const Error& e) {
    out.exit_code = is_config_error(e.code()) ? 2 : 3;
    out.error_code = error_name(e.code());
    out.error_message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = 3;
    out.error_code = error_name(ErrorCode::Internal);
    out.error_message = e.what();
  }
  if (out.exit_code != 0) {
    doc["status"] = "error";
    doc["error"] = {{"code", out.error_code}, {"message", out.error_message}, {"exit_code", out.exit_code}};
    extra.clear();
  }
  doc["warnings"] = out.warnings;
  out.json = write_json(doc);
  out.artifacts.push_back({stem(cfg.command.empty() ? "run" : cfg.command) + ".json", out.json});
  for (auto& a : extra) out.artifacts.push_back(std::move(a));
  return out;
}

RunConfig run_config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigError, std::string("run config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::ConfigError, "run config must be a JSON object");
  RunConfig c;
  auto num = [](const Json& v, const std::string& k) {
    if (!v.is_number()) fail(ErrorCode::ConfigError, "run config: '" + k + "' must be a number");
    return v.get<double>();
  };
  auto integer = [](const Json& v, const std::string& k) {
    if (!v.is_number_integer()) fail(ErrorCode::ConfigError, "run config: '" + k + "' must be an integer");
    return v.get<long long>();
  };
  auto str = [](const Json& v, const std::string& k) {
    if (!v.is_string()) fail(ErrorCode::ConfigError, "run config: '" + k + "' must be a string");
    return v.get<std::string>();
  };
  const std::map<std::string, std::function<void(const Json&, const std::string&)>> fields{
      {"command", [&](const Json& v, const std::string& k) { c.command = str(v, k); }},
      {"config_path", [&](const Json& v, const std::string& k) { c.config_path = str(v, k); }},
      {"system_text", [&](const Json& v, const std::string& k) { c.system_text = str(v, k); }},
      {"potential", [&](const Json& v, const std::string& k) { c.potential = str(v, k); }},
      {"holder_K", [&](const Json& v, const std::string& k) { c.holder_K = num(v, k); }},
      {"holder_alpha", [&](const Json& v, const std::string& k) { c.holder_alpha = num(v, k); }},
      {"seed", [&](const Json& v, const std::string& k) {
         if (!v.is_number_unsigned()) fail(ErrorCode::ConfigError, "run config: '" + k + "' must be a non-negative integer");
         c.seed = v.get<std::uint64_t>();
         c.seed_set = true;
       }},
      {"threads", [&](const Json& v, const std::string& k) { c.threads = static_cast<int>(integer(v, k)); }},
      {"mode", [&](const Json& v, const std::string& k) { c.mode = str(v, k); }},
      {"delta", [&](const Json& v, const std::string& k) { c.delta = num(v, k); }},
      {"eps", [&](const Json& v, const std::string& k) { c.eps = num(v, k); }},
      {"r", [&](const Json& v, const std::string& k) { c.r = num(v, k); }},
      {"pressure_delta", [&](const Json& v, const std::string& k) { c.pressure_delta = num(v, k); }},
      {"n_min", [&](const Json& v, const std::string& k) { c.n_min = static_cast<int>(integer(v, k)); }},
      {"n_max", [&](const Json& v, const std::string& k) { c.n_max = static_cast<int>(integer(v, k)); }},
      {"depth", [&](const Json& v, const std::string& k) { c.depth = static_cast<int>(integer(v, k)); }},
      {"samples", [&](const Json& v, const std::string& k) { c.samples = static_cast<int>(integer(v, k)); }},
      {"window", [&](const Json& v, const std::string& k) { c.window = static_cast<int>(integer(v, k)); }},
      {"pairs", [&](const Json& v, const std::string& k) { c.pairs = static_cast<int>(integer(v, k)); }},
      {"segment_length", [&](const Json& v, const std::string& k) { c.segment_length = static_cast<int>(integer(v, k)); }},
      {"draws", [&](const Json& v, const std::string& k) { c.draws = static_cast<int>(integer(v, k)); }},
      {"jitter", [&](const Json& v, const std::string& k) { c.jitter = num(v, k); }},
      {"strength_jitter", [&](const Json& v, const std::string& k) { c.strength_jitter = num(v, k); }},
      {"potential_jitter", [&](const Json& v, const std::string& k) { c.potential_jitter = num(v, k); }},
      {"strength", [&](const Json& v, const std::string& k) { c.strength = num(v, k); }},
      {"r_list", [&](const Json& v, const std::string& k) {
         if (!v.is_array()) fail(ErrorCode::ConfigError, "run config: 'r_list' must be an array");
         for (const auto& e : v) c.r_list.push_back(num(e, k));
       }},
  };
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto f = fields.find(it.key());
    if (f == fields.end()) fail(ErrorCode::ConfigError, "run config: unknown key '" + it.key() + "'");
    f->second(it.value(), it.key());
  }
  return c;
}

void write_artifacts(const RunResult& result, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::ConfigError, "cannot create output directory '" + dir + "': " + ec.message());
  for (const auto& a : result.artifacts) save_text((std::filesystem::path(dir) / a.name).string(), a.content);
}

}  // namespace phlab
