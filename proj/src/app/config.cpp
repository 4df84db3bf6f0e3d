#include "app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace magreg::app {

namespace {

std::string where(const YAML::Mark& m) {
  if (m.is_null()) return "";
  return "line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ": ";
}

class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(where(node_.Mark()) + "'" + label() + "' must be a mapping");
    }
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    allowed_.insert(key);
    if (!node_ || !node_.IsMap()) return;
    const YAML::Node v = node_[key];
    if (!v) return;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(v.Mark()) + "bad value for '" + qualified(key) + "'");
    }
  }

  void get_rows(const std::string& key, std::vector<std::vector<double>>& out, std::size_t width) {
    get(key, out);
    for (const auto& row : out) {
      if (row.size() != width) {
        throw ConfigError(where(node_[key].Mark()) + "'" + qualified(key) + "' rows need " + std::to_string(width) +
                          " entries");
      }
    }
  }

  Section sub(const std::string& key) {
    allowed_.insert(key);
    if (!node_ || !node_.IsMap()) return Section(YAML::Node(), qualified(key));
    return Section(node_[key], qualified(key));
  }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed_.count(key)) throw ConfigError(where(kv.first.Mark()) + "unknown key '" + qualified(key) + "'");
    }
  }

  std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }
  YAML::Node node_;
  std::string path_;
  std::set<std::string> allowed_;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid value: " + what);
}

void emit_list(YAML::Emitter& e, const char* key, const std::vector<double>& v) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << v;
}

void emit_rows(YAML::Emitter& e, const char* key, const std::vector<std::vector<double>>& rows) {
  e << YAML::Key << key << YAML::Value << YAML::Flow << rows;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ": " + where(e.mark) + e.msg);
  }
  RunConfig cfg;
  cfg.source = source;
  try {
    Section top(root, "");
    top.get("command", cfg.command);
    top.get("seed", cfg.seed);
    top.get("tol", cfg.tol);
    top.get("truncation", cfg.truncation);
    top.get("n_eigs", cfg.n_eigs);

    auto p = top.sub("potential");
    p.get("kind", cfg.potential.kind);
    p.get("flux", cfg.potential.flux);
    p.get("beta", cfg.potential.beta);
    p.get("alpha0", cfg.potential.alpha0);
    p.get("alpha_cos", cfg.potential.alpha_cos);
    p.get("alpha_sin", cfg.potential.alpha_sin);
    p.get("h0", cfg.potential.h0);
    p.get("h_cos", cfg.potential.h_cos);
    p.get("h_sin", cfg.potential.h_sin);
    p.finish();

    auto t = top.sub("tilt");
    t.get("beta_min", cfg.tilt.beta_min);
    t.get("beta_max", cfg.tilt.beta_max);
    t.get("steps", cfg.tilt.steps);
    t.finish();

    auto m = top.sub("mathieu");
    m.get("q", cfg.mathieu.q);
    m.get("count", cfg.mathieu.count);
    m.finish();

    auto g = top.sub("gamma");
    g.get("metric_diag", cfg.gamma.metric_diag);
    g.get("x_grid", cfg.gamma.x_grid);
    g.get("data", cfg.gamma.data);
    g.get("q", cfg.gamma.q);
    g.finish();

    auto s = top.sub("solenoid");
    s.get("loop", cfg.solenoid.loop);
    s.get("beta", cfg.solenoid.beta);
    s.get("radius", cfg.solenoid.radius);
    s.get_rows("samples", cfg.solenoid.samples, 3);
    s.get("current", cfg.solenoid.current);
    s.get("mu0", cfg.solenoid.mu0);
    s.get("deltas", cfg.solenoid.deltas);
    s.get_rows("points", cfg.solenoid.points, 3);
    s.finish();

    auto c = top.sub("curve");
    c.get("kind", cfg.curve.kind);
    c.get("r", cfg.curve.r);
    c.get("b", cfg.curve.b);
    c.get("amp", cfg.curve.amp);
    c.get("turns", cfg.curve.turns);
    c.get_rows("samples", cfg.curve.samples, 4);
    c.get("points", cfg.curve.points);
    c.get("rhos", cfg.curve.rhos);
    c.get("thetas", cfg.curve.thetas);
    c.get("x", cfg.curve.x);
    c.get("current", cfg.curve.current);
    c.get("c_gamma", cfg.curve.c_gamma);
    c.finish();

    auto a = top.sub("annulus");
    a.get("R", cfg.annulus.R);
    a.get("eps", cfg.annulus.eps);
    auto bd = a.sub("boundary");
    bd.get("eigen", cfg.annulus.eigen);
    bd.get("a0", cfg.annulus.a0);
    bd.get("cos", cfg.annulus.cos_coeffs);
    bd.get("sin", cfg.annulus.sin_coeffs);
    bd.finish();
    a.finish();

    auto h = top.sub("hardy");
    h.get("trials", cfg.hardy.trials);
    h.get("R", cfg.hardy.R);
    h.get("max_mode", cfg.hardy.max_mode);
    h.get("max_degree", cfg.hardy.max_degree);
    h.finish();

    top.finish();
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const RunConfig& cfg) {
  const double half_pi = std::numbers::pi / 2;
  require(cfg.tol > 0, "tol must be positive");
  require(cfg.truncation >= 1, "truncation must be >= 1");
  require(cfg.n_eigs >= 1 && cfg.n_eigs <= 2 * cfg.truncation + 1, "n_eigs must lie in [1, 2*truncation+1]");
  const auto& p = cfg.potential;
  require(p.kind == "ab_flux" || p.kind == "tilt" || p.kind == "trig", "potential.kind must be ab_flux, tilt or trig");
  require(p.beta >= 0 && p.beta < half_pi, "potential.beta must lie in [0, pi/2)");
  require(cfg.tilt.beta_min >= 0 && cfg.tilt.beta_max < half_pi && cfg.tilt.beta_min < cfg.tilt.beta_max,
          "tilt beta range must satisfy 0 <= beta_min < beta_max < pi/2");
  require(cfg.tilt.steps >= 2, "tilt.steps must be >= 2");
  require(cfg.mathieu.count >= 1, "mathieu.count must be >= 1");
  for (double q : cfg.mathieu.q) require(q >= 0, "mathieu.q must be non-negative");
  require(cfg.gamma.metric_diag.size() == 3, "gamma.metric_diag needs 3 entries");
  for (double v : cfg.gamma.metric_diag) require(v > 0, "gamma.metric_diag entries must be positive");
  require(!cfg.gamma.x_grid.empty(), "gamma.x_grid must not be empty");
  require(cfg.gamma.data == "holder" || cfg.gamma.data == "lebesgue", "gamma.data must be holder or lebesgue");
  const auto& s = cfg.solenoid;
  require(s.loop == "tilted" || s.loop == "axial" || s.loop == "samples", "solenoid.loop must be tilted, axial or samples");
  require(s.beta >= 0 && s.beta < half_pi, "solenoid.beta must lie in [0, pi/2)");
  require(s.loop != "samples" || s.samples.size() >= 4, "solenoid.samples needs >= 4 rows");
  require(s.mu0 > 0, "solenoid.mu0 must be positive");
  for (double d : s.deltas) require(d > 0, "solenoid.deltas must be positive");
  const auto& c = cfg.curve;
  require(c.kind == "helix" || c.kind == "circle" || c.kind == "perturbed_helix" || c.kind == "samples",
          "curve.kind must be helix, circle, perturbed_helix or samples");
  require(c.kind != "samples" || c.samples.size() >= 7, "curve.samples needs >= 7 rows");
  require(c.points >= 1 && c.thetas >= 1, "curve.points and curve.thetas must be >= 1");
  for (double r : c.rhos) require(r >= 0, "curve.rhos must be non-negative");
  require(cfg.annulus.R > 0, "annulus.R must be positive");
  for (double e : cfg.annulus.eps) require(e > 0 && e < cfg.annulus.R, "annulus.eps must lie in (0, R)");
  require(cfg.hardy.trials >= 1 && cfg.hardy.R > 0, "hardy.trials >= 1 and hardy.R > 0");
  require(cfg.hardy.max_mode >= 0 && cfg.hardy.max_degree >= 0, "hardy.max_mode and max_degree must be >= 0");
}

std::string RunConfig::to_yaml() const {
  YAML::Emitter e;
  e.SetDoublePrecision(17);
  e << YAML::BeginMap;
  e << YAML::Key << "command" << YAML::Value << command;
  e << YAML::Key << "seed" << YAML::Value << seed;
  e << YAML::Key << "tol" << YAML::Value << tol;
  e << YAML::Key << "truncation" << YAML::Value << truncation;
  e << YAML::Key << "n_eigs" << YAML::Value << n_eigs;

  e << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << potential.kind;
  e << YAML::Key << "flux" << YAML::Value << potential.flux;
  e << YAML::Key << "beta" << YAML::Value << potential.beta;
  e << YAML::Key << "alpha0" << YAML::Value << potential.alpha0;
  emit_list(e, "alpha_cos", potential.alpha_cos);
  emit_list(e, "alpha_sin", potential.alpha_sin);
  e << YAML::Key << "h0" << YAML::Value << potential.h0;
  emit_list(e, "h_cos", potential.h_cos);
  emit_list(e, "h_sin", potential.h_sin);
  e << YAML::EndMap;

  e << YAML::Key << "tilt" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "beta_min" << YAML::Value << tilt.beta_min;
  e << YAML::Key << "beta_max" << YAML::Value << tilt.beta_max;
  e << YAML::Key << "steps" << YAML::Value << tilt.steps;
  e << YAML::EndMap;

  e << YAML::Key << "mathieu" << YAML::Value << YAML::BeginMap;
  emit_list(e, "q", mathieu.q);
  e << YAML::Key << "count" << YAML::Value << mathieu.count;
  e << YAML::EndMap;

  e << YAML::Key << "gamma" << YAML::Value << YAML::BeginMap;
  emit_list(e, "metric_diag", gamma.metric_diag);
  emit_list(e, "x_grid", gamma.x_grid);
  e << YAML::Key << "data" << YAML::Value << gamma.data;
  e << YAML::Key << "q" << YAML::Value << gamma.q;
  e << YAML::EndMap;

  e << YAML::Key << "solenoid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "loop" << YAML::Value << solenoid.loop;
  e << YAML::Key << "beta" << YAML::Value << solenoid.beta;
  e << YAML::Key << "radius" << YAML::Value << solenoid.radius;
  emit_rows(e, "samples", solenoid.samples);
  e << YAML::Key << "current" << YAML::Value << solenoid.current;
  e << YAML::Key << "mu0" << YAML::Value << solenoid.mu0;
  emit_list(e, "deltas", solenoid.deltas);
  emit_rows(e, "points", solenoid.points);
  e << YAML::EndMap;

  e << YAML::Key << "curve" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << curve.kind;
  e << YAML::Key << "r" << YAML::Value << curve.r;
  e << YAML::Key << "b" << YAML::Value << curve.b;
  e << YAML::Key << "amp" << YAML::Value << curve.amp;
  e << YAML::Key << "turns" << YAML::Value << curve.turns;
  emit_rows(e, "samples", curve.samples);
  e << YAML::Key << "points" << YAML::Value << curve.points;
  emit_list(e, "rhos", curve.rhos);
  e << YAML::Key << "thetas" << YAML::Value << curve.thetas;
  e << YAML::Key << "x" << YAML::Value << curve.x;
  e << YAML::Key << "current" << YAML::Value << curve.current;
  e << YAML::Key << "c_gamma" << YAML::Value << curve.c_gamma;
  e << YAML::EndMap;

  e << YAML::Key << "annulus" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "R" << YAML::Value << annulus.R;
  emit_list(e, "eps", annulus.eps);
  e << YAML::Key << "boundary" << YAML::Value << YAML::BeginMap;
  emit_list(e, "eigen", annulus.eigen);
  e << YAML::Key << "a0" << YAML::Value << annulus.a0;
  emit_list(e, "cos", annulus.cos_coeffs);
  emit_list(e, "sin", annulus.sin_coeffs);
  e << YAML::EndMap << YAML::EndMap;

  e << YAML::Key << "hardy" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "trials" << YAML::Value << hardy.trials;
  e << YAML::Key << "R" << YAML::Value << hardy.R;
  e << YAML::Key << "max_mode" << YAML::Value << hardy.max_mode;
  e << YAML::Key << "max_degree" << YAML::Value << hardy.max_degree;
  e << YAML::EndMap;

  e << YAML::EndMap;
  return e.c_str();
}

}  // namespace magreg::app
