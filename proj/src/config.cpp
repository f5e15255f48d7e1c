#include "rotary/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rotary {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw ValidationError(context + ": unknown key \"" + item.key() + "\"");
    }
  }
}

double get_double(const json& j, const char* key, const std::string& context,
                  double fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw ValidationError(context + "." + key + ": expected a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ValidationError(context + "." + key + ": must be finite");
  }
  return d;
}

int get_int(const json& j, const char* key, const std::string& context,
            int fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_number_integer()) {
    throw ValidationError(context + "." + key + ": expected an integer");
  }
  return v.get<int>();
}

std::string get_string(const json& j, const char* key,
                       const std::string& context, const std::string& fallback) {
  if (!j.contains(key)) {
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_string()) {
    throw ValidationError(context + "." + key + ": expected a string");
  }
  return v.get<std::string>();
}

}  // namespace

SimConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) {
    throw ParseError("config: top level must be a JSON object");
  }
  check_keys(j, "config",
             {"region", "density", "n_agents", "gains", "integrator",
              "quadrature", "seed", "emit_every"});

  SimConfig cfg;

  if (j.contains("region")) {
    const json& r = j.at("region");
    check_keys(r, "region", {"type", "a", "b"});
    cfg.region.type = get_string(r, "type", "region", cfg.region.type);
    cfg.region.a = get_double(r, "a", "region", cfg.region.a);
    cfg.region.b = get_double(r, "b", "region", cfg.region.b);
  }

  if (j.contains("density")) {
    const json& d = j.at("density");
    check_keys(d, "density", {"name", "polynomial"});
    if (d.contains("name") && d.contains("polynomial")) {
      throw ValidationError("density: give either a name or a polynomial, not both");
    }
    if (d.contains("polynomial")) {
      const json& terms = d.at("polynomial");
      if (!terms.is_array() || terms.empty()) {
        throw ValidationError("density.polynomial: expected a non-empty array");
      }
      for (const json& t : terms) {
        check_keys(t, "density.polynomial[]", {"px", "py", "coef"});
        PolyTerm term;
        term.px = get_int(t, "px", "density.polynomial[]", 0);
        term.py = get_int(t, "py", "density.polynomial[]", 0);
        term.coef = get_double(t, "coef", "density.polynomial[]", 0.0);
        if (term.px < 0 || term.py < 0) {
          throw ValidationError("density.polynomial[].px/py: must be non-negative");
        }
        cfg.density.polynomial.push_back(term);
      }
      cfg.density.name.clear();
    } else {
      cfg.density.name = get_string(d, "name", "density", cfg.density.name);
    }
  }

  if (j.contains("n_agents")) {
    cfg.n_agents = get_int(j, "n_agents", "config", cfg.n_agents);
  }

  if (j.contains("gains")) {
    const json& g = j.at("gains");
    check_keys(g, "gains", {"kappa_p", "kappa_phi", "kappa_r"});
    cfg.gains.kappa_p = get_double(g, "kappa_p", "gains", cfg.gains.kappa_p);
    cfg.gains.kappa_phi = get_double(g, "kappa_phi", "gains", cfg.gains.kappa_phi);
    cfg.gains.kappa_r = get_double(g, "kappa_r", "gains", cfg.gains.kappa_r);
  }

  if (j.contains("integrator")) {
    const json& it = j.at("integrator");
    check_keys(it, "integrator", {"kind", "dt", "t_final"});
    cfg.integrator.kind = get_string(it, "kind", "integrator", cfg.integrator.kind);
    cfg.integrator.dt = get_double(it, "dt", "integrator", cfg.integrator.dt);
    cfg.integrator.t_final =
        get_double(it, "t_final", "integrator", cfg.integrator.t_final);
  }

  if (j.contains("quadrature")) {
    const json& q = j.at("quadrature");
    check_keys(q, "quadrature", {"radial_nodes", "angular_nodes", "scheme"});
    cfg.quadrature.radial_nodes =
        get_int(q, "radial_nodes", "quadrature", cfg.quadrature.radial_nodes);
    cfg.quadrature.angular_nodes =
        get_int(q, "angular_nodes", "quadrature", cfg.quadrature.angular_nodes);
    const std::string scheme = get_string(q, "scheme", "quadrature", "gauss-legendre");
    if (scheme == "gauss-legendre") {
      cfg.quadrature.scheme = QuadScheme::GaussLegendre;
    } else if (scheme == "simpson") {
      cfg.quadrature.scheme = QuadScheme::Simpson;
    } else {
      throw ValidationError("quadrature.scheme: expected \"gauss-legendre\" or \"simpson\"");
    }
  }

  if (j.contains("seed")) {
    const json& s = j.at("seed");
    // nlohmann stores every non-negative integer literal as unsigned.
    if (!s.is_number_unsigned()) {
      throw ValidationError("seed: expected an unsigned integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }

  if (j.contains("emit_every")) {
    cfg.emit_every = get_int(j, "emit_every", "config", cfg.emit_every);
  }

  validate_config(cfg);
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("config: cannot open " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const SimConfig& cfg) {
  if (cfg.region.type != "ellipse") {
    throw ValidationError("region.type: only \"ellipse\" is supported");
  }
  if (!(cfg.region.a > 0.0) || !(cfg.region.b > 0.0)) {
    throw ValidationError("region.a/b: semi-axes must be positive");
  }
  if (cfg.density.polynomial.empty() && cfg.density.name != "uniform" &&
      cfg.density.name != "paper-s4") {
    throw ValidationError("density.name: expected \"uniform\" or \"paper-s4\"");
  }
  if (cfg.n_agents < 3) {
    throw ValidationError("n_agents: need at least 3 (the ring reads i-2)");
  }
  if (!(cfg.gains.kappa_p > 0.0)) {
    throw ValidationError("gains.kappa_p: must be positive");
  }
  if (!(cfg.gains.kappa_phi > 0.0)) {
    throw ValidationError("gains.kappa_phi: must be positive");
  }
  if (!(cfg.gains.kappa_r > 0.0)) {
    throw ValidationError("gains.kappa_r: must be positive");
  }
  if (cfg.integrator.kind != "euler" && cfg.integrator.kind != "rk4") {
    throw ValidationError("integrator.kind: expected \"euler\" or \"rk4\"");
  }
  if (!(cfg.integrator.dt > 0.0)) {
    throw ValidationError("integrator.dt: must be positive");
  }
  if (!(cfg.integrator.t_final >= 0.0)) {
    throw ValidationError("integrator.t_final: must be non-negative");
  }
  const double steps = cfg.integrator.t_final / cfg.integrator.dt;
  const double rounded = std::llround(steps);
  if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
    throw ValidationError(
        "integrator.t_final: must be an integer multiple of dt (fixed-step loop)");
  }
  validate(cfg.quadrature);
  if (cfg.emit_every < 1) {
    throw ValidationError("emit_every: must be at least 1");
  }
}

long step_count(const SimConfig& cfg) {
  return std::llround(cfg.integrator.t_final / cfg.integrator.dt);
}

RegionBoundary build_region(const SimConfig& cfg) {
  return RegionBoundary::ellipse(cfg.region.a, cfg.region.b);
}

DensityField build_density(const SimConfig& cfg, const RegionBoundary& region) {
  if (!cfg.density.polynomial.empty()) {
    return polynomial_density(cfg.density.polynomial, region);
  }
  if (cfg.density.name == "uniform") {
    return uniform_density();
  }
  return benchmark_density();
}

IntegratorKind integrator_kind(const SimConfig& cfg) {
  return cfg.integrator.kind == "euler" ? IntegratorKind::Euler
                                        : IntegratorKind::Rk4;
}

std::string config_echo_json(const SimConfig& cfg) {
  json j;
  j["region"] = {{"type", cfg.region.type}, {"a", cfg.region.a}, {"b", cfg.region.b}};
  if (!cfg.density.polynomial.empty()) {
    json terms = json::array();
    for (const PolyTerm& t : cfg.density.polynomial) {
      terms.push_back({{"px", t.px}, {"py", t.py}, {"coef", t.coef}});
    }
    j["density"] = {{"polynomial", terms}};
  } else {
    j["density"] = {{"name", cfg.density.name}};
  }
  j["n_agents"] = cfg.n_agents;
  j["gains"] = {{"kappa_p", cfg.gains.kappa_p},
                {"kappa_phi", cfg.gains.kappa_phi},
                {"kappa_r", cfg.gains.kappa_r}};
  j["integrator"] = {{"kind", cfg.integrator.kind},
                     {"dt", cfg.integrator.dt},
                     {"t_final", cfg.integrator.t_final}};
  j["quadrature"] = {
      {"radial_nodes", cfg.quadrature.radial_nodes},
      {"angular_nodes", cfg.quadrature.angular_nodes},
      {"scheme", cfg.quadrature.scheme == QuadScheme::GaussLegendre
                     ? "gauss-legendre"
                     : "simpson"}};
  j["seed"] = cfg.seed;
  j["emit_every"] = cfg.emit_every;
  return j.dump(2);
}

}  // namespace rotary
