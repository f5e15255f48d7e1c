#include <cstdint>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rotary/config.hpp"

using namespace rotary;

TEST_CASE("an empty document yields the benchmark defaults") {
  const SimConfig cfg = parse_config("{}");
  CHECK(cfg.region.type == "ellipse");
  CHECK(cfg.region.a == 5.0);
  CHECK(cfg.region.b == 3.0);
  CHECK(cfg.density.name == "paper-s4");
  CHECK(cfg.density.polynomial.empty());
  CHECK(cfg.n_agents == 6);
  CHECK(cfg.gains.kappa_p == 0.04);
  CHECK(cfg.gains.kappa_phi == 0.045);
  CHECK(cfg.gains.kappa_r == 0.05);
  CHECK(cfg.integrator.kind == "rk4");
  CHECK(cfg.integrator.dt == 0.01);
  CHECK(cfg.integrator.t_final == 200.0);
  CHECK(cfg.quadrature.radial_nodes == 32);
  CHECK(cfg.quadrature.angular_nodes == 32);
  CHECK(cfg.quadrature.scheme == QuadScheme::GaussLegendre);
  CHECK(cfg.seed == 0);
  CHECK(cfg.emit_every == 100);
  CHECK(step_count(cfg) == 20000);
}

TEST_CASE("explicit values survive a parse/echo round trip") {
  const std::string text = R"({
    "region": {"type": "ellipse", "a": 2.0, "b": 1.5},
    "density": {"name": "uniform"},
    "n_agents": 4,
    "gains": {"kappa_p": 0.1, "kappa_phi": 0.2, "kappa_r": 0.3},
    "integrator": {"kind": "euler", "dt": 0.005, "t_final": 1.0},
    "quadrature": {"radial_nodes": 16, "angular_nodes": 8, "scheme": "simpson"},
    "seed": 12345,
    "emit_every": 10
  })";
  const SimConfig cfg = parse_config(text);
  CHECK(cfg.region.a == 2.0);
  CHECK(cfg.density.name == "uniform");
  CHECK(cfg.n_agents == 4);
  CHECK(cfg.gains.kappa_phi == 0.2);
  CHECK(cfg.integrator.kind == "euler");
  CHECK(cfg.quadrature.scheme == QuadScheme::Simpson);
  CHECK(cfg.seed == 12345);
  CHECK(step_count(cfg) == 200);
  CHECK(integrator_kind(cfg) == IntegratorKind::Euler);

  // The echo parses back to the same values.
  const SimConfig round = parse_config(config_echo_json(cfg));
  CHECK(round.region.b == 1.5);
  CHECK(round.quadrature.scheme == QuadScheme::Simpson);
  CHECK(round.emit_every == 10);
  CHECK(round.seed == cfg.seed);
}

TEST_CASE("out-of-range values are rejected with the offending key") {
  auto expect_validation = [](const std::string& text, const std::string& key) {
    try {
      (void)parse_config(text);
      FAIL_CHECK(("expected ValidationError for " + text).c_str());
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  };

  expect_validation(R"({"n_agents": 2})", "n_agents");
  expect_validation(R"({"gains": {"kappa_p": -1}})", "kappa_p");
  expect_validation(R"({"gains": {"kappa_r": 0}})", "kappa_r");
  expect_validation(R"({"region": {"type": "square"}})", "region.type");
  expect_validation(R"({"region": {"a": -5}})", "region.a");
  expect_validation(R"({"integrator": {"kind": "rk2"}})", "integrator.kind");
  expect_validation(R"({"integrator": {"dt": 0}})", "integrator.dt");
  expect_validation(R"({"integrator": {"t_final": -1}})", "integrator.t_final");
  expect_validation(R"({"integrator": {"dt": 0.01, "t_final": 0.015}})", "t_final");
  expect_validation(R"({"quadrature": {"radial_nodes": 2}})", "quadrature");
  expect_validation(R"({"quadrature": {"radial_nodes": 7, "scheme": "simpson"}})",
                    "quadrature");
  expect_validation(R"({"quadrature": {"scheme": "monte-carlo"}})", "scheme");
  expect_validation(R"({"emit_every": 0})", "emit_every");
  expect_validation(R"({"seed": -1})", "seed");
  expect_validation(R"({"density": {"name": "gaussian"}})", "density.name");
  expect_validation(R"({"density": {"name": "uniform", "polynomial": []}})",
                    "density");
}

TEST_CASE("unknown keys fail loudly instead of being ignored") {
  CHECK_THROWS_AS(parse_config(R"({"agents": 6})"), ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"region": {"type": "ellipse", "radius": 2}})"),
                  ValidationError);
  CHECK_THROWS_AS(parse_config(R"({"gains": {"kappa_x": 1}})"), ValidationError);
}

TEST_CASE("malformed documents raise ParseError") {
  CHECK_THROWS_AS(parse_config("not json {"), ParseError);
  CHECK_THROWS_AS(parse_config("[1, 2, 3]"), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/path/cfg.json"), ParseError);
}

TEST_CASE("polynomial densities parse and build, with positivity enforced") {
  const SimConfig cfg = parse_config(
      R"({"density": {"polynomial": [{"px": 0, "py": 0, "coef": 1.0},
                                     {"px": 1, "py": 1, "coef": 0.01}]}})");
  REQUIRE(cfg.density.polynomial.size() == 2);
  const RegionBoundary region = build_region(cfg);
  const DensityField rho = build_density(cfg, region);
  CHECK(rho.eval(2.0, 1.0) == doctest::Approx(1.0 + 0.01 * 2.0));

  const SimConfig bad = parse_config(
      R"({"density": {"polynomial": [{"px": 1, "py": 0, "coef": 1.0}]}})");
  CHECK_THROWS_AS(build_density(bad, build_region(bad)), ValidationError);
}

TEST_CASE("seed accepts the full unsigned 64-bit range") {
  const SimConfig cfg = parse_config(R"({"seed": 18446744073709551615})");
  CHECK(cfg.seed == UINT64_MAX);
}

TEST_CASE("t_final = 0 is a valid single-snapshot run") {
  const SimConfig cfg = parse_config(R"({"integrator": {"t_final": 0}})");
  CHECK(step_count(cfg) == 0);
}
