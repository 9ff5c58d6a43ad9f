#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "photon_dimer/config.hpp"
#include "photon_dimer/sweep.hpp"

using namespace photon_dimer;

TEST_CASE("config parsing") {
  std::istringstream ok(
      "# comment\n"
      "u1 = 5\n"
      "omega1=7.5   # trailing comment\n"
      "j = 2\n"
      "\n"
      "v1 = 0.3\n");
  auto m = parse_config_text(ok, "test.cfg");
  CHECK(m.at("u1") == "5");
  CHECK(m.at("omega1") == "7.5");
  CHECK(config_number(m, "j", 1.0) == 2.0);
  CHECK(config_number(m, "missing", -3.5) == -3.5);

  std::istringstream bad("u1 5\n");
  CHECK_THROWS_WITH(parse_config_text(bad, "f.cfg"),
                    Catch::Matchers::ContainsSubstring("f.cfg:1"));
  std::istringstream nan("u1 = abc\n");
  auto m2 = parse_config_text(nan);
  CHECK_THROWS_WITH(config_number(m2, "u1", 0), Catch::Matchers::ContainsSubstring("u1"));
}

TEST_CASE("params from config are frame shifted and validated") {
  std::istringstream cfg("omega1 = 5\nomega2 = 5\nu1 = 0\nj = 1\nv1 = 0.2\n");
  auto p = params_from_config(parse_config_text(cfg));
  CHECK(p.omega1 == complex_t(0, 0));
  CHECK(p.omega2 == complex_t(0, 0));
  CHECK(p.v2 == 0.2);  // defaults to v1

  std::istringstream bad("j = 0\n");
  CHECK_THROWS_WITH(params_from_config(parse_config_text(bad)),
                    Catch::Matchers::ContainsSubstring("j_hop"));
}

TEST_CASE("scan1 sweep table") {
  SweepSpec s;
  s.observable = Observable::scan1;
  s.min = -10;
  s.max = 10;
  s.n = 101;
  s.params = validate(DimerParams{});
  auto tab = run(s);
  REQUIRE(tab.columns.size() == 8);
  CHECK(tab.columns[0] == "E");
  CHECK(tab.columns[7] == "flux");
  REQUIRE(tab.rows.size() == 101);
  for (const auto& row : tab.rows) CHECK(row[7] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("re-running a spec yields byte-identical CSV") {
  SweepSpec s;
  s.observable = Observable::initg2;
  s.min = 0.001;
  s.max = 0.05;
  s.n = 21;
  s.delta = 0;
  s.params = validate(DimerParams{});
  std::ostringstream a, b;
  write_csv(a, run(s));
  write_csv(b, run(s));
  CHECK(a.str() == b.str());
  CHECK(a.str().substr(0, 18) == "dk,m2,g2_initial\n0");
}

TEST_CASE("smap emits the full grid with resolved coordinates") {
  SweepSpec s;
  s.observable = Observable::smap;
  s.delta = 0;
  s.box = 4;
  s.map_n = 21;
  DimerParams p;
  p.u1 = p.u2 = 5;
  p.v1 = p.v2 = 0.5;
  s.params = validate(p);
  auto tab = run(s);
  REQUIRE(tab.rows.size() == 21 * 21);
  // dk <-> dp exchange symmetry of |S_RR|^2 on the shell
  auto val = [&](int i, int j) { return tab.rows[i * 21 + j][2]; };
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j)
      CHECK(val(i, j) == Catch::Approx(val(i, 20 - j)).margin(1e-18));
}

TEST_CASE("lindblad sweep emits occupations and residuals") {
  SweepSpec s;
  s.observable = Observable::lindblad;
  s.min = -1;
  s.max = 1;
  s.n = 3;
  DimerParams p;
  p.u1 = p.u2 = 1;
  p.v1 = p.v2 = 0.2;
  s.params = validate(p);
  auto tab = run(s);
  REQUIRE(tab.rows.size() == 3);
  for (const auto& row : tab.rows) {
    CHECK(row[1] > 0);
    CHECK(row[3] < 1e-10);
  }
}

TEST_CASE("committed sweep recipes parse and validate") {
  for (const char* name :
       {"transmission_sweep", "correlations_sweep", "correlations_vs_u", "bound_weight_comb",
        "bound_map", "loss_sweep", "master_equation_comparison", "initial_correlations"}) {
    auto path = std::string(RECIPE_DIR) + "/" + name + ".cfg";
    auto cfg = parse_config_file(path);
    auto p = params_from_config(cfg);
    CHECK(p.j_hop > 0);
    CHECK(p.v1 > 0);
  }
}

TEST_CASE("sweep rejects malformed grids") {
  SweepSpec s;
  s.observable = Observable::scan1;
  s.n = 1;
  s.params = validate(DimerParams{});
  CHECK_THROWS_AS(run(s), std::domain_error);
  s.n = 5;
  s.min = 2;
  s.max = -2;
  CHECK_THROWS_AS(run(s), std::domain_error);
}
