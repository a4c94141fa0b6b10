#include "doctest.h"

#include "fermion/json_io.hpp"
#include "fermion/verify.hpp"
#include "support.hpp"

using namespace fermion;
using namespace fermion::testing;

TEST_CASE("multivector json round trip, numeric and formal") {
  Rng rng(140);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = random_mv(rng, 4, 6);
    json j = dump_multivector(f, 0.5);
    auto p = parse_multivector(j, "rt");
    CHECK_FALSE(p.formal);
    CHECK(p.hbar == 0.5);
    CHECK(max_abs_diff(p.numeric, f) == 0.0);  // bit-exact through JSON doubles

    auto g = random_mv_formal(rng, 4);
    json jf = dump_multivector(g);
    auto pf = parse_multivector(jf, "rt");
    CHECK(pf.formal);
    CHECK(pf.exact == g);  // exact rational round trip
  }
}

TEST_CASE("canonicalisation is a projection") {
  json j{{"m", 2},
         {"mode", "numeric"},
         {"hbar", 1.0},
         {"terms", json::array({json{{"mask", json::array({1, 2})}, {"re", 2.0}, {"im", -1.0}}})}};
  json c1 = canonical_multivector_json(j, "in");
  json c2 = canonical_multivector_json(c1, "in");
  CHECK(c1 == c2);
}

TEST_CASE("schema violations carry positional diagnostics") {
  json bad{{"m", 2},
           {"mode", "numeric"},
           {"hbar", 1.0},
           {"terms", json::array({json{{"mask", json::array({2, 1})}, {"re", 1.0}}})}};
  try {
    parse_multivector(bad, "input");
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("input.terms[0]") != std::string::npos);
    CHECK(std::string(e.what()).find("increasing") != std::string::npos);
  }

  json dup{{"m", 2},
           {"mode", "numeric"},
           {"hbar", 1.0},
           {"terms", json::array({json{{"mask", json::array({1})}, {"re", 1.0}},
                                  json{{"mask", json::array({1})}, {"re", 2.0}}})}};
  CHECK_THROWS_WITH_AS(parse_multivector(dup, "x"), "x.terms[1]: duplicate mask",
                       std::invalid_argument);

  json nohbar{{"m", 2}, {"mode", "numeric"}, {"terms", json::array()}};
  CHECK_THROWS_AS(parse_multivector(nohbar, "x"), std::invalid_argument);

  json badmode{{"m", 2}, {"mode", "symbolic"}, {"terms", json::array()}};
  CHECK_THROWS_AS(parse_multivector(badmode, "x"), std::invalid_argument);
}

TEST_CASE("matrix json round trip") {
  Rng rng(141);
  MatrixXcd k(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) k(i, j) = rng.cnormal();
  CHECK((parse_complex_matrix(dump_complex_matrix(k), "m") - k).norm() == 0.0);
  MatrixXd q(2, 2);
  q << 1.0, 0.25, 0.25, 2.0;
  CHECK((parse_real_matrix(dump_real_matrix(q), "m") - q).norm() == 0.0);
}

TEST_CASE("verification report is deterministic for a fixed seed") {
  verify::SuiteConfig cfg;
  cfg.m = 2;
  cfg.seed = 7;
  cfg.suites = {"algebra", "star"};
  auto r1 = verify::run_suites(cfg);
  auto r2 = verify::run_suites(cfg);
  json j1 = verify::report_json(cfg, r1);
  json j2 = verify::report_json(cfg, r2);
  for (auto* j : {&j1, &j2})
    for (auto& chk : (*j)["checks"]) chk.erase("ms");  // timings are informational
  CHECK(j1 == j2);
  CHECK(j1["schema"] == 1);
  CHECK(verify::all_passed(r1));
}

TEST_CASE("clifford elements keep their algebra tag") {
  Rng rng(142);
  auto x = random_mv(rng, 3, 4);
  json j = dump_multivector(x, 1.0, true);
  CHECK(j["algebra"] == "clifford");
  auto p = parse_multivector(j, "cl");
  CHECK(p.clifford);
}
