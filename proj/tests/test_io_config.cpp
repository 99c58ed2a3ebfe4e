#include <catch2/catch_amalgamated.hpp>

#include "syzygy/asymptotics.hpp"
#include "syzygy/config.hpp"
#include "syzygy/io.hpp"
#include "syzygy/koszul.hpp"

using namespace syz;

TEST_CASE("betti csv bytes") {
  BettiTable t = betti_table(projective_system(1, {0}, 3), 3, 0, 2);
  CHECK(betti_csv(t) ==
        "p,q,dim\n"
        "0,0,1\n"
        "1,0,0\n"
        "2,0,0\n"
        "3,0,0\n"
        "0,1,0\n"
        "1,1,3\n"
        "2,1,2\n"
        "3,1,0\n"
        "0,2,0\n"
        "1,2,0\n"
        "2,2,0\n"
        "3,2,0\n");
}

TEST_CASE("betti diagram bytes") {
  BettiTable t = betti_table(projective_system(1, {0}, 3), 3, 0, 2);
  CHECK(betti_diagram(t) ==
        "    0  1  2  3\n"
        "0:  1  .  .  .\n"
        "1:  .  3  2  .\n"
        "2:  .  .  .  .\n");
}

TEST_CASE("diagram has no trailing whitespace and only LF endings") {
  BettiTable t = betti_table(projective_system(2, {0}, 2), 6, 0, 3);
  std::string text = betti_diagram(t) + betti_csv(t);
  CHECK(text.find('\r') == std::string::npos);
  std::size_t pos = 0;
  while ((pos = text.find('\n', pos)) != std::string::npos) {
    if (pos > 0) CHECK(text[pos - 1] != ' ');
    ++pos;
  }
}

TEST_CASE("sweep csv bytes") {
  DSweep s;
  s.samples = {{1, 1}, {2, 3}, {3, 6}};
  CHECK(sweep_csv(s) == "d,dim\n1,1\n2,3\n3,6\n");
}

TEST_CASE("rational formatting") {
  CHECK(rational_to_string(Rational(1, 2)) == "1/2");
  CHECK(rational_to_string(Rational(-3, 4)) == "-3/4");
  CHECK(rational_to_string(Rational(5)) == "5");
  CHECK(rational_to_string(Rational(0)) == "0");
}

TEST_CASE("fit report format") {
  auto fam = TwistFamily::projective(projective_system(1, {0}, 1), 1, 1);
  DSweep s = sweep(fam, 1, 1, 1, 6);
  PolyFit fit = fit_and_validate(s, 2, 4);
  std::string rep = fit_report(s, fit, 2, 4);
  CHECK(rep.find("degree: 2\n") != std::string::npos);
  CHECK(rep.find("coefficient[1]: 1/2\n") != std::string::npos);
  CHECK(rep.find("coefficient[2]: 1/2\n") != std::string::npos);
  CHECK(rep.find("stabilization_d0: 1\n") != std::string::npos);
  CHECK(rep.find("validated: yes\n") != std::string::npos);
}

TEST_CASE("config parsing round trip") {
  std::string text = R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "field": {"prime": 32003, "certify": true},
    "threads": 2,
    "betti": {"p_max": 3, "q_min": 0, "q_max": 2}
  })";
  RunConfig cfg = parse_config_text(text);
  CHECK(cfg.certify);
  CHECK(cfg.threads == 2);
  REQUIRE(cfg.betti.has_value());
  CHECK(cfg.betti->p_max == 3);
  MonomialSystem sys = cfg.system.build();
  CHECK(sys.h0_of_l() == 4);
  CHECK(cfg.mode().kind == FieldMode::Kind::certified);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config_text(R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "mystery": true
  })"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3, "extra": 1}
  })"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({
    "schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "betti": {"p_max": 1, "q_min": 0, "q_max": 1, "oops": 2}
  })"),
                  config_error);
}

TEST_CASE("schema version and structure are enforced") {
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version": 2,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"system":
    {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text("not json at all"), config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version": 1,
    "system": {"kind": "weird"}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "field": {"prime": 32004}})"),
                  config_error);
  CHECK_THROWS_AS(parse_config_text(R"({"schema_version": 1,
    "system": {"kind": "projective", "n": 1, "b_degrees": [0], "l_degree": 3},
    "threads": 0})"),
                  config_error);
}

TEST_CASE("product systems assemble the box lattice") {
  std::string text = R"({
    "schema_version": 1,
    "system": {"kind": "product",
               "factors": [{"n": 1, "l_degree": 1}, {"n": 1, "l_degree": 1}],
               "b_multidegrees": [[0, 0]]}
  })";
  RunConfig cfg = parse_config_text(text);
  MonomialSystem sys = cfg.system.build();
  CHECK(sys.variety_dim() == 2);
  CHECK(sys.h0_of_l() == 4);  // O(1,1) on P^1 x P^1
  CHECK(sys.h0_total(1) == 4);
  CHECK(sys.h0_total(2) == 9);
}

TEST_CASE("polytope systems parse from explicit points") {
  std::string text = R"({
    "schema_version": 1,
    "system": {"kind": "polytope", "variety_dim": 2,
               "l_points": [[0,0],[1,0],[0,1]],
               "b_summands": [[[0,0]]]}
  })";
  MonomialSystem sys = parse_config_text(text).system.build();
  CHECK(sys.h0_of_l() == 3);
  CHECK(sys.h0(0, 2) == 6);
}
