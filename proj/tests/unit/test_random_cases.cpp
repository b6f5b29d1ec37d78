#include "ctlcode/random_cases.hpp"
#include "ctlcode/toy_machine.hpp"
#include "doctest.h"

using namespace ctlcode;

TEST_SUITE("random_cases") {
  TEST_CASE("generation is determined by the seed") {
    auto a = random_rule_cases(5, 200);
    auto b = random_rule_cases(5, 200);
    auto c = random_rule_cases(6, 200);
    REQUIRE(a.size() == 200);
    bool differs = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k].code == b[k].code);
      CHECK(a[k].inputs == b[k].inputs);
      CHECK(a[k].extension == b[k].extension);
      differs = differs || a[k].code != c[k].code;
    }
    CHECK(differs);
  }

  TEST_CASE("case mix") {
    auto cases = random_rule_cases(1, 1000);
    std::size_t non_exec = 0;
    for (const auto& c : cases) {
      if (!decode(c.code)) ++non_exec;
      CHECK_FALSE(c.extension.empty());
    }
    CHECK(non_exec >= 30);
    CHECK(non_exec <= 250);
  }

  TEST_CASE("random programs respect their bounds") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 200; ++k) {
      CHECK(random_program(rng, 7).instructions.size() <= 7);
      auto in = random_inputs(rng, 2, 4);
      CHECK(in.size() <= 2);
      for (const auto& b : in) CHECK(b.size() <= 4);
    }
  }

  TEST_CASE("the toy machine satisfies the rules on a sweep") {
    auto sweep = rule_sweep(as_machine_structure(2000), random_rule_cases(11, 150), 4);
    CHECK(sweep.cases == 150);
    CHECK(sweep.totals.hard_failures() == 0);
    REQUIRE(sweep.totals.rules.size() == 5);
    for (const auto& r : sweep.totals.rules) CHECK(r.checked > 0);
  }
}
