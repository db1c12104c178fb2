#include <doctest.h>

#include "fixtures.hpp"
#include "mpineq/degree.hpp"
#include "mpineq/fuzz.hpp"
#include "mpineq/inequalities.hpp"

using namespace mpineq;

TEST_SUITE("fuzz") {
  TEST_CASE("random sources cycle through every constructor") {
    CHECK(random_source(1, 0).kind == SourceKind::matrix);
    CHECK(random_source(1, 1).kind == SourceKind::hypergraph);
    CHECK(random_source(1, 2).kind == SourceKind::sequence);
    CHECK(random_source(1, 3).kind == SourceKind::interval);
    CHECK(random_source(1, 6).instance == random_source(1, 6).instance);
    CHECK_FALSE(random_source(1, 4).instance == random_source(2, 4).instance);
  }

  TEST_CASE("a single instance gives one block") {
    SuiteConfig cfg;
    const FuzzReport rep = fuzz(cfg, 1);
    CHECK(rep.instances_tried == 1);
    CHECK(rep.blocks.size() == 1);
    CHECK(rep.blocks[0].error.empty());
    CHECK(rep.asserted_violations() == 0);
  }

  TEST_CASE("asserted checks produce no violations") {
    SuiteConfig cfg;
    cfg.phi_list = {"log", "id", "pow:2", "pow:-0.5"};
    cfg.trials = 10;
    const FuzzReport rep = fuzz(cfg, 400);
    CHECK(rep.asserted_violations() == 0);
    CHECK(rep.identity_failures == 0);
    for (const auto& b : rep.blocks) CHECK_MESSAGE(b.error.empty(), b.instance_id, ": ", b.error);
  }

  TEST_CASE("paper-literal violations shrink to tiny instances") {
    SuiteConfig cfg;
    cfg.checks = {"power-mean:paper-literal"};
    const FuzzReport rep = fuzz(cfg, 60);
    CHECK(rep.asserted_violations() == 0);
    REQUIRE(rep.informational_violations() > 0);
    for (const auto& v : rep.violations) {
      CHECK(v.shrunk.v_count() <= 2);
      CHECK(v.shrunk.e_count() <= 2);
      // the stored instance replays the violation
      const Instance& inst = v.shrunk;
      const DegreeProfile p = characterize(inst);
      bool replayed = false;
      for (const auto& r : power_mean_chain(inst, p, cfg.chain_exponents, PowerMeanVariant::paper_literal)) {
        replayed = replayed || (r.check_name == v.result.check_name && r.violated());
      }
      CHECK(replayed);
    }
  }

  TEST_CASE("shrink keeps the predicate and drops atoms") {
    const Instance big = random_instance(6, 5, 2.0, 3);
    // predicate: at least two v-atoms and the first column integral is 2
    auto pred = [](const Instance& inst) { return inst.v_count() >= 2; };
    const Instance small = shrink(big, pred);
    CHECK(small.v_count() == 2);
    CHECK(small.e_count() == 1);
    CHECK(characterize(small).c == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("reports are identical across runs") {
    SuiteConfig cfg;
    cfg.trials = 5;
    const FuzzReport a = fuzz(cfg, 80);
    const FuzzReport b = fuzz(cfg, 80);
    CHECK(a.to_json().dump() == b.to_json().dump());
    CHECK(a.to_csv() == b.to_csv());
  }
}
