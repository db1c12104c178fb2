#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "mpineq/degree.hpp"
#include "mpineq/error.hpp"
#include "mpineq/fuzz.hpp"

using namespace mpineq;

TEST_SUITE("degree") {
  TEST_CASE("D1 profile") {
    const DegreeProfile p = characterize(fixtures::d1());
    CHECK(p.c == 4.0);
    CHECK(p.s == 3.0);
    CHECK(p.delta == std::vector<double>{5, 7});
    CHECK(p.delta_bar == 6.0);
    CHECK(p.delta_bar_identity == 6.0);
    CHECK(p.mu_total == 2.0);
    REQUIRE(p.rho.has_value());
    CHECK((*p.rho)[0] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
    CHECK((*p.rho)[1] == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK_FALSE(p.is_constant());
  }

  TEST_CASE("T1 profile") {
    const DegreeProfile p = characterize(fixtures::t1());
    CHECK(p.c == 2.0);
    CHECK(p.s == 2.0);
    CHECK(p.delta == std::vector<double>{2, 2});
    CHECK(p.delta_bar == 2.0);
    CHECK((*p.rho)[0] == 0.5);
    CHECK(p.is_constant());
  }

  TEST_CASE("non-constant columns") {
    const Instance bad = build_discrete({1, 1}, {1, 1}, DenseMatrix::from_rows({{3, 1}, {1, 1}}), {1, 2});
    try {
      characterize(bad);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::non_constant_columns);
    }
    CHECK_NOTHROW(characterize(bad, 0.6));
  }

  TEST_CASE("rho is absent for negative delta") {
    const Instance neg = build_discrete({1, 1}, {1, 1}, DenseMatrix::from_rows({{3, -1}, {-1, 3}}), {1, 2});
    const DegreeProfile p = characterize(neg);
    CHECK(p.delta[0] == 1.0);
    CHECK(p.delta[1] == 5.0);
    const Instance neg2 = build_discrete({1, 1}, {1, 1}, DenseMatrix::from_rows({{3, -1}, {-1, 3}}), {1, 4});
    CHECK_FALSE(characterize(neg2).rho.has_value());
  }

  TEST_CASE("hypotheses") {
    const HypothesisReport ok = check_hypotheses(fixtures::d1(), PhiSpec::log());
    CHECK(ok.all_passed());
    CHECK(ok.first_failure().empty());

    const PhiSpec narrow = PhiSpec::log().with_domain(Interval{6.5, std::numeric_limits<double>::infinity(), true, false});
    const HypothesisReport v = check_hypotheses(fixtures::d1(), narrow);
    CHECK_FALSE(v.all_passed());
    CHECK_FALSE(v.entries[4].passed);
    CHECK(v.entries[0].passed);
    CHECK(v.entries[3].passed);
    CHECK(v.first_failure().rfind("(v)", 0) == 0);

    const HypothesisReport erased = check_hypotheses(restrict_edges(fixtures::d1(), {true, true}), PhiSpec::log());
    CHECK_FALSE(erased.entries[1].passed);
    CHECK(erased.entries[1].quantity == 0.0);
  }

  TEST_CASE("mean identity and rho normalization on the fuzz corpus") {
    std::size_t checked = 0;
    for (std::size_t i = 0; i < 2000; ++i) {
      const Source src = random_source(5, i);
      const DegreeProfile p = characterize(src.instance);
      const double def = std::inner_product(p.delta.begin(), p.delta.end(), p.v_masses.begin(), 0.0) / p.mu_total;
      CHECK(std::abs(p.delta_bar - def) <= 1e-12 * std::abs(def));
      CHECK(std::abs(p.delta_bar - p.delta_bar_identity) <= 1e-10 * std::abs(p.delta_bar));
      if (p.rho) {
        CHECK(std::abs(std::accumulate(p.rho->begin(), p.rho->end(), 0.0) - 1.0) <= 1e-12);
        ++checked;
      }
    }
    CHECK(checked > 1000);
  }

  TEST_CASE("scaling the weights leaves rho unchanged") {
    const Instance base = random_instance(6, 5, 2.0, 19);
    std::vector<double> w(base.weights().begin(), base.weights().end());
    for (double& x : w) x *= 3.7;
    const Instance scaled(base.v_space(), base.e_space(), base.kernel(), w);
    const DegreeProfile a = characterize(base);
    const DegreeProfile b = characterize(scaled);
    for (std::size_t v = 0; v < a.delta.size(); ++v) {
      CHECK(std::abs((*a.rho)[v] - (*b.rho)[v]) <= 1e-12);
      CHECK(b.delta[v] == doctest::Approx(3.7 * a.delta[v]).epsilon(1e-14));
    }
    CHECK(b.s == doctest::Approx(3.7 * a.s).epsilon(1e-14));
  }
}
