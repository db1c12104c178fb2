#include <doctest.h>

#include <cmath>
#include <limits>

#include "mpineq/convexity.hpp"
#include "mpineq/error.hpp"
#include "mpineq/random.hpp"

using namespace mpineq;

TEST_SUITE("convexity") {
  TEST_CASE("parse") {
    CHECK(PhiSpec::parse("log").family() == PhiFamily::log);
    CHECK(PhiSpec::parse("id").family() == PhiFamily::identity);
    const PhiSpec p = PhiSpec::parse("pow:2");
    CHECK(p.family() == PhiFamily::power);
    CHECK(p.exponent() == 2.0);
    CHECK(p.f(3.0) == 27.0);
    CHECK(PhiSpec::parse("pow:-0.5").exponent() == -0.5);
    for (const char* bad : {"", "ln", "pow:", "pow:x", "pow:1.5x", "pow:inf", "pow:nan"}) {
      CHECK_THROWS_AS(PhiSpec::parse(bad), Error);
    }
  }

  TEST_CASE("natural domains") {
    CHECK_FALSE(PhiSpec::log().domain().contains(0.0));
    CHECK(PhiSpec::log().domain().contains(1e-300));
    CHECK(PhiSpec::power(2.0).domain().contains(-3.0));
    CHECK(PhiSpec::power(0.5).domain().contains(0.0));
    CHECK_FALSE(PhiSpec::power(0.5).domain().contains(-1e-12));
    CHECK_FALSE(PhiSpec::power(-1.0).domain().contains(0.0));
    CHECK_THROWS_AS(PhiSpec::log().phi(-1.0), Error);
    CHECK_THROWS_AS(PhiSpec::log().with_domain(Interval::closed(-1.0, 2.0)), Error);
    const PhiSpec narrowed = PhiSpec::log().with_domain(Interval::closed(6.5, 10.0));
    CHECK_FALSE(narrowed.domain().contains(5.0));
    CHECK_THROWS_AS(narrowed.phi(5.0), Error);
  }

  TEST_CASE("closed-form certification") {
    CHECK(certify_shape(PhiSpec::log(), 5.0, 7.0).shape == Shape::strictly_convex);
    CHECK(certify_shape(PhiSpec::power(-0.5), 5.0, 7.0).shape == Shape::strictly_concave);
    CHECK(certify_shape(PhiSpec::identity(), -3.0, 7.0).shape == Shape::strictly_convex);
    // f(t) = t^p with p = r + 1 >= 1 is convex on [0, inf)
    for (double r : {0.0, 0.5, 1.0, 2.0}) {
      CHECK(is_convex(certify_shape(PhiSpec::power(r), 0.0, 50.0).shape));
    }
    CHECK(certify_shape(PhiSpec::power(0.0), 1.0, 2.0).shape == Shape::convex);
    // f(t) = t^3 changes curvature at 0
    CHECK(certify_shape(PhiSpec::power(2.0), -1.0, 1.0).shape == Shape::unknown);
    const ShapeCertificate deg = certify_shape(PhiSpec::power(-0.5), 2.0, 2.0);
    CHECK(deg.degenerate);
    CHECK(deg.shape == Shape::convex);
  }

  TEST_CASE("alpha") {
    CHECK(estimate_alpha(PhiSpec::identity(), 5.0, 7.0) == 2.0);
    CHECK(estimate_alpha(PhiSpec::identity(), -100.0, 1e6) == 2.0);
    CHECK(estimate_alpha(PhiSpec::log(), 5.0, 7.0) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK_THROWS_AS(estimate_alpha(PhiSpec::power(-0.5), 5.0, 7.0), Error);
    CHECK(estimate_alpha(PhiSpec::power(0.0), 1.0, 3.0) == 0.0);
  }

  TEST_CASE("alpha never grows when the range grows") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
      const double m = rng.uniform(0.1, 10.0);
      const double M = m + rng.uniform(0.0, 10.0);
      const double lo = m * rng.uniform(0.2, 1.0);
      const double hi = M + rng.uniform(0.0, 5.0);
      for (const PhiSpec& phi : {PhiSpec::log(), PhiSpec::power(1.5), PhiSpec::power(0.5), PhiSpec::identity()}) {
        CHECK(estimate_alpha(phi, lo, hi) <= estimate_alpha(phi, m, M));
      }
    }
  }

  TEST_CASE("finite differences agree with the closed form on random intervals") {
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
      const double m = rng.uniform(0.1, 49.5);
      const double M = std::min(50.0, m + rng.uniform(0.5, 20.0));
      for (const PhiSpec& phi :
           {PhiSpec::log(), PhiSpec::identity(), PhiSpec::power(2.0), PhiSpec::power(-0.5), PhiSpec::power(-2.5)}) {
        const Shape exact = certify_shape(phi, m, M).shape;
        const Shape fd = certify_shape_fd(phi, m, M, 64).shape;
        CHECK_MESSAGE(is_convex(exact) == is_convex(fd), phi.label(), " on [", m, ", ", M, "]");
        CHECK_MESSAGE(is_concave(exact) == is_concave(fd), phi.label(), " on [", m, ", ", M, "]");
      }
    }
  }

  TEST_CASE("tabulated phi") {
    // phi(t) = t on a grid: f = t^2 sampled, interpolation is still convex
    const PhiSpec tab = PhiSpec::tabulated({0, 1, 2, 3, 4}, {0, 1, 2, 3, 4}, Shape::convex);
    CHECK(tab.phi(2.5) == 2.5);
    CHECK(is_convex(certify_shape(tab, 0.5, 3.5).shape));
    CHECK_FALSE(tab.f_second(1.0).has_value());

    const PhiSpec undeclared = PhiSpec::tabulated({0, 1, 2}, {0, 1, 2});
    CHECK(certify_shape(undeclared, 0.5, 1.5).shape == Shape::unknown);

    // declared convex but f = t * (-t) is concave
    const PhiSpec liar = PhiSpec::tabulated({0, 1, 2, 3}, {0, -1, -2, -3}, Shape::convex);
    CHECK_THROWS_AS(certify_shape(liar, 0.5, 2.5), Error);
  }

  TEST_CASE("interval helpers") {
    const Interval i = Interval::closed(1.0, 2.0);
    CHECK(i.contains(1.0));
    CHECK_FALSE(i.contains_interior(1.0));
    CHECK(i.contains_interior(1.5));
    CHECK(Interval::positive().contains(i));
    CHECK_FALSE(i.contains(Interval::positive()));
    const Interval j = Interval::positive().intersect(Interval::closed(-1.0, 3.0));
    CHECK(j.lo == 0.0);
    CHECK_FALSE(j.lo_closed);
    CHECK(j.hi == 3.0);
    CHECK(j.hi_closed);
  }
}
