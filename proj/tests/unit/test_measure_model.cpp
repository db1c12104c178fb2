#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fixtures.hpp"
#include "mpineq/degree.hpp"
#include "mpineq/error.hpp"
#include "mpineq/kernels.hpp"
#include "mpineq/measure_model.hpp"

using namespace mpineq;

TEST_SUITE("measure_model") {
  TEST_CASE("build_discrete validates shape and entries") {
    const Instance d = fixtures::d1();
    CHECK(d.v_count() == 2);
    CHECK(d.e_count() == 2);
    CHECK(d.kernel()(0, 0) == 3.0);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto kind_of = [](auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::internal;
    };
    CHECK(kind_of([&] { build_discrete({1, 1}, {1, 1}, DenseMatrix::from_rows({{3, nan}, {1, 3}}), {1, 2}); }) ==
          ErrorKind::non_finite);
    CHECK(kind_of([] { build_discrete({1, 0}, {1, 1}, DenseMatrix(2, 2, 1.0), {1, 2}); }) ==
          ErrorKind::non_positive_mass);
    CHECK(kind_of([] { build_discrete({1, 1}, {1, 1}, DenseMatrix(2, 3, 1.0), {1, 2}); }) ==
          ErrorKind::dimension_mismatch);
    CHECK(kind_of([] { build_discrete({1, 1}, {1, 1}, DenseMatrix(2, 2, 1.0), {1}); }) ==
          ErrorKind::dimension_mismatch);
    CHECK(kind_of([] { DenseMatrix::from_rows({{1, 2}, {3}}); }) == ErrorKind::dimension_mismatch);
  }

  TEST_CASE("from_sequences with the diagonal kernel has unit columns") {
    const SequenceModel m = SequenceModel::from_u({1, 1}, {1, 2});
    CHECK(m.b()[0] == 1.0);
    CHECK(m.w()[1] == 2.0);
    CHECK(m.u()[1] == 2.0);
    const Instance inst = from_sequences(m, diagonal_kernel(m));
    const DegreeProfile prof = characterize(inst);
    CHECK(prof.c == 1.0);
    CHECK(prof.s == 3.0);
    CHECK(prof.delta[0] == 1.0);
    CHECK(prof.delta[1] == 2.0);

    CHECK_THROWS_AS(SequenceModel({1, -1}, {1, 1}, {1, 1}), Error);
  }

  TEST_CASE("geometric truncation reports a small tail") {
    const SequenceModel m = SequenceModel::generate(
        20, [](std::size_t i) { return std::pow(2.0, -static_cast<double>(i)); }, [](std::size_t) { return 1.0; },
        [](std::size_t i) { return std::pow(3.0, -static_cast<double>(i)); });
    CHECK(m.truncation_length() == 20);
    REQUIRE(m.tail_mass_a().has_value());
    double total = 0.0;
    for (double a : m.a()) total += a;
    // sum_{i>=20} 2^-i over 2, from the oracle script
    CHECK(*m.tail_mass_a() / (total + *m.tail_mass_a()) == doctest::Approx(9.5367431640625e-7).epsilon(1e-9));
    CHECK(*m.tail_mass_a() / total < 2e-6);
  }

  TEST_CASE("single-term truncation") {
    const SequenceModel m = SequenceModel::from_u({0.5}, {2.0});
    const Instance inst = from_sequences(m, diagonal_kernel(m));
    CHECK(inst.v_count() == 1);
    CHECK(characterize(inst).is_constant());
  }

  TEST_CASE("periodic convolution kernel has unit columns") {
    const QuadratureScheme trap{QuadratureRule::trapezoid_periodic, 128, 0.0, 1.0};
    const Instance inst = from_interval(
        [](double v, double e) { return 1.0 + std::sin(2.0 * std::numbers::pi * (v - e)); },
        [](double e) { return e; }, trap, trap);
    for (double col : kernels::column_mass_sums(inst.kernel(), inst.v_masses())) {
      CHECK(std::abs(col - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("constant kernel on the square gives constant delta") {
    const QuadratureScheme gl{QuadratureRule::gauss_legendre, 12, 0.0, 1.0};
    const Instance inst = from_interval([](double, double) { return 1.0; }, [](double) { return 1.0; }, gl, gl);
    const DegreeProfile prof = characterize(inst);
    CHECK(prof.is_constant(1e-12));
    CHECK(prof.c == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("column sums of the midpoint rule decrease over doublings") {
    // Not periodic in v, so the midpoint error is a genuine O(h^2) term.
    auto kernel = [](double v, double e) { return 1.0 + std::exp(v) * (1.0 + e) - (std::exp(1.0) - 1.0) * (1.0 + e); };
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t n : {4, 8, 16, 32, 64, 128}) {
      const QuadratureScheme mid{QuadratureRule::midpoint, n, 0.0, 1.0};
      const Instance inst = from_interval(kernel, [](double) { return 1.0; }, mid, mid);
      double dev = 0.0;
      for (double col : kernels::column_mass_sums(inst.kernel(), inst.v_masses())) dev = std::max(dev, std::abs(col - 1.0));
      CHECK(dev < previous);
      previous = dev;
    }
  }

  TEST_CASE("from_interval rejects non-finite evaluations") {
    const QuadratureScheme gl{QuadratureRule::gauss_legendre, 4, 0.0, 1.0};
    CHECK_THROWS_AS(from_interval([](double v, double) { return 1.0 / (v - v); }, [](double) { return 1.0; }, gl, gl),
                    Error);
  }

  TEST_CASE("restrict_edges") {
    const Instance d = fixtures::d1();
    const Instance r = restrict_edges(d, {false, true});
    CHECK(r.weights()[0] == 1.0);
    CHECK(r.weights()[1] == 0.0);
    CHECK(r.kernel() == d.kernel());
    CHECK(r.e_masses()[1] == 1.0);

    CHECK(restrict_edges(d, {false, false}) == d);

    const Instance both = restrict_edges(restrict_edges(d, {true, false}), {false, true});
    CHECK(both.weights()[0] == 0.0);
    CHECK(both.weights()[1] == 0.0);

    const Instance all = restrict_edges(d, {true, true});
    try {
      characterize(all);
      FAIL("expected zero weight mass");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::zero_weight_mass);
    }
    CHECK_THROWS_AS(restrict_edges(d, {true}), Error);
  }

  TEST_CASE("random_instance normalizes columns and is deterministic") {
    const Instance a = random_instance(5, 5, 3.0, 7);
    for (double col : kernels::serial::column_mass_sums(a.kernel(), a.v_masses())) {
      CHECK(std::abs(col - 3.0) <= 1e-12);
    }
    CHECK(a == random_instance(5, 5, 3.0, 7));
    CHECK_FALSE(a == random_instance(5, 5, 3.0, 8));
    for (double w : a.weights()) {
      CHECK(w >= 0.5);
      CHECK(w < 2.0);
    }

    const Instance b = random_weighted_instance(6, 4, 2.5, 3, {0.5, 2.0}, {0.1, 3.0}, 0.4);
    for (double col : kernels::serial::column_mass_sums(b.kernel(), b.v_masses())) {
      CHECK(std::abs(col - 2.5) <= 1e-12 * 2.5);
    }
    CHECK(b == random_weighted_instance(6, 4, 2.5, 3, {0.5, 2.0}, {0.1, 3.0}, 0.4));
  }

  TEST_CASE("single v-atom makes delta constant") {
    const Instance one = random_instance(1, 4, 2.0, 11);
    CHECK(characterize(one).is_constant(0.0));
  }
}
