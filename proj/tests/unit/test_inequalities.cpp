#include <doctest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "mpineq/error.hpp"
#include "mpineq/fuzz.hpp"
#include "mpineq/inequalities.hpp"

using namespace mpineq;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::internal;
}

constexpr double kTight = 1e-12;

}  // namespace

TEST_SUITE("inequalities") {
  TEST_CASE("main inequality on D1") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);

    const CheckResult id = main_inequality(d, p, PhiSpec::identity());
    CHECK(std::abs(id.lhs - 74.0 / 3.0) <= kTight);
    CHECK(id.rhs == 24.0);
    CHECK(std::abs(id.gap - 2.0 / 3.0) <= kTight);
    CHECK(id.status == Status::holds);
    CHECK(id.identity_ok);
    CHECK(std::abs(*id.lhs_identity - id.lhs) <= kTight);
    CHECK_FALSE(*id.delta_constant);

    const CheckResult lg = main_inequality(d, p, PhiSpec::log());
    CHECK(std::abs(lg.lhs - 7.222853535185898) <= kTight);
    CHECK(std::abs(lg.rhs - 7.167037876912220) <= kTight);
    CHECK(std::abs(lg.gap - 0.055815658273678) <= kTight);
    CHECK(lg.status == Status::holds);
  }

  TEST_CASE("main inequality on T1 is an equality") {
    const Instance t = fixtures::t1();
    const CheckResult r = main_inequality(t, characterize(t), PhiSpec::log());
    CHECK(r.status == Status::equality);
    CHECK(r.equality_flag);
    CHECK(*r.delta_constant);
    CHECK(r.gap == 0.0);
  }

  TEST_CASE("main inequality guards") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);
    CHECK(kind_of([&] { main_inequality(d, p, PhiSpec::power(-0.5)); }) == ErrorKind::shape);
    const PhiSpec narrow = PhiSpec::log().with_domain(Interval::closed(5.0, 6.0));
    CHECK(kind_of([&] { main_inequality(d, p, narrow); }) == ErrorKind::domain);
    // delta_bar = 6 sits on the boundary of [5, 6] ... once delta is inside
    const Instance flat = build_discrete({1, 1}, {1}, DenseMatrix::from_rows({{1}, {1}}), {6});
    const PhiSpec edge = PhiSpec::log().with_domain(Interval::closed(1.0, 6.0));
    CHECK(kind_of([&] { main_inequality(flat, characterize(flat), edge); }) == ErrorKind::boundary_mean);
  }

  TEST_CASE("stability") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);

    const StabilityParams sid = stability_params(p, PhiSpec::identity());
    CHECK(sid.alpha == 2.0);
    CHECK(std::abs(sid.variance_term - 2.0 / 3.0) <= kTight);
    const CheckResult rid = stability_check(d, p, PhiSpec::identity(), sid);
    CHECK(std::abs(rid.gap) <= kTight);
    CHECK(rid.equality_flag);

    const StabilityParams slog = stability_params(p, PhiSpec::log());
    CHECK(slog.alpha == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(std::abs(slog.variance_term - 1.0 / 21.0) <= kTight);
    const CheckResult rlog = stability_check(d, p, PhiSpec::log(), slog);
    CHECK(std::abs(rlog.gap - 0.008196610654631) <= kTight);
    CHECK(rlog.status == Status::holds);
    REQUIRE(rlog.bound.has_value());
    CHECK(std::abs(*rlog.bound - (rlog.rhs + 1.0 / 21.0)) <= kTight);

    const Instance t = fixtures::t1();
    const DegreeProfile pt = characterize(t);
    const CheckResult rt = stability_check(t, pt, PhiSpec::power(2.0), stability_params(pt, PhiSpec::power(2.0)));
    CHECK(rt.equality_flag);

    CHECK(kind_of([&] { stability_params(p, PhiSpec::log(), std::pair{5.5, 7.0}); }) == ErrorKind::invalid_argument);
    CHECK(kind_of([&] { stability_params(p, PhiSpec::power(-0.5)); }) == ErrorKind::shape);
    // a wider range gives a smaller alpha and still holds
    const StabilityParams wide = stability_params(p, PhiSpec::log(), std::pair{1.0, 70.0});
    CHECK(wide.alpha == doctest::Approx(1.0 / 70.0));
    CHECK(stability_check(d, p, PhiSpec::log(), wide).status == Status::holds);
  }

  TEST_CASE("concave reversal") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);
    const CheckResult r = concave_reversal(d, p, PhiSpec::power(-0.5));
    CHECK(std::abs(r.lhs - 1.627273096188127) <= kTight);
    CHECK(std::abs(r.rhs - 1.632993161855452) <= kTight);
    CHECK(r.relation == Relation::at_most);
    CHECK(r.status == Status::holds);

    const Instance t = fixtures::t1();
    CHECK(concave_reversal(t, characterize(t), PhiSpec::power(-0.5)).status == Status::equality);

    try {
      concave_reversal(d, p, PhiSpec::identity());
      FAIL("expected shape error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::shape);
      CHECK(std::string(e.what()).find("shape not concave") != std::string::npos);
    }
  }

  TEST_CASE("variational scan") {
    const DegreeProfile p = characterize(fixtures::d1());
    const CheckResult r = variational_scan(p, PhiSpec::identity(), 1000, 9);
    CHECK(std::abs(r.lhs - 74.0 / 3.0) <= kTight);
    CHECK(std::abs(r.rhs - 24.0) <= kTight);
    REQUIRE(r.bound.has_value());
    CHECK(*r.bound >= 24.0 - 1e-9);
    CHECK(*r.bound > 24.0);
    CHECK(r.status == Status::holds);

    // same seed, same answer
    CHECK(variational_scan(p, PhiSpec::identity(), 1000, 9).bound == r.bound);

    const DegreeProfile flat = characterize(fixtures::t1());
    const CheckResult eq = variational_scan(flat, PhiSpec::log(), 50, 1);
    CHECK(eq.equality_flag);
    CHECK(*eq.bound > eq.rhs);

    const PhiSpec tight = PhiSpec::log().with_domain(Interval::closed(5.0, 7.0));
    CHECK_NOTHROW(variational_scan(p, tight, 200, 2));
    const PhiSpec pinned = PhiSpec::log().with_domain(Interval::closed(2.0 - 1e-13, 2.0 + 1e-13));
    CHECK(kind_of([&] { variational_scan(flat, pinned, 10, 1); }) == ErrorKind::domain);
    CHECK(kind_of([&] { variational_scan(p, PhiSpec::power(-0.5), 10, 1); }) == ErrorKind::shape);
  }

  TEST_CASE("power-mean chain") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);
    const std::vector<double> ex{1.0, 2.0};
    const auto norm = power_mean_chain(d, p, ex, PowerMeanVariant::normalized);
    REQUIRE(norm.size() == 1);
    CHECK(norm[0].check_name == "power-mean[1->2]");
    CHECK(std::abs(norm[0].lhs - 6.244997998398398) <= kTight);
    CHECK(std::abs(norm[0].rhs - 6.166666666666667) <= kTight);
    CHECK(norm[0].status == Status::holds);
    CHECK(norm[0].asserted);

    const auto lit = power_mean_chain(d, p, ex, PowerMeanVariant::paper_literal);
    CHECK(std::abs(lit[0].lhs - 12.48999599679680) <= kTight);
    CHECK(std::abs(lit[0].rhs - 74.0 / 3.0) <= kTight);
    CHECK(lit[0].violated());
    CHECK_FALSE(lit[0].asserted);

    const Instance t = fixtures::t1();
    const DegreeProfile pt = characterize(t);
    const std::vector<double> chain{0.5, 1.0, 2.0, 3.0};
    for (const auto& r : power_mean_chain(t, pt, chain, PowerMeanVariant::paper_literal)) CHECK(r.violated());
    for (const auto& r : power_mean_chain(t, pt, chain, PowerMeanVariant::normalized)) CHECK(r.equality_flag);
    // T1 literal: B_r^{1/r} = 2^{1+1/r}
    const auto t_lit = power_mean_chain(t, pt, chain, PowerMeanVariant::paper_literal);
    CHECK(t_lit[1].lhs == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-14));

    const std::vector<double> descending{2.0, 1.0};
    CHECK(kind_of([&] { power_mean_chain(d, p, descending, PowerMeanVariant::normalized); }) ==
          ErrorKind::invalid_argument);
  }

  TEST_CASE("marginal power mean") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);
    const auto r = marginal_power_mean(d, p, 2.0);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0].lhs - 6.082762530298220) <= kTight);
    CHECK(r[0].rhs == 6.0);
    CHECK(std::abs(r[1].lhs - 74.0 / 3.0) <= kTight);
    CHECK(r[1].rhs == 24.0);

    const Instance t = fixtures::t1();
    const auto rt = marginal_power_mean(t, characterize(t), 3.0);
    CHECK(rt[0].equality_flag);
    CHECK(rt[0].lhs == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(rt[1].equality_flag);
    CHECK(kind_of([&] { marginal_power_mean(d, p, 0.5); }) == ErrorKind::invalid_argument);
  }

  TEST_CASE("entropy") {
    const Instance d = fixtures::d1();
    const CheckResult r = entropy_check(d, characterize(d));
    CHECK(std::abs(r.lhs - (-0.013953914568420)) <= kTight);
    CHECK(r.status == Status::holds);
    CHECK(r.identity_ok);
    const Instance t = fixtures::t1();
    CHECK(entropy_check(t, characterize(t)).status == Status::equality);

    const Instance neg = build_discrete({1, 1}, {1, 1}, DenseMatrix::from_rows({{3, -1}, {-1, 3}}), {1, 4});
    CHECK(kind_of([&] { entropy_check(neg, characterize(neg)); }) == ErrorKind::domain);
  }

  TEST_CASE("erasure") {
    const Instance d = fixtures::d1();
    const CheckResult r = erasure_check(d, {false, true}, PhiSpec::identity());
    CHECK(r.lhs == 10.0);
    CHECK(r.rhs == 8.0);
    CHECK(r.status == Status::holds);
    CHECK(r.note.find("c_kept=1") != std::string::npos);

    const Instance t = fixtures::t1();
    const CheckResult rt = erasure_check(t, {false, true}, PhiSpec::identity());
    CHECK(rt.lhs == 2.0);
    CHECK(rt.rhs == 2.0);
    CHECK(rt.equality_flag);

    CHECK(kind_of([&] { erasure_check(d, {true, true}, PhiSpec::identity()); }) == ErrorKind::zero_weight_mass);
  }

  TEST_CASE("geometric mean") {
    const Instance d = fixtures::d1();
    const DegreeProfile p = characterize(d);
    const CheckResult r = geometric_mean_check(d, p);
    CHECK(std::abs(r.lhs - 6.084310349101414) <= kTight);
    CHECK(r.rhs == 6.0);
    CHECK(r.status == Status::holds);

    const Instance t = fixtures::t1();
    const DegreeProfile pt = characterize(t);
    const CheckResult nt = geometric_mean_check(t, pt);
    CHECK(std::abs(nt.lhs - 2.0) <= kTight);
    CHECK(nt.equality_flag);
    // the 1/s normalization returns d^c = 4 for a constant profile d = 2, c = 2
    const CheckResult lt = geometric_mean_check(t, pt, {}, GeometricVariant::paper_literal);
    CHECK(std::abs(lt.lhs - 4.0) <= kTight);
    CHECK_FALSE(lt.asserted);
    CHECK_FALSE(lt.equality_flag);
  }

  TEST_CASE("sequence inequalities") {
    const auto [first, second] = sequence_inequalities(SequenceModel::from_u({1, 1}, {1, 2}), PhiSpec::log());
    CHECK(std::abs(first.lhs - 0.462098120373297) <= 1e-12);
    CHECK(std::abs(first.rhs - 0.405465108108164) <= 1e-12);
    CHECK(first.status == Status::holds);
    CHECK(first.identity_ok);
    CHECK(std::abs(second.lhs - 1.386294361119891) <= 1e-12);
    CHECK(std::abs(second.rhs - 1.216395324324493) <= 1e-12);
    CHECK(std::exp(second.lhs) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(std::exp(second.rhs) == doctest::Approx(3.375).epsilon(1e-14));

    const auto [e1, e2] = sequence_inequalities(SequenceModel::from_u({1, 3, 0.5}, {2, 6, 1}), PhiSpec::log());
    CHECK(std::abs(e1.gap) <= 1e-12);
    CHECK(std::abs(e2.gap) <= 1e-12);
    CHECK(e1.equality_flag);
    CHECK(e2.equality_flag);
  }

  TEST_CASE("key identity and soundness on the fuzz corpus") {
    const std::vector<PhiSpec> phis{PhiSpec::log(), PhiSpec::identity(), PhiSpec::power(1.0), PhiSpec::power(2.0)};
    std::size_t runs = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const Source src = random_source(77, i);
      const DegreeProfile p = characterize(src.instance);
      for (const PhiSpec& phi : phis) {
        try {
          const CheckResult r = main_inequality(src.instance, p, phi);
          CHECK(r.identity_ok);
          CHECK(r.gap >= -1e-9 * std::max(1.0, std::abs(r.rhs)));
          // equality exactly when delta is flat
          if (certify_shape(phi, p.min_delta(), p.max_delta()).shape == Shape::strictly_convex) {
            CHECK((r.gap <= 1e-9) == (p.spread() <= 1e-7 * std::abs(p.delta_bar)));
          }
          ++runs;
        } catch (const Error& e) {
          CHECK(e.kind() != ErrorKind::internal);
        }
      }
      if (p.min_delta() > 0.0) {
        const std::vector<double> chain{0.5, 1.0, 1.5, 2.0, 3.0};
        for (const auto& r : power_mean_chain(src.instance, p, chain, PowerMeanVariant::normalized)) {
          CHECK(r.gap >= -r.tol);
        }
        const CheckResult h = entropy_check(src.instance, p);
        CHECK(h.lhs <= 1e-12);
        if (p.spread() > 1e-6 * p.delta_bar) CHECK(h.lhs < -1e-12);
      }
    }
    CHECK(runs > 3000);
  }

  TEST_CASE("weight scaling shifts both sides of the log inequality equally") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
      const Instance base = random_instance(5, 4, 1.5, seed);
      std::vector<double> w(base.weights().begin(), base.weights().end());
      for (double& x : w) x *= 2.5;
      const Instance scaled(base.v_space(), base.e_space(), base.kernel(), w);
      const CheckResult a = main_inequality(base, characterize(base), PhiSpec::log());
      const CheckResult b = main_inequality(scaled, characterize(scaled), PhiSpec::log());
      CHECK(std::abs(a.gap - b.gap) <= 1e-10);
      const CheckResult ai = main_inequality(base, characterize(base), PhiSpec::identity());
      const CheckResult bi = main_inequality(scaled, characterize(scaled), PhiSpec::identity());
      CHECK((ai.gap > 0) == (bi.gap > 0));
    }
  }
}
