#include <doctest.h>

#include "shrinkreg/estimators.hpp"

#include "../support/errors.hpp"
#include "../support/generators.hpp"

#include <cmath>

using namespace shrinkreg;
using testing::code_of;
using Eigen::VectorXd;

namespace {

FitResult with_beta(VectorXd beta, EstimatorKind kind) {
  FitResult f;
  f.beta = std::move(beta);
  f.kind = kind;
  f.s2 = 1.0;
  return f;
}

/// beta_R = 0, beta_UR = 1 componentwise.
ShrinkageContext unit_context(double psi, Eigen::Index p2, Eigen::Index p = 5) {
  return ShrinkageContext::make(with_beta(VectorXd::Ones(p), EstimatorKind::Unrestricted),
                                with_beta(VectorXd::Zero(p), EstimatorKind::Restricted), psi, p2);
}

ShrinkageContext random_context(Engine& e) {
  const int p = gen::integer(e, 3, 9);
  const int p2 = gen::integer(e, 3, p);
  const double psi = gen::uniform(e, 0.0, 3.0 * p2);
  return ShrinkageContext::make(with_beta(gen::normal_vector(e, p), EstimatorKind::Unrestricted),
                                with_beta(gen::normal_vector(e, p), EstimatorKind::Restricted), psi, p2);
}

}  // namespace

TEST_CASE("context records kappa") {
  CHECK(unit_context(1.0, 6).kappa == 4.0);
  CHECK(unit_context(1.0, 3).kappa == 1.0);
}

TEST_CASE("stein estimate: worked values") {
  // kappa = 2 when p2 = 4.
  const auto half = stein_estimate(unit_context(4.0, 4));
  CHECK(half.kind == EstimatorKind::Stein);
  for (Eigen::Index i = 0; i < half.beta.size(); ++i) CHECK(half.beta(i) == doctest::Approx(0.5));

  const auto at_kappa = stein_estimate(unit_context(2.0, 4));
  CHECK(at_kappa.beta == VectorXd::Zero(5));

  const auto far = stein_estimate(unit_context(1e12, 4));
  CHECK((far.beta - VectorXd::Ones(5)).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("stein estimate at psi = 0 falls back to the restricted fit") {
  const auto s = stein_estimate(unit_context(0.0, 5));
  CHECK(s.degenerate);
  CHECK(s.beta == VectorXd::Zero(5));
}

TEST_CASE("stein family needs three restrictions") {
  CHECK(code_of([] { stein_estimate(unit_context(3.0, 2)); }) == ErrorCode::TooFewRestrictions);
  CHECK(code_of([] { positive_stein_estimate(unit_context(3.0, 2)); }) ==
        ErrorCode::TooFewRestrictions);
}

TEST_CASE("positive-part stein: worked values") {
  CHECK(positive_stein_estimate(unit_context(1.0, 4)).beta == VectorXd::Zero(5));
  CHECK(positive_stein_estimate(unit_context(2.0, 4)).beta == VectorXd::Zero(5));
  const auto half = positive_stein_estimate(unit_context(4.0, 4));
  for (Eigen::Index i = 0; i < half.beta.size(); ++i) CHECK(half.beta(i) == doctest::Approx(0.5));
  CHECK(half.kind == EstimatorKind::PositiveStein);
}

TEST_CASE("pretest: chi-square(2) critical value") {
  const auto rule = PretestRule::make(2, 0.05);
  CHECK(rule.critical == doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-10));
  CHECK(pretest_estimate(unit_context(5.0, 2), 0.05).beta == VectorXd::Zero(5));
  CHECK(pretest_estimate(unit_context(7.0, 2), 0.05).beta == VectorXd::Ones(5));
  const auto pt = pretest_estimate(unit_context(7.0, 2), 0.05);
  CHECK(pt.kind == EstimatorKind::Pretest);
  REQUIRE(pt.alpha.has_value());
  CHECK(*pt.alpha == 0.05);
}

TEST_CASE("pretest: limits and ties") {
  CHECK(pretest_estimate(unit_context(0.0, 3), 0.5).beta == VectorXd::Zero(5));
  CHECK(pretest_estimate(unit_context(1e-6, 3), 1.0 - 1e-12).beta == VectorXd::Ones(5));
  // A tie keeps the unrestricted fit.
  PretestRule rule{0.05, 4.0};
  CHECK(pretest_estimate(unit_context(4.0, 3), rule).beta == VectorXd::Ones(5));
  CHECK(code_of([] { pretest_estimate(unit_context(1.0, 3), 0.0); }) == ErrorCode::InvalidLevel);
  CHECK(code_of([] { pretest_estimate(unit_context(1.0, 3), 1.0); }) == ErrorCode::InvalidLevel);
}

TEST_CASE("positive-part stein lies on the segment between R and UR") {
  Engine e = make_engine(31, {});
  for (int trial = 0; trial < 200; ++trial) {
    const auto ctx = random_context(e);
    const auto sp = positive_stein_estimate(ctx);
    const VectorXd& r = ctx.restricted.beta;
    const VectorXd& u = ctx.unrestricted.beta;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double lo = std::min(r(i), u(i)), hi = std::max(r(i), u(i));
      CHECK(sp.beta(i) >= lo - 1e-14);
      CHECK(sp.beta(i) <= hi + 1e-14);
      const double moved = sp.beta(i) - r(i);
      CHECK((moved == 0.0 || std::signbit(moved) == std::signbit(u(i) - r(i))));
    }
  }
}

TEST_CASE("pretest returns one of its inputs bit for bit") {
  Engine e = make_engine(32, {});
  for (int trial = 0; trial < 200; ++trial) {
    const auto ctx = random_context(e);
    const auto pt = pretest_estimate(ctx, gen::uniform(e, 0.01, 0.5));
    CHECK((pt.beta == ctx.restricted.beta || pt.beta == ctx.unrestricted.beta));
  }
}

TEST_CASE("positive-part stein equals stein above kappa") {
  Engine e = make_engine(33, {});
  for (int trial = 0; trial < 200; ++trial) {
    const auto ctx = random_context(e);
    const auto s = stein_estimate(ctx);
    const auto sp = positive_stein_estimate(ctx);
    if (ctx.psi > ctx.kappa) {
      CHECK(s.beta == sp.beta);
    } else if (ctx.psi > 0.0 && ctx.psi < ctx.kappa) {
      CHECK(s.beta != sp.beta);
      CHECK(sp.beta == ctx.restricted.beta);
    }
  }
}

TEST_CASE("every rule tends to the unrestricted fit as psi grows") {
  Engine e = make_engine(34, {});
  for (int trial = 0; trial < 50; ++trial) {
    auto ctx = random_context(e);
    ctx.psi = 1e12;
    const PretestRule rule = PretestRule::make(ctx.p2, 0.05);
    for (auto kind : {EstimatorKind::Stein, EstimatorKind::PositiveStein, EstimatorKind::Pretest,
                      EstimatorKind::Unrestricted}) {
      const auto fit = estimate(kind, ctx, rule);
      CHECK((fit.beta - ctx.unrestricted.beta).lpNorm<Eigen::Infinity>() <=
            1e-6 * (1.0 + ctx.unrestricted.beta.lpNorm<Eigen::Infinity>()));
    }
  }
}

TEST_CASE("fit_estimator matches the two-step route") {
  Engine e = make_engine(35, {});
  const auto d = gen::regression(e, 40, 7);
  const auto r = LinearRestriction::nuisance_subset(7, 4);
  const auto pair = fit_pair(d, r);
  const auto ctx = ShrinkageContext::from_pair(pair);
  const auto rule = PretestRule::make(4, 0.1);
  for (auto kind : {EstimatorKind::Unrestricted, EstimatorKind::Restricted, EstimatorKind::Stein,
                    EstimatorKind::PositiveStein, EstimatorKind::Pretest}) {
    const auto direct = fit_estimator(kind, d.X, d.y, &r, rule);
    CHECK(direct.beta.isApprox(estimate(kind, ctx, rule).beta, 1e-14));
  }
  CHECK(code_of([&] { fit_estimator(EstimatorKind::Restricted, d.X, d.y, nullptr, rule); }) ==
        ErrorCode::InvalidConfig);
  CHECK_NOTHROW(fit_estimator(EstimatorKind::Unrestricted, d.X, d.y, nullptr, rule));
}
