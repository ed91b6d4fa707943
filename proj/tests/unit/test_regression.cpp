#include <doctest.h>

#include "shrinkreg/error.hpp"
#include "shrinkreg/regression.hpp"

#include "../support/errors.hpp"
#include "../support/generators.hpp"
#include "../support/oracles.hpp"

#include <cmath>

using namespace shrinkreg;
using testing::code_of;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

RegressionData make_data(MatrixXd X, VectorXd y) {
  RegressionData d;
  d.X = std::move(X);
  d.y = std::move(y);
  return d;
}

}  // namespace

TEST_CASE("ols_fit reproduces exact interpolation") {
  MatrixXd X(3, 2);
  X << 1, 0, 0, 1, 1, 1;
  const auto fit = ols_fit(make_data(X, VectorXd{{1, 2, 3}}));
  CHECK(fit.beta(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.beta(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(fit.s2 == 0.0);
  CHECK(fit.kind == EstimatorKind::Unrestricted);
  CHECK(fit.psi == 0.0);
}

TEST_CASE("ols_fit on a perfect line") {
  MatrixXd X(3, 2);
  X << 1, 1, 1, 2, 1, 3;
  const auto fit = ols_fit(make_data(X, VectorXd{{1, 2, 3}}));
  CHECK(std::abs(fit.beta(0)) < 1e-12);
  CHECK(fit.beta(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.s2 == 0.0);
}

TEST_CASE("ols_fit with a single intercept column") {
  const auto fit = ols_fit(make_data(MatrixXd::Ones(3, 1), VectorXd{{1, 2, 2}}));
  CHECK(fit.beta(0) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));
  CHECK(fit.s2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("ols_fit rejects bad shapes and rank") {
  CHECK(code_of([] { ols_fit(make_data(MatrixXd::Identity(2, 2), VectorXd::Ones(2))); }) ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of([] { ols_fit(make_data(MatrixXd::Ones(4, 1), VectorXd::Ones(3))); }) ==
        ErrorCode::DimensionMismatch);
  MatrixXd X(4, 2);
  X << 1, 2, 1, 2, 1, 2, 1, 2;
  CHECK(code_of([&] { ols_fit(make_data(X, VectorXd{{1, 2, 3, 4}})); }) ==
        ErrorCode::RankDeficient);
}

TEST_CASE("ols_fit agrees with the normal equations") {
  Engine e = make_engine(11, {});
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = gen::regression(e, gen::integer(e, 10, 40), gen::integer(e, 2, 6));
    const VectorXd ref = oracle::normal_equations(d.X, d.y);
    CHECK((ols_fit(d).beta - ref).norm() <= 1e-9 * (1.0 + ref.norm()));
  }
}

TEST_CASE("residuals are orthogonal to every column") {
  Engine e = make_engine(12, {});
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = gen::regression(e, gen::integer(e, 8, 50), gen::integer(e, 1, 7));
    const VectorXd r = d.y - d.X * ols_fit(d).beta;
    const VectorXd inner = d.X.transpose() * r;
    for (Eigen::Index j = 0; j < d.X.cols(); ++j) {
      CHECK(std::abs(inner(j)) <= 1e-8 * d.X.col(j).norm() * d.y.norm());
    }
  }
}

TEST_CASE("restricted_fit returns the unrestricted fit when the restriction holds") {
  Engine e = make_engine(13, {});
  const auto d = gen::regression(e, 30, 4);
  const VectorXd bur = ols_fit(d).beta;
  MatrixXd H(1, 4);
  H << 0, 1, -1, 0;
  const auto r = LinearRestriction::make(H, VectorXd::Constant(1, bur(1) - bur(2)));
  const auto fit = restricted_fit(d, r);
  CHECK((fit.beta - bur).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + bur.norm()));
  CHECK(wald_statistic(d, r) < 1e-20);
}

TEST_CASE("restricted_fit with H = I returns h") {
  Engine e = make_engine(14, {});
  const auto d = gen::regression(e, 25, 3);
  const VectorXd h{{0.5, -1.0, 2.0}};
  const auto fit = restricted_fit(d, LinearRestriction::make(MatrixXd::Identity(3, 3), h));
  CHECK((fit.beta - h).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(fit.kind == EstimatorKind::Restricted);
}

TEST_CASE("restricted_fit reports the unrestricted residual variance") {
  Engine e = make_engine(15, {});
  const auto d = gen::regression(e, 40, 5);
  const auto r = LinearRestriction::nuisance_subset(5, 2);
  CHECK(restricted_fit(d, r).s2 == doctest::Approx(ols_fit(d).s2).epsilon(1e-14));
}

TEST_CASE("restricted fit satisfies H beta = h") {
  Engine e = make_engine(16, {});
  for (int trial = 0; trial < 40; ++trial) {
    const int p = gen::integer(e, 2, 7);
    const int p2 = gen::integer(e, 1, p);
    const auto d = gen::regression(e, gen::integer(e, p + 3, 40), p);
    const auto r = LinearRestriction::make(gen::normal_matrix(e, p2, p), gen::normal_vector(e, p2));
    const auto fit = restricted_fit(d, r);
    CHECK((r.H * fit.beta - r.h).lpNorm<Eigen::Infinity>() <=
          1e-8 * (1.0 + r.h.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("restricted fit never beats the unrestricted residual sum of squares") {
  Engine e = make_engine(17, {});
  for (int trial = 0; trial < 60; ++trial) {
    const int p = gen::integer(e, 2, 7);
    const int p2 = gen::integer(e, 1, p);
    const auto d = gen::regression(e, gen::integer(e, p + 3, 40), p);
    const auto r = LinearRestriction::make(gen::normal_matrix(e, p2, p), gen::normal_vector(e, p2));
    const double rss_ur = residual_sum_of_squares(d, ols_fit(d).beta);
    const double rss_r = residual_sum_of_squares(d, restricted_fit(d, r).beta);
    CHECK(rss_r >= rss_ur * (1.0 - 1e-12));
  }
}

TEST_CASE("trailing-block restriction equals the sub-model fit") {
  Engine e = make_engine(18, {});
  for (int trial = 0; trial < 40; ++trial) {
    const int p = gen::integer(e, 2, 8);
    const int p2 = gen::integer(e, 1, p - 1);
    const auto d = gen::regression(e, gen::integer(e, p + 2, 30), p);
    const auto fit = restricted_fit(d, LinearRestriction::nuisance_subset(p, p2));
    RegressionData sub;
    sub.X = d.X.leftCols(p - p2);
    sub.y = d.y;
    const VectorXd ref = ols_fit(sub).beta;
    CHECK((fit.beta.head(p - p2) - ref).lpNorm<Eigen::Infinity>() <= 1e-10);
    CHECK(fit.beta.tail(p2).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("wald statistic is invariant to row scaling of the restriction") {
  Engine e = make_engine(19, {});
  for (int trial = 0; trial < 30; ++trial) {
    const int p = gen::integer(e, 2, 6);
    const int p2 = gen::integer(e, 1, p);
    const auto d = gen::regression(e, gen::integer(e, p + 4, 40), p);
    const auto r = LinearRestriction::make(gen::normal_matrix(e, p2, p), gen::normal_vector(e, p2));
    VectorXd scale(p2);
    for (int i = 0; i < p2; ++i) scale(i) = gen::uniform(e, 0.1, 10.0) * (i % 2 ? -1.0 : 1.0);
    const auto scaled = LinearRestriction::make(scale.asDiagonal() * r.H, scale.asDiagonal() * r.h);
    const double a = wald_statistic(d, r);
    const double b = wald_statistic(d, scaled);
    CHECK(std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("single-coefficient wald statistic is the squared t statistic") {
  Engine e = make_engine(20, {});
  RegressionData d;
  d.X = gen::normal_matrix(e, 25, 1);
  d.y = 0.3 * d.X.col(0) + gen::normal_vector(e, 25);
  const auto fit = ols_fit(d);
  const double se = std::sqrt(fit.s2 / d.X.col(0).squaredNorm());
  const double t = fit.beta(0) / se;
  const double psi = wald_statistic(d, LinearRestriction::make(MatrixXd::Ones(1, 1), VectorXd::Zero(1)));
  CHECK(psi == doctest::Approx(t * t).epsilon(1e-10));
}

TEST_CASE("wald statistic under the null averages p2") {
  Engine e = make_engine(21, {});
  const int n = 100, p = 5, p2 = 3;
  double sum = 0.0;
  const int reps = 2000;
  const auto r = LinearRestriction::nuisance_subset(p, p2);
  for (int rep = 0; rep < reps; ++rep) {
    RegressionData d;
    d.X = gen::normal_matrix(e, n, p);
    d.y = d.X.leftCols(2) * VectorXd{{1.0, -0.5}} + gen::normal_vector(e, n);
    sum += wald_statistic(d, r);
  }
  CHECK(std::abs(sum / reps - p2) <= 0.2);
}

TEST_CASE("zero residual variance poisons the wald statistic") {
  MatrixXd X(4, 2);
  X << 1, 0, 1, 1, 1, 2, 1, 3;
  const auto d = make_data(X, VectorXd{{1, 3, 5, 7}});  // y = 1 + 2x exactly
  const auto violated = LinearRestriction::make(MatrixXd{{0, 1}}, VectorXd::Zero(1));
  CHECK(code_of([&] { wald_statistic(d, violated); }) == ErrorCode::ZeroVariance);
  const auto holds = LinearRestriction::make(MatrixXd{{0, 1}}, VectorXd::Constant(1, 2.0));
  CHECK(wald_statistic(d, holds) == 0.0);
  CHECK(restricted_fit(d, violated).s2 == 0.0);
}

TEST_CASE("restrictions are validated") {
  CHECK(code_of([] { LinearRestriction::make(MatrixXd{{1, 0}, {2, 0}}, VectorXd::Zero(2)); }) ==
        ErrorCode::SingularRestriction);
  CHECK(code_of([] { LinearRestriction::make(MatrixXd::Ones(1, 2), VectorXd::Zero(2)); }) ==
        ErrorCode::DimensionMismatch);
  const auto r = LinearRestriction::nuisance_subset(5, 2);
  CHECK(r.H == MatrixXd{{0, 0, 0, 1, 0}, {0, 0, 0, 0, 1}});
  CHECK(r.h == VectorXd::Zero(2));
}

TEST_CASE("standardized flag is checked") {
  RegressionData d;
  d.X = MatrixXd{{1, 1}, {1, 2}, {1, 3}};
  d.y = VectorXd{{1, 2, 4}};
  d.has_intercept = true;
  d.standardized = true;
  CHECK(code_of([&] { d.validate(); }) == ErrorCode::InvalidConfig);
  d.X.col(1) << -1, 0, 1;
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("estimator tags round-trip") {
  for (auto k : {EstimatorKind::Unrestricted, EstimatorKind::Restricted, EstimatorKind::Stein,
                 EstimatorKind::PositiveStein, EstimatorKind::Pretest}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  CHECK(parse_kind("PS") == EstimatorKind::PositiveStein);
  CHECK(code_of([] { parse_kind("lasso"); }) == ErrorCode::UnknownKind);
}
