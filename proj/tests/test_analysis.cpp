#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lgt/analysis.hpp"

using namespace lgt;

TEST_CASE("finite-size fit recovers model-matched data exactly") {
  CHECK_THROWS_AS(fit_finite_size({{10, -0.3}, {20, -0.31}}), std::invalid_argument);

  // constant data -> c1 = 0
  const FitResult flat = fit_finite_size({{10, -0.2}, {14, -0.2}, {18, -0.2}});
  CHECK(flat.coefficients[0] == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(std::abs(flat.coefficients[1]) < 1e-12);

  std::vector<std::pair<double, double>> pts;
  for (double n : {8.0, 12.0, 16.0, 24.0}) pts.emplace_back(n, -0.318 + 3.0 / n);
  const FitResult fit = fit_finite_size(pts);
  CHECK(fit.coefficients[0] == doctest::Approx(-0.318).epsilon(1e-12));
  CHECK(fit.coefficients[1] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.residual_norm < 1e-12);
}

TEST_CASE("weighted fits respect per-point errors") {
  // Outlier with a huge error bar must not drag the fit.
  std::vector<std::pair<double, double>> pts{{8, -0.3 + 2.0 / 8},
                                             {12, -0.3 + 2.0 / 12},
                                             {16, -0.3 + 2.0 / 16},
                                             {20, 5.0}};
  std::vector<double> errs{1e-8, 1e-8, 1e-8, 1e6};
  const FitResult fit = fit_finite_size(pts, errs);
  CHECK(fit.coefficients[0] == doctest::Approx(-0.3).epsilon(1e-6));
  CHECK(fit.per_point_errors.size() == 4);
}

TEST_CASE("continuum fit recovers an exact quadratic in 1/sqrt(x)") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {50.0, 60.0, 75.0, 90.0, 100.0})
    pts.emplace_back(x, -1.0 / M_PI + 0.4 / std::sqrt(x) - 0.2 / x);
  const FitResult fit = fit_continuum(pts);
  CHECK(fit.coefficients[0] == doctest::Approx(-1.0 / M_PI).epsilon(1e-12));
  CHECK(fit.coefficients[1] == doctest::Approx(0.4).epsilon(1e-10));
  CHECK(fit.coefficients[2] == doctest::Approx(-0.2).epsilon(1e-9));
  CHECK(fit.warning.empty());

  // desk-scale ranges carry the limited-precision warning
  std::vector<std::pair<double, double>> small{{10, -0.2}, {20, -0.25}, {30, -0.27}};
  CHECK_FALSE(fit_continuum(small).warning.empty());
}

TEST_CASE("perturbative penalty closed form") {
  CHECK(perturbative_penalty(1e-3, 100, 100, 0.0, 1.0, 50) == 0.0);
  // direct evaluation of the printed formula
  const double v = perturbative_penalty(1e-3, 100.0, 100.0, 100.0, 1.0, 50);
  CHECK(v == doctest::Approx(312.5).epsilon(1e-12));

  // quadratic in lambda and x_final, linear in N (algebraic identities)
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(0.1, 2.0);
  for (int k = 0; k < 20; ++k) {
    const double lam = 1e-4 * uni(rng), xf = 50 * uni(rng), T = 100.0,
                 t = 50 * uni(rng), c = uni(rng);
    const int n = 10 + k;
    const double base = perturbative_penalty(lam, xf, T, t, c, n);
    CHECK(perturbative_penalty(2 * lam, xf, T, t, c, n) ==
          doctest::Approx(4 * base).epsilon(1e-12));
    CHECK(perturbative_penalty(lam, 2 * xf, T, t, c, n) ==
          doctest::Approx(4 * base).epsilon(1e-12));
    CHECK(perturbative_penalty(lam, xf, T, t, c, 2 * n) ==
          doctest::Approx(2 * base).epsilon(1e-12));
  }
}

TEST_CASE("generic double integral agrees with the cubic closed form") {
  for (double t : {10.0, 40.0, 77.0, 100.0}) {
    const double closed = perturbative_penalty(5e-4, 80.0, 100.0, t, 1.3, 20, 3);
    const double generic = perturbative_penalty_integral(5e-4, 80.0, 100.0, t, 1.3, 20, 3);
    CHECK(generic == doctest::Approx(closed).epsilon(1e-12));
  }
  // non-cubic ramps take the integral path; p = 1 solves to t^4 / (8 T^2)
  const double p1 = perturbative_penalty(1e-3, 100.0, 100.0, 50.0, 1.0, 10, 1);
  const double expected =
      2.0 * 1e-6 * 1e4 * std::pow(50.0, 4) / (8.0 * 1e4) * 10.0;
  CHECK(p1 == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("log-log slope of an exact power law") {
  std::vector<double> ts, ps;
  for (double t = 1.0; t <= 20.0; t += 0.5) {
    ts.push_back(t);
    ps.push_back(3e-7 * std::pow(t, 8.0));
  }
  CHECK(loglog_slope(ts, ps, 2.0, 15.0) == doctest::Approx(8.0).epsilon(1e-10));
  CHECK_THROWS_AS(loglog_slope(ts, ps, 100.0, 200.0), std::invalid_argument);
  ps[5] = -1.0;
  CHECK_THROWS_AS(loglog_slope(ts, ps, 1.0, 20.0), std::invalid_argument);
}

TEST_CASE("curve offsets reproduce the lambda-ratio predictions") {
  std::vector<double> ts, pa, pb, pc;
  for (double t = 1.0; t <= 10.0; t += 1.0) {
    ts.push_back(t);
    const double shape = std::pow(t, 8.0);
    pa.push_back(1e-8 * shape);   // lambda = 1e-4
    pb.push_back(25e-8 * shape);  // lambda = 5e-4
    pc.push_back(1e-6 * shape);   // lambda = 1e-3
  }
  const CurveOffset d1 = curve_offset(ts, pa, ts, pb, 5.0);
  CHECK(d1.delta == doctest::Approx(1.3979).epsilon(1e-3));
  CHECK_FALSE(d1.interpolated);
  const CurveOffset d2 = curve_offset(ts, pb, ts, pc, 5.0);
  CHECK(d2.delta == doctest::Approx(0.6021).epsilon(1e-3));

  const CurveOffset same = curve_offset(ts, pa, ts, pa, 5.0);
  CHECK(same.delta == 0.0);

  const CurveOffset off_grid = curve_offset(ts, pa, ts, pb, 5.25);
  CHECK(off_grid.interpolated);
}

TEST_CASE("penalty-constant fit recovers synthetic data") {
  const double lam = 5e-4, xf = 100.0, T = 100.0;
  const double c_true = 0.8;
  std::vector<double> ts, per_site;
  for (double t = 5.0; t <= 25.0; t += 1.0) {
    ts.push_back(t);
    per_site.push_back(perturbative_penalty(lam, xf, T, t, c_true, 1));
  }
  const double c = fit_penalty_constant(ts, per_site, lam, xf, T, 3, 5.0, 25.0);
  CHECK(c == doctest::Approx(c_true).epsilon(1e-12));
}
