#include "lgt/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "lgt/csv.hpp"

namespace lgt {

namespace {

std::string model_name(FitModel m) {
  switch (m) {
    case FitModel::LinearInvN: return "linear_inv_n";
    case FitModel::QuadraticInvSqrtX: return "quadratic_inv_sqrt_x";
    case FitModel::LogLogLine: return "loglog_line";
  }
  return "unknown";
}

FitResult run_fit(FitModel model, const Eigen::MatrixXd& a, const RVec& b,
                  const std::vector<double>& errors) {
  RVec w;
  if (!errors.empty()) {
    if (errors.size() != static_cast<std::size_t>(b.size()))
      throw std::invalid_argument("fit: error vector size mismatch");
    w = RVec(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      const double e = std::max(errors[i], 1e-300);
      w(i) = 1.0 / (e * e);
    }
  }
  const LeastSquaresFit ls = least_squares(a, b, w);
  FitResult out;
  out.model = model;
  out.coefficients.assign(ls.coefficients.data(),
                          ls.coefficients.data() + ls.coefficients.size());
  out.residual_norm = ls.residual_norm;
  out.per_point_errors = errors;
  return out;
}

// 16-point Gauss-Legendre nodes on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence.
const std::vector<std::pair<double, double>>& gauss_legendre_16() {
  static const std::vector<std::pair<double, double>> table = [] {
    const int n = 16;
    std::vector<std::pair<double, double>> nodes(n);
    for (int i = 0; i < n / 2; ++i) {
      double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        pp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / pp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double wgt = 2.0 / ((1.0 - x * x) * pp * pp);
      nodes[i] = {x, wgt};
      nodes[n - 1 - i] = {-x, wgt};
    }
    return nodes;
  }();
  return table;
}

}  // namespace

void write_fit_csv(const std::vector<FitResult>& fits, const std::string& path) {
  CsvWriter csv(path, {"model", "c0", "c1", "c2", "residual", "warning"});
  for (const FitResult& f : fits) {
    std::vector<std::string> cells{model_name(f.model)};
    for (int i = 0; i < 3; ++i)
      cells.push_back(i < static_cast<int>(f.coefficients.size())
                          ? format_double(f.coefficients[i])
                          : "");
    cells.push_back(format_double(f.residual_norm));
    cells.push_back(f.warning);
    csv.row(cells);
  }
}

FitResult fit_finite_size(const std::vector<std::pair<double, double>>& points,
                          const std::vector<double>& errors) {
  if (points.size() < 3)
    throw std::invalid_argument("finite-size fit needs at least 3 system sizes");
  Eigen::MatrixXd a(points.size(), 2);
  RVec b(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = 1.0 / points[i].first;
    b(i) = points[i].second;
  }
  return run_fit(FitModel::LinearInvN, a, b, errors);
}

FitResult fit_continuum(const std::vector<std::pair<double, double>>& points,
                        const std::vector<double>& errors) {
  if (points.size() < 3)
    throw std::invalid_argument("continuum fit needs at least 3 couplings");
  Eigen::MatrixXd a(points.size(), 3);
  RVec b(points.size());
  double x_max = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double x = points[i].first;
    if (x <= 0) throw std::invalid_argument("continuum fit needs positive x");
    x_max = std::max(x_max, x);
    a(i, 0) = 1.0;
    a(i, 1) = 1.0 / std::sqrt(x);
    a(i, 2) = 1.0 / x;
    b(i) = points[i].second;
  }
  FitResult out = run_fit(FitModel::QuadraticInvSqrtX, a, b, errors);
  if (x_max < 50.0)
    out.warning = "x range below 50: continuum estimate of limited precision";
  return out;
}

double perturbative_penalty_integral(double lambda, double x_final, double total_time,
                                     double t, double c, int num_sites, int exponent) {
  // 2 lambda^2 c N  Int_0^t dt' x(t') Int_0^{t'} dt'' x(t'')
  const auto& gl = gauss_legendre_16();
  auto ramp = [&](double s) {
    return x_final * std::pow(s / total_time, exponent);
  };
  auto inner = [&](double tp) {
    double acc = 0.0;
    for (const auto& [xi, wi] : gl) {
      const double s = 0.5 * tp * (xi + 1.0);
      acc += wi * ramp(s);
    }
    return 0.5 * tp * acc;
  };
  double outer = 0.0;
  for (const auto& [xi, wi] : gl) {
    const double tp = 0.5 * t * (xi + 1.0);
    outer += wi * ramp(tp) * inner(tp);
  }
  outer *= 0.5 * t;
  return 2.0 * lambda * lambda * c * num_sites * outer;
}

double perturbative_penalty(double lambda, double x_final, double total_time,
                            double t, double c, int num_sites, int exponent) {
  if (t < 0 || t > total_time * (1 + 1e-12))
    throw std::out_of_range("perturbative penalty evaluated outside [0, T]");
  if (exponent == 3) {
    const double lx = lambda * x_final;
    const double t4 = t * t * t * t;
    const double tt = total_time;
    return 2.0 * lx * lx * (t4 * t4) / (32.0 * tt * tt * tt * tt * tt * tt) * c *
           num_sites;
  }
  return perturbative_penalty_integral(lambda, x_final, total_time, t, c, num_sites,
                                       exponent);
}

double loglog_slope(const std::vector<double>& times, const std::vector<double>& values,
                    double t_min, double t_max) {
  if (times.size() != values.size())
    throw std::invalid_argument("loglog_slope: size mismatch");
  std::vector<double> lt, lv;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max) continue;
    if (times[i] <= 0 || values[i] <= 0)
      throw std::invalid_argument("loglog_slope: non-positive data in window");
    lt.push_back(std::log10(times[i]));
    lv.push_back(std::log10(values[i]));
  }
  if (lt.size() < 2)
    throw std::invalid_argument("loglog_slope: fewer than two samples in window");
  Eigen::MatrixXd a(lt.size(), 2);
  RVec b(lt.size());
  for (std::size_t i = 0; i < lt.size(); ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = lt[i];
    b(i) = lv[i];
  }
  return least_squares(a, b).coefficients(1);
}

CurveOffset curve_offset(const std::vector<double>& times_a,
                         const std::vector<double>& values_a,
                         const std::vector<double>& times_b,
                         const std::vector<double>& values_b, double t_star) {
  auto nearest = [&](const std::vector<double>& times) {
    if (times.empty()) throw std::invalid_argument("curve_offset: empty series");
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i)
      if (std::abs(times[i] - t_star) < std::abs(times[best] - t_star)) best = i;
    return best;
  };
  const std::size_t ia = nearest(times_a);
  const std::size_t ib = nearest(times_b);
  if (values_a[ia] <= 0 || values_b[ib] <= 0)
    throw std::invalid_argument("curve_offset: non-positive value at t_star");
  CurveOffset out;
  out.delta = std::abs(std::log10(values_a[ia]) - std::log10(values_b[ib]));
  out.interpolated = std::abs(times_a[ia] - t_star) > 1e-9 ||
                     std::abs(times_b[ib] - t_star) > 1e-9;
  return out;
}

double fit_penalty_constant(const std::vector<double>& times,
                            const std::vector<double>& penalty_per_site,
                            double lambda, double x_final, double total_time,
                            int exponent, double t_min, double t_max) {
  if (times.size() != penalty_per_site.size())
    throw std::invalid_argument("fit_penalty_constant: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < t_min || times[i] > t_max || times[i] <= 0) continue;
    // Per-site model value with c = 1 (the N factor cancels in P/N).
    const double f =
        perturbative_penalty(lambda, x_final, total_time, times[i], 1.0, 1, exponent);
    num += penalty_per_site[i] * f;
    den += f * f;
  }
  if (den <= 0) throw std::invalid_argument("fit_penalty_constant: empty window");
  return num / den;
}

}  // namespace lgt
