#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lgt/linalg.hpp"
#include "lgt/types.hpp"

namespace lgt {

enum class FitModel { LinearInvN, QuadraticInvSqrtX, LogLogLine };

/// Least-squares fit summary; `per_point_errors` propagates the input
/// uncertainties that entered as weights (empty when unweighted).
struct FitResult {
  FitModel model;
  std::vector<double> coefficients;
  double residual_norm = 0.0;
  std::vector<double> per_point_errors;
  std::string warning;
};

void write_fit_csv(const std::vector<FitResult>& fits, const std::string& path);

/// Fit energy densities to w + c1/N. Points are (N, omega), optionally with
/// 1-sigma errors used as inverse-variance weights. coefficients = {w, c1}.
FitResult fit_finite_size(const std::vector<std::pair<double, double>>& points,
                          const std::vector<double>& errors = {});

/// Fit w(x) = w_cont + a/sqrt(x) + b/x; coefficients = {w_cont, a, b}.
/// Emits a warning when max(x) < 50, where the continuum estimate is of
/// limited precision.
FitResult fit_continuum(const std::vector<std::pair<double, double>>& points,
                        const std::vector<double>& errors = {});

/// Leading perturbative estimate of the Gauss-violation observable under a
/// noisy ramp: 2 (lambda x_final)^2 t^8 / (32 T^6) c N for the cubic ramp;
/// other exponents integrate the generic double integral numerically.
double perturbative_penalty(double lambda, double x_final, double total_time,
                            double t, double c, int num_sites, int exponent = 3);

/// The generic double-integral route (quadrature), any exponent.
double perturbative_penalty_integral(double lambda, double x_final, double total_time,
                                     double t, double c, int num_sites, int exponent);

/// Least-squares slope of log10(values) vs log10(times) within the window.
double loglog_slope(const std::vector<double>& times, const std::vector<double>& values,
                    double t_min, double t_max);

/// log10 offset between two positive series at time t_star (nearest sample;
/// flagged == true when the sample grids differ around t_star).
struct CurveOffset {
  double delta = 0.0;
  bool interpolated = false;
};
CurveOffset curve_offset(const std::vector<double>& times_a, const std::vector<double>& values_a,
                         const std::vector<double>& times_b, const std::vector<double>& values_b,
                         double t_star);

/// Fit the single constant c of the perturbative formula against a measured
/// penalty series within [t_min, t_max].
double fit_penalty_constant(const std::vector<double>& times,
                            const std::vector<double>& penalty_per_site,
                            double lambda, double x_final, double total_time,
                            int exponent, double t_min, double t_max);

}  // namespace lgt
