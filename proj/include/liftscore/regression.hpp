#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "liftscore/polynomial.hpp"

namespace liftscore {

struct DataPoint {
  double bodyweight_kg = 0.0;
  double total_kg = 0.0;
};

/// observed − predicted, the residual sign used throughout.
struct Residual {
  double bodyweight_kg = 0.0;
  double observed_kg = 0.0;
  double predicted_kg = 0.0;
  double residual_kg = 0.0;
};

struct FitReport {
  int degree = 0;
  Poly poly;                   // raw basis, ascending powers of bodyweight
  double r_squared = 0.0;
  std::vector<Residual> residuals;
  std::size_t sample_size = 0;
  double condition_estimate = 0.0;  // 2-norm condition of the scaled design

  // Scaled basis t = (x - center) / scale in which the problem was solved.
  double center = 0.0;
  double scale = 1.0;
  Poly scaled_poly;

  double sum_squared_residuals() const;
};

/// Ordinary least squares over degree-d polynomials. The predictor is
/// centered and scaled to [-1, 1] before a column-pivoted Householder QR
/// solve; coefficients are then expanded back to the raw basis. Throws Config
/// for degree < 1 and Fit when fewer than degree + 1 distinct bodyweights
/// are present. r_squared is 1 when every observed total is the same.
FitReport fit_polynomial(std::span<const DataPoint> points, int degree);

/// 1 − SS_res / SS_tot. Throws Statistic when observed has no variance and
/// Config on empty or mismatched inputs.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

std::vector<Residual> residuals(const Poly& poly, std::span<const DataPoint> points);

struct SweepEntry {
  int degree = 0;
  std::optional<FitReport> report;
  std::string error;  // set when report is empty
};

/// One entry per requested degree, ascending by degree. A degree that cannot
/// be fitted yields an entry carrying the error rather than aborting.
std::vector<SweepEntry> fit_sweep(std::span<const DataPoint> points, std::span<const int> degrees);

}  // namespace liftscore
