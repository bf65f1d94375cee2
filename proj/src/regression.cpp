#include "liftscore/regression.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace liftscore {

double FitReport::sum_squared_residuals() const {
  double s = 0.0;
  for (const auto& r : residuals) s += r.residual_kg * r.residual_kg;
  return s;
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.empty() || observed.size() != predicted.size()) {
    throw Error(ErrorKind::Config, "r_squared needs equal, non-zero lengths");
  }
  Eigen::Map<const Eigen::ArrayXd> obs(observed.data(), static_cast<Eigen::Index>(observed.size()));
  Eigen::Map<const Eigen::ArrayXd> pred(predicted.data(), static_cast<Eigen::Index>(predicted.size()));
  const double ss_tot = (obs - obs.mean()).square().sum();
  if (!(ss_tot > 0.0)) throw Error(ErrorKind::Statistic, "R^2 undefined: observed values have zero variance");
  const double ss_res = (obs - pred).square().sum();
  return 1.0 - ss_res / ss_tot;
}

std::vector<Residual> residuals(const Poly& poly, std::span<const DataPoint> points) {
  std::vector<Residual> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double pred = poly(p.bodyweight_kg);
    out.push_back({p.bodyweight_kg, p.total_kg, pred, p.total_kg - pred});
  }
  return out;
}

FitReport fit_polynomial(std::span<const DataPoint> points, int degree) {
  if (degree < 1) throw Error(ErrorKind::Config, "polynomial degree must be at least 1");
  const auto n = static_cast<Eigen::Index>(points.size());
  std::set<double> distinct;
  for (const auto& p : points) distinct.insert(p.bodyweight_kg);
  if (distinct.size() < static_cast<std::size_t>(degree) + 1) {
    throw Error(ErrorKind::Fit, "degree " + std::to_string(degree) + " fit needs at least " +
                                    std::to_string(degree + 1) + " distinct bodyweights, got " +
                                    std::to_string(distinct.size()));
  }

  Eigen::VectorXd x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i) = points[static_cast<std::size_t>(i)].bodyweight_kg;
    y(i) = points[static_cast<std::size_t>(i)].total_kg;
  }
  const double lo = *distinct.begin(), hi = *distinct.rbegin();
  const double center = 0.5 * (lo + hi);
  const double scale = 0.5 * (hi - lo);
  const Eigen::ArrayXd t = (x.array() - center) / scale;

  Eigen::MatrixXd design(n, degree + 1);
  design.col(0).setOnes();
  for (int k = 1; k <= degree; ++k) design.col(k) = design.col(k - 1).array() * t;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  if (qr.rank() < degree + 1) {
    throw Error(ErrorKind::Fit, "design matrix is rank deficient for degree " + std::to_string(degree));
  }
  Eigen::VectorXd beta = qr.solve(y);

  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(design).singularValues();

  FitReport rep;
  rep.degree = degree;
  rep.center = center;
  rep.scale = scale;
  rep.scaled_poly = Poly(beta);
  rep.poly = compose_affine(rep.scaled_poly, center, scale);
  rep.sample_size = points.size();
  rep.condition_estimate = sv(0) / sv(sv.size() - 1);
  rep.residuals = residuals(rep.poly, points);

  std::vector<double> pred(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) pred[i] = rep.residuals[i].predicted_kg;
  const std::vector<double> obs(y.data(), y.data() + n);
  // Constant observations are reproduced exactly by the intercept.
  const bool constant = std::all_of(obs.begin(), obs.end(), [&](double v) { return v == obs.front(); });
  rep.r_squared = constant ? 1.0 : std::clamp(r_squared(obs, pred), 0.0, 1.0);
  return rep;
}

std::vector<SweepEntry> fit_sweep(std::span<const DataPoint> points, std::span<const int> degrees) {
  if (degrees.empty()) throw Error(ErrorKind::Config, "fit sweep needs at least one degree");
  std::vector<int> order(degrees.begin(), degrees.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<std::future<SweepEntry>> jobs;
  for (int d : order) {
    jobs.push_back(std::async(std::launch::async, [points, d] {
      SweepEntry e{d, std::nullopt, {}};
      try {
        e.report = fit_polynomial(points, d);
      } catch (const Error& err) {
        e.error = err.what();
      }
      return e;
    }));
  }
  std::vector<SweepEntry> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace liftscore
