#pragma once

#include <span>
#include <string>
#include <vector>

#include "liftscore/diagnostics.hpp"
#include "liftscore/ingest.hpp"
#include "liftscore/regression.hpp"

namespace liftscore {

// All writers produce deterministic text: fixed column order, shortest
// round-trip numbers, no timestamps.

/// bodyweight_kg,observed_kg,predicted_kg,residual_kg
std::string residuals_csv(std::span<const Residual> residuals);

/// name,sex,bodyweight_kg,total_kg,points,class,extrapolated
std::string scored_csv(std::span<const ScoredEntry> scored);

/// rank,name,sex,bodyweight_kg,total_kg,points,class,extrapolated
std::string ranked_csv(std::span<const ScoredEntry> ranked);

/// bodyweight_kg,predicted_total_kg
std::string curve_csv(const Poly& poly, const Interval& range, double step_kg);

/// name,sex,bodyweight_kg,total_kg,date,meet_name,class,anchor
std::string sample_csv(const FitSample& sample);

/// name,sex,bodyweight_kg,total_kg,equipment,event,date,meet_name,reason
std::string exclusions_csv(std::span<const Exclusion> excluded);

/// line_no,reason
std::string row_errors_csv(std::span<const RowError> errors);

/// class,count
std::string class_counts_csv(const ClassCounts& counts);

/// Model document plus a "fit_report" block (degree, r_squared,
/// sample_size, condition_estimate, center, scale, sum_squared_residuals).
std::string fit_report_json(const FitReport& fit, const ScoringModel& model);
/// Same report for a fit that could not be packaged as a valid model.
std::string fit_report_json(const FitReport& fit, Sex sex, const std::string& model_error);

struct DegreeSummary {
  int degree = 0;
  bool ok = false;
  std::string error;
  double r_squared = 0.0;
  double condition_estimate = 0.0;
  std::vector<Interval> plateaus;
  bool monotone = false;
  double min_derivative = 0.0;
  double argmin_derivative_kg = 0.0;
  bool implausible() const { return ok && (plateaus.size() >= 2 || !monotone); }
};

/// Degree-selection table: R², plateau intervals and monotonicity per degree
/// over `range`.
std::vector<DegreeSummary> summarize_degrees(std::span<const SweepEntry> sweep, const Interval& range,
                                             const DiagnosticsOptions& options);
std::string degree_summary_json(std::span<const DegreeSummary> rows, int selected_degree);
std::string degree_summary_csv(std::span<const DegreeSummary> rows);

std::string diagnostics_json(const DiagnosticsReport& report, const ScoringModel& model);
std::string bias_experiment_json(const BiasExperiment& exp);

}  // namespace liftscore
