#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "liftscore/core.hpp"
#include "liftscore/ingest.hpp"
#include "liftscore/regression.hpp"

namespace liftscore {

struct ScoredEntry {
  Entry entry;
  std::string class_label;
  double points = 0.0;
  bool extrapolated = false;
};

struct ScoringOutcome {
  std::vector<ScoredEntry> scored;
  std::vector<Exclusion> skipped;  // wrong sex or outside the model's interval
};

/// Scores every entry of the model's sex that lies inside the model's
/// extrapolation interval.
ScoringOutcome score_entries(std::span<const Entry> entries, const ScoringModel& model,
                             std::span<const double> class_boundaries_kg);

struct Trend {
  double slope = 0.0;      // points per kg
  double intercept = 0.0;  // points
};

/// Straight-line least-squares fit of points against bodyweight. Throws
/// Statistic when every bodyweight is identical.
Trend score_trend(std::span<const ScoredEntry> scored);

/// True when a ranks above b: more points, then lower bodyweight, then
/// lifter_id.
bool scored_ranks_before(const ScoredEntry& a, const ScoredEntry& b);

/// Per-class counts among the k best entries. Labels come out in the given
/// order; a label seen in the data but absent from `class_labels` is appended.
ClassCounts top_k_distribution(std::span<const ScoredEntry> scored, std::size_t k,
                               std::span<const std::string> class_labels);

struct Monotonicity {
  bool monotone = true;
  double min_derivative = 0.0;  // kg total per kg bodyweight
  double argmin_kg = 0.0;
};

/// Derivative of the prediction curve on a grid over the model's domain.
Monotonicity monotonicity_check(const ScoringModel& model, double grid_step_kg);
Monotonicity monotonicity_check(const Poly& poly, const Interval& range, double grid_step_kg);

inline constexpr double kDefaultPlateauThreshold = 0.5;  // kg per kg
inline constexpr double kDefaultPlateauStepKg = 0.5;

/// Maximal runs of grid points where |f'| < threshold, as [first, last].
std::vector<Interval> plateau_scan(const Poly& poly, const Interval& range,
                                   double flatness_threshold = kDefaultPlateauThreshold,
                                   double grid_step_kg = kDefaultPlateauStepKg);

struct DiagnosticsOptions {
  std::size_t top_k = 10;
  double fairness_slope = 0.15;   // |points per kg| regarded as horizontal
  double max_class_share = 0.3;   // advisory bound on the top-k share of one class
  double monotonicity_step_kg = 0.1;
  double plateau_threshold = kDefaultPlateauThreshold;
  double plateau_step_kg = kDefaultPlateauStepKg;
};

struct DiagnosticsReport {
  std::optional<Trend> trend;
  std::string trend_error;
  bool trend_within_fairness = false;
  std::size_t top_k = 0;  // min(k, scored entries)
  ClassCounts top_k_class_counts;
  double max_class_share = 0.0;
  bool class_share_within_bound = false;
  bool monotone = false;
  double min_derivative = 0.0;
  double argmin_derivative_kg = 0.0;
  std::vector<Interval> plateau_intervals;
  std::size_t scored_count = 0;
  std::size_t extrapolated_count = 0;
  DiagnosticsOptions options;
};

/// A failing trend fit is recorded in trend_error; the remaining fields are
/// still computed.
DiagnosticsReport diagnose(std::span<const ScoredEntry> scored, const ScoringModel& model,
                           std::span<const std::string> class_labels,
                           const DiagnosticsOptions& options = {});

struct ClassSpread {
  std::string class_label;
  std::size_t count = 0;
  double min_points = 0.0;
  double max_points = 0.0;
  double spread() const { return max_points - min_points; }
};

/// max − min points per class; classes without entries are omitted.
std::vector<ClassSpread> class_spreads(std::span<const ScoredEntry> scored,
                                       std::span<const std::string> class_labels);

/// Packages a fit as a ScoringModel. The domain is the configured bodyweight
/// bounds, falling back to the sample's observed range; the extrapolation
/// interval covers the domain and every fitted point (anchors included)
/// unless the config names one explicitly.
ScoringModel model_from_fit(const FitReport& fit, const FitSample& sample,
                            const FilterConfig& config, std::string source_label = {});

double default_normalization_points(Sex sex);

std::vector<DataPoint> to_data_points(const FitSample& sample);

struct BiasHalf {
  FitSample sample;
  FitReport fit;
  ScoringModel model;
  std::vector<ScoredEntry> scored;  // the full sample under this model
  DiagnosticsReport report;
  std::vector<ClassSpread> spreads;
  double light_spread = 0.0;  // max − min points among light bodyweights
};

struct BiasExperiment {
  double light_limit_kg = 0.0;  // light means bodyweight below this
  BiasHalf full;
  BiasHalf restricted;
};

/// Fits `degree` on the samples selected by both configs and scores the full
/// sample under each model. Light bodyweights are those below the restricted
/// config's bodyweight_min_kg (or the lightest class when it has none).
BiasExperiment bias_experiment(std::span<const Entry> entries, const FilterConfig& full_config,
                               const FilterConfig& restricted_config, int degree,
                               const DiagnosticsOptions& options = {});

}  // namespace liftscore
