#include "liftscore/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <tuple>

namespace liftscore {

ScoringOutcome score_entries(std::span<const Entry> entries, const ScoringModel& model,
                             std::span<const double> class_boundaries_kg) {
  ScoringOutcome out;
  for (const Entry& e : entries) {
    if (e.sex != model.sex()) {
      out.skipped.push_back({e, "sex"});
      continue;
    }
    if (!model.extrapolation_kg().contains(e.bodyweight_kg)) {
      out.skipped.push_back({e, "bodyweight outside " + model.extrapolation_kg().to_string()});
      continue;
    }
    const Score s = score(model, e.bodyweight_kg, e.total_kg);
    out.scored.push_back(
        {e, assign_weight_class(e.bodyweight_kg, class_boundaries_kg), s.points, s.extrapolated});
  }
  return out;
}

Trend score_trend(std::span<const ScoredEntry> scored) {
  std::vector<DataPoint> pts;
  pts.reserve(scored.size());
  for (const auto& s : scored) pts.push_back({s.entry.bodyweight_kg, s.points});
  const bool degenerate =
      pts.empty() || std::all_of(pts.begin(), pts.end(), [&](const DataPoint& p) {
        return p.bodyweight_kg == pts.front().bodyweight_kg;
      });
  if (degenerate) {
    throw Error(ErrorKind::Statistic, "score trend undefined: fewer than 2 distinct bodyweights");
  }
  const FitReport line = fit_polynomial(pts, 1);
  return {line.poly[1], line.poly[0]};
}

bool scored_ranks_before(const ScoredEntry& a, const ScoredEntry& b) {
  return std::tuple(-a.points, a.entry.bodyweight_kg, std::string_view(a.entry.lifter_id)) <
         std::tuple(-b.points, b.entry.bodyweight_kg, std::string_view(b.entry.lifter_id));
}

ClassCounts top_k_distribution(std::span<const ScoredEntry> scored, std::size_t k,
                               std::span<const std::string> class_labels) {
  if (k < 1) throw Error(ErrorKind::Config, "k must be at least 1");
  std::vector<const ScoredEntry*> order;
  order.reserve(scored.size());
  for (const auto& s : scored) order.push_back(&s);
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [](const ScoredEntry* a, const ScoredEntry* b) { return scored_ranks_before(*a, *b); });

  ClassCounts counts;
  for (const auto& label : class_labels) counts.emplace_back(label, 0);
  for (std::size_t i = 0; i < take; ++i) {
    const auto& label = order[i]->class_label;
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == label; });
    if (it == counts.end()) counts.emplace_back(label, 1);
    else ++it->second;
  }
  return counts;
}

Monotonicity monotonicity_check(const Poly& poly, const Interval& range, double grid_step_kg) {
  if (!(grid_step_kg > 0.0)) throw Error(ErrorKind::Config, "grid step must be positive");
  const Poly slope = derivative(poly);
  Monotonicity m;
  m.min_derivative = std::numeric_limits<double>::infinity();
  for (double x : make_grid(range, grid_step_kg)) {
    const double d = slope(x);
    if (d < m.min_derivative) {
      m.min_derivative = d;
      m.argmin_kg = x;
    }
  }
  m.monotone = m.min_derivative > 0.0;
  return m;
}

Monotonicity monotonicity_check(const ScoringModel& model, double grid_step_kg) {
  return monotonicity_check(model.poly(), model.domain_kg(), grid_step_kg);
}

std::vector<Interval> plateau_scan(const Poly& poly, const Interval& range,
                                   double flatness_threshold, double grid_step_kg) {
  if (!(flatness_threshold > 0.0)) throw Error(ErrorKind::Config, "plateau threshold must be positive");
  const Poly slope = derivative(poly);
  std::vector<Interval> out;
  std::optional<Interval> run;
  for (double x : make_grid(range, grid_step_kg)) {
    if (std::abs(slope(x)) < flatness_threshold) {
      if (run) run->hi = x;
      else run = Interval{x, x};
    } else if (run) {
      out.push_back(*run);
      run.reset();
    }
  }
  if (run) out.push_back(*run);
  return out;
}

DiagnosticsReport diagnose(std::span<const ScoredEntry> scored, const ScoringModel& model,
                           std::span<const std::string> class_labels,
                           const DiagnosticsOptions& options) {
  DiagnosticsReport rep;
  rep.options = options;
  rep.scored_count = scored.size();
  rep.extrapolated_count = static_cast<std::size_t>(
      std::count_if(scored.begin(), scored.end(), [](const ScoredEntry& s) { return s.extrapolated; }));
  try {
    rep.trend = score_trend(scored);
    rep.trend_within_fairness = std::abs(rep.trend->slope) <= options.fairness_slope;
  } catch (const Error& e) {
    rep.trend_error = e.what();
  }
  rep.top_k = std::min(options.top_k, scored.size());
  rep.top_k_class_counts = top_k_distribution(scored, options.top_k, class_labels);
  std::size_t max_count = 0;
  for (const auto& [label, count] : rep.top_k_class_counts) max_count = std::max(max_count, count);
  rep.max_class_share = rep.top_k > 0 ? static_cast<double>(max_count) / static_cast<double>(rep.top_k) : 0.0;
  rep.class_share_within_bound = rep.top_k > 0 && rep.max_class_share <= options.max_class_share;

  const Monotonicity m = monotonicity_check(model, options.monotonicity_step_kg);
  rep.monotone = m.monotone;
  rep.min_derivative = m.min_derivative;
  rep.argmin_derivative_kg = m.argmin_kg;
  rep.plateau_intervals =
      plateau_scan(model.poly(), model.domain_kg(), options.plateau_threshold, options.plateau_step_kg);
  return rep;
}

std::vector<ClassSpread> class_spreads(std::span<const ScoredEntry> scored,
                                       std::span<const std::string> class_labels) {
  std::vector<ClassSpread> out;
  for (const auto& label : class_labels) {
    ClassSpread c{label, 0, HUGE_VAL, -HUGE_VAL};
    for (const auto& s : scored) {
      if (s.class_label != label) continue;
      ++c.count;
      c.min_points = std::min(c.min_points, s.points);
      c.max_points = std::max(c.max_points, s.points);
    }
    if (c.count > 0) out.push_back(c);
  }
  return out;
}

double default_normalization_points(Sex sex) { return sex == Sex::Male ? 500.0 : 455.0; }

std::vector<DataPoint> to_data_points(const FitSample& sample) {
  std::vector<DataPoint> pts;
  pts.reserve(sample.points.size());
  for (const auto& p : sample.points) pts.push_back({p.entry.bodyweight_kg, p.entry.total_kg});
  return pts;
}

ScoringModel model_from_fit(const FitReport& fit, const FitSample& sample, const FilterConfig& config,
                            std::string source_label) {
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (const auto& p : sample.points) {
    lo = std::min(lo, p.entry.bodyweight_kg);
    hi = std::max(hi, p.entry.bodyweight_kg);
  }
  double in_lo = HUGE_VAL, in_hi = -HUGE_VAL;
  for (const auto& p : sample.points) {
    if (p.anchor) continue;
    in_lo = std::min(in_lo, p.entry.bodyweight_kg);
    in_hi = std::max(in_hi, p.entry.bodyweight_kg);
  }
  if (!(in_lo < in_hi)) {
    in_lo = lo;
    in_hi = hi;
  }
  Interval domain{config.bodyweight_min_kg.value_or(in_lo), config.bodyweight_max_kg.value_or(in_hi)};
  Interval extrap = config.extrapolation_kg.value_or(
      Interval{std::min(domain.lo, lo), std::max(domain.hi, hi)});
  extrap.lo = std::min(extrap.lo, domain.lo);
  extrap.hi = std::max(extrap.hi, domain.hi);
  FitMeta meta{fit.r_squared, fit.sample_size, std::move(source_label), std::nullopt};
  for (const auto& p : sample.points) {
    if (!meta.snapshot_date || *meta.snapshot_date < p.entry.date) meta.snapshot_date = p.entry.date;
  }
  return ScoringModel(config.sex, fit.poly,
                      config.normalization_points.value_or(default_normalization_points(config.sex)),
                      domain, extrap, std::move(meta));
}

namespace {

BiasHalf run_half(std::span<const Entry> entries, const FilterConfig& config, int degree,
                  const FitSample* scoring_sample, const Interval& scoring_range,
                  const DiagnosticsOptions& options, const std::string& label) {
  FitSample sample = select_top_n(entries, config);
  const auto pts = to_data_points(sample);
  FitReport fit = fit_polynomial(pts, degree);
  ScoringModel base = model_from_fit(fit, sample, config, label);
  Interval extrap{std::min(base.extrapolation_kg().lo, scoring_range.lo),
                  std::max(base.extrapolation_kg().hi, scoring_range.hi)};
  ScoringModel model(base.sex(), base.poly(), base.normalization_points(), base.domain_kg(), extrap,
                     base.fit_meta());
  const FitSample& target = scoring_sample ? *scoring_sample : sample;
  std::vector<Entry> target_entries;
  for (const auto& p : target.points) target_entries.push_back(p.entry);
  auto scored = score_entries(target_entries, model, config.class_boundaries_kg).scored;
  const auto labels = class_labels(config.class_boundaries_kg);
  DiagnosticsReport report = diagnose(scored, model, labels, options);
  auto spreads = class_spreads(scored, labels);
  return BiasHalf{std::move(sample), std::move(fit), std::move(model), std::move(scored),
                  std::move(report), std::move(spreads), 0.0};
}

double light_spread(std::span<const ScoredEntry> scored, double limit) {
  double lo = HUGE_VAL, hi = -HUGE_VAL;
  for (const auto& s : scored) {
    if (s.entry.bodyweight_kg < limit) {
      lo = std::min(lo, s.points);
      hi = std::max(hi, s.points);
    }
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace

BiasExperiment bias_experiment(std::span<const Entry> entries, const FilterConfig& full_config,
                               const FilterConfig& restricted_config, int degree,
                               const DiagnosticsOptions& options) {
  if (full_config.sex != restricted_config.sex) {
    throw Error(ErrorKind::Config, "bias experiment configs must select the same sex");
  }
  const FitSample full_sample = select_top_n(entries, full_config);
  Interval range{HUGE_VAL, -HUGE_VAL};
  for (const auto& p : full_sample.points) {
    range.lo = std::min(range.lo, p.entry.bodyweight_kg);
    range.hi = std::max(range.hi, p.entry.bodyweight_kg);
  }

  const std::string label = "bias-experiment-deg" + std::to_string(degree);
  auto full_job = std::async(std::launch::async, [&] {
    return run_half(entries, full_config, degree, nullptr, range, options, label);
  });
  auto restricted_job = std::async(std::launch::async, [&] {
    return run_half(entries, restricted_config, degree, &full_sample, range, options, label);
  });
  BiasExperiment out{0.0, full_job.get(), restricted_job.get()};

  if (restricted_config.bodyweight_min_kg) {
    out.light_limit_kg = *restricted_config.bodyweight_min_kg;
  } else {
    out.light_limit_kg = range.lo;
    for (std::size_t i = 0; i < full_config.class_boundaries_kg.size(); ++i) {
      if (range.lo <= full_config.class_boundaries_kg[i]) {
        out.light_limit_kg = std::nextafter(full_config.class_boundaries_kg[i], HUGE_VAL);
        break;
      }
    }
    if (range.lo > full_config.class_boundaries_kg.back()) out.light_limit_kg = HUGE_VAL;
  }
  out.full.light_spread = light_spread(out.full.scored, out.light_limit_kg);
  out.restricted.light_spread = light_spread(out.restricted.scored, out.light_limit_kg);
  return out;
}

}  // namespace liftscore
