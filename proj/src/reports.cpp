#include "liftscore/reports.hpp"

#include <json.hpp>

#include "liftscore/csv.hpp"
#include "liftscore/io.hpp"
#include "liftscore/model_io.hpp"

namespace liftscore {

using Json = nlohmann::ordered_json;

namespace {

std::string line(const csv::Row& fields) { return csv::join(fields) + "\n"; }

const char* flag(bool b) { return b ? "true" : "false"; }

Json interval_list(std::span<const Interval> xs) {
  Json out = Json::array();
  for (const auto& i : xs) out.push_back(Json::array({i.lo, i.hi}));
  return out;
}

Json counts_json(const ClassCounts& counts) {
  Json out = Json::object();
  for (const auto& [label, n] : counts) out[label] = n;
  return out;
}

Json report_json(const DiagnosticsReport& r) {
  Json j;
  if (r.trend) {
    j["trend_slope"] = r.trend->slope;
    j["trend_intercept"] = r.trend->intercept;
  } else {
    j["trend_slope"] = nullptr;
    j["trend_intercept"] = nullptr;
  }
  j["trend_error"] = r.trend_error.empty() ? Json(nullptr) : Json(r.trend_error);
  j["fairness_slope_threshold"] = r.options.fairness_slope;
  j["trend_within_fairness"] = r.trend_within_fairness;
  j["top_k"] = r.top_k;
  j["top_k_class_counts"] = counts_json(r.top_k_class_counts);
  j["max_class_share"] = r.max_class_share;
  j["max_class_share_bound"] = r.options.max_class_share;
  j["class_share_within_bound"] = r.class_share_within_bound;
  j["monotone"] = r.monotone;
  j["min_derivative"] = r.min_derivative;
  j["argmin_derivative_kg"] = r.argmin_derivative_kg;
  j["monotonicity_grid_step_kg"] = r.options.monotonicity_step_kg;
  j["plateau_threshold"] = r.options.plateau_threshold;
  j["plateau_grid_step_kg"] = r.options.plateau_step_kg;
  j["plateau_intervals"] = interval_list(r.plateau_intervals);
  j["scored_count"] = r.scored_count;
  j["extrapolated_count"] = r.extrapolated_count;
  j["thresholds_note"] =
      "fairness slope and class-share bounds are reporting conventions, not statistical tests";
  return j;
}

Json model_json(const ScoringModel& m) { return Json::parse(model_to_json(m)); }

Json fit_block(const FitReport& fit) {
  Json rep;
  rep["degree"] = fit.degree;
  rep["r_squared"] = fit.r_squared;
  rep["sample_size"] = fit.sample_size;
  rep["condition_estimate"] = fit.condition_estimate;
  rep["center_kg"] = fit.center;
  rep["scale_kg"] = fit.scale;
  rep["sum_squared_residuals"] = fit.sum_squared_residuals();
  return rep;
}

}  // namespace

std::string residuals_csv(std::span<const Residual> residuals) {
  std::string out = "bodyweight_kg,observed_kg,predicted_kg,residual_kg\n";
  for (const auto& r : residuals) {
    out += line({format_number(r.bodyweight_kg), format_number(r.observed_kg),
                 format_number(r.predicted_kg), format_number(r.residual_kg)});
  }
  return out;
}

std::string scored_csv(std::span<const ScoredEntry> scored) {
  std::string out = "name,sex,bodyweight_kg,total_kg,points,class,extrapolated\n";
  for (const auto& s : scored) {
    out += line({s.entry.lifter_id, std::string(sex_code(s.entry.sex)), format_number(s.entry.bodyweight_kg),
                 format_number(s.entry.total_kg), format_points(s.points), s.class_label,
                 flag(s.extrapolated)});
  }
  return out;
}

std::string ranked_csv(std::span<const ScoredEntry> ranked) {
  std::string out = "rank,name,sex,bodyweight_kg,total_kg,points,class,extrapolated\n";
  std::size_t rank = 0;
  for (const auto& s : ranked) {
    out += line({std::to_string(++rank), s.entry.lifter_id, std::string(sex_code(s.entry.sex)),
                 format_number(s.entry.bodyweight_kg), format_number(s.entry.total_kg),
                 format_points(s.points), s.class_label, flag(s.extrapolated)});
  }
  return out;
}

std::string curve_csv(const Poly& poly, const Interval& range, double step_kg) {
  std::string out = "bodyweight_kg,predicted_total_kg\n";
  for (double x : make_grid(range, step_kg)) {
    out += line({format_number(x), format_number(poly(x))});
  }
  return out;
}

std::string sample_csv(const FitSample& sample) {
  std::string out = "name,sex,bodyweight_kg,total_kg,date,meet_name,class,anchor\n";
  for (const auto& p : sample.points) {
    out += line({p.entry.lifter_id, std::string(sex_code(p.entry.sex)), format_number(p.entry.bodyweight_kg),
                 format_number(p.entry.total_kg), p.entry.date.to_string(), p.entry.meet_name,
                 p.class_label, flag(p.anchor)});
  }
  return out;
}

std::string exclusions_csv(std::span<const Exclusion> excluded) {
  std::string out = "name,sex,bodyweight_kg,total_kg,equipment,event,date,meet_name,reason\n";
  for (const auto& x : excluded) {
    out += line({x.entry.lifter_id, std::string(sex_code(x.entry.sex)), format_number(x.entry.bodyweight_kg),
                 format_number(x.entry.total_kg), std::string(equipment_label(x.entry.equipment)),
                 x.entry.event, x.entry.date.to_string(), x.entry.meet_name, x.reason});
  }
  return out;
}

std::string row_errors_csv(std::span<const RowError> errors) {
  std::string out = "line_no,reason\n";
  for (const auto& e : errors) out += line({std::to_string(e.line_no), e.reason});
  return out;
}

std::string class_counts_csv(const ClassCounts& counts) {
  std::string out = "class,count\n";
  for (const auto& [label, n] : counts) out += line({label, std::to_string(n)});
  return out;
}

std::string fit_report_json(const FitReport& fit, const ScoringModel& model) {
  Json doc = model_json(model);
  doc["fit_report"] = fit_block(fit);
  return doc.dump(2) + "\n";
}

std::string fit_report_json(const FitReport& fit, Sex sex, const std::string& model_error) {
  Json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["sex"] = std::string(sex_code(sex));
  doc["degree"] = fit.degree;
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i <= fit.poly.degree(); ++i) coeffs.push_back(fit.poly[i]);
  doc["coefficients"] = std::move(coeffs);
  doc["model_error"] = model_error;
  doc["fit_report"] = fit_block(fit);
  return doc.dump(2) + "\n";
}

std::vector<DegreeSummary> summarize_degrees(std::span<const SweepEntry> sweep, const Interval& range,
                                             const DiagnosticsOptions& options) {
  std::vector<DegreeSummary> rows;
  for (const auto& s : sweep) {
    DegreeSummary row;
    row.degree = s.degree;
    if (!s.report) {
      row.error = s.error;
      rows.push_back(row);
      continue;
    }
    row.ok = true;
    row.r_squared = s.report->r_squared;
    row.condition_estimate = s.report->condition_estimate;
    row.plateaus = plateau_scan(s.report->poly, range, options.plateau_threshold, options.plateau_step_kg);
    const auto m = monotonicity_check(s.report->poly, range, options.monotonicity_step_kg);
    row.monotone = m.monotone;
    row.min_derivative = m.min_derivative;
    row.argmin_derivative_kg = m.argmin_kg;
    rows.push_back(row);
  }
  return rows;
}

std::string degree_summary_json(std::span<const DegreeSummary> rows, int selected_degree) {
  Json doc;
  doc["selected_degree"] = selected_degree;
  doc["note"] =
      "implausible = two or more plateau intervals or a non-increasing curve; the degree is a human choice";
  Json list = Json::array();
  for (const auto& r : rows) {
    Json j;
    j["degree"] = r.degree;
    if (!r.ok) {
      j["error"] = r.error;
      list.push_back(std::move(j));
      continue;
    }
    j["r_squared"] = r.r_squared;
    j["condition_estimate"] = r.condition_estimate;
    j["plateau_count"] = r.plateaus.size();
    j["plateau_intervals"] = interval_list(r.plateaus);
    j["monotone"] = r.monotone;
    j["min_derivative"] = r.min_derivative;
    j["argmin_derivative_kg"] = r.argmin_derivative_kg;
    j["implausible"] = r.implausible();
    list.push_back(std::move(j));
  }
  doc["degrees"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string degree_summary_csv(std::span<const DegreeSummary> rows) {
  std::string out =
      "degree,r_squared,plateau_count,monotone,min_derivative,argmin_derivative_kg,condition_estimate,implausible,error\n";
  for (const auto& r : rows) {
    if (!r.ok) {
      out += line({std::to_string(r.degree), "", "", "", "", "", "", "", r.error});
      continue;
    }
    out += line({std::to_string(r.degree), format_number(r.r_squared), std::to_string(r.plateaus.size()),
                 flag(r.monotone), format_number(r.min_derivative), format_number(r.argmin_derivative_kg),
                 format_number(r.condition_estimate), flag(r.implausible()), ""});
  }
  return out;
}

std::string diagnostics_json(const DiagnosticsReport& report, const ScoringModel& model) {
  Json doc;
  doc["model"] = model_json(model);
  doc["diagnostics"] = report_json(report);
  return doc.dump(2) + "\n";
}

std::string bias_experiment_json(const BiasExperiment& exp) {
  auto half = [](const BiasHalf& h) {
    Json j;
    j["model"] = model_json(h.model);
    j["sample_size"] = h.sample.points.size();
    j["r_squared"] = h.fit.r_squared;
    j["condition_estimate"] = h.fit.condition_estimate;
    j["diagnostics"] = report_json(h.report);
    Json spreads = Json::array();
    for (const auto& s : h.spreads) {
      spreads.push_back({{"class", s.class_label}, {"count", s.count}, {"min_points", s.min_points},
                         {"max_points", s.max_points}, {"spread", s.spread()}});
    }
    j["class_spreads"] = std::move(spreads);
    j["light_spread"] = h.light_spread;
    return j;
  };
  Json doc;
  doc["light_limit_kg"] = exp.light_limit_kg;
  doc["full"] = half(exp.full);
  doc["restricted"] = half(exp.restricted);
  doc["light_spread_larger_under_full_fit"] = exp.full.light_spread > exp.restricted.light_spread;
  return doc.dump(2) + "\n";
}

}  // namespace liftscore
