#include "liftscore/cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "liftscore/core.hpp"
#include "liftscore/diagnostics.hpp"
#include "liftscore/ingest.hpp"
#include "liftscore/io.hpp"
#include "liftscore/model_io.hpp"
#include "liftscore/regression.hpp"
#include "liftscore/reports.hpp"

namespace liftscore::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Io:
    case ErrorKind::InputDomain:
    case ErrorKind::ModelIntegrity: return kConfigError;
    case ErrorKind::Ingest: return kIngestError;
    case ErrorKind::Fit:
    case ErrorKind::Statistic: return kFitError;
    case ErrorKind::Domain: return kDomainError;
  }
  return kFailure;
}

namespace {

/// Flag values shared by the subcommands. Not every field applies to every
/// command.
struct RunConfig {
  std::string data;
  std::string filter_config;
  std::string restricted_config;
  std::string overrides;
  std::string model;
  std::string model2;
  std::vector<int> degrees;
  std::string out_dir;
  std::size_t top_k = 10;
  double grid_step = 0.5;
  double fairness_slope = 0.15;
  double plateau_threshold = kDefaultPlateauThreshold;
  double max_class_share = 0.3;
  std::string sex;
  std::optional<int> select_degree;
  std::optional<double> bodyweight;
  std::optional<double> total;
  std::string wilks_file;
};

void emit_error(std::ostream& err, int code, std::string_view kind, std::string_view message) {
  nlohmann::ordered_json line;
  line["error"] = {{"exit_code", code}, {"kind", kind}, {"message", message}};
  err << line.dump() << "\n";
}

void warn(std::ostream& err, const std::string& message) { err << "warning: " << message << "\n"; }

void require_file(const std::string& path, const char* flag) {
  if (path.empty()) throw Error(ErrorKind::Config, std::string(flag) + " is required");
  if (!fs::is_regular_file(path)) throw Error(ErrorKind::Config, std::string(flag) + " file not found: " + path);
}

void require_model(const std::string& name, const char* flag) {
  if (name.empty()) throw Error(ErrorKind::Config, std::string(flag) + " is required");
  if (!is_builtin_model_name(name) && !fs::is_regular_file(name)) {
    throw Error(ErrorKind::Config, std::string(flag) + " is neither a built-in model nor a file: " + name);
  }
}

fs::path prepare_out_dir(const std::string& dir) {
  if (dir.empty()) throw Error(ErrorKind::Config, "--out-dir is required");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::Config, "cannot create output directory " + dir);
  return fs::path(dir);
}

std::optional<Sex> sex_flag(const RunConfig& rc) {
  if (rc.sex.empty()) return std::nullopt;
  auto s = parse_sex(rc.sex);
  if (!s) throw Error(ErrorKind::Config, "--sex must be M or F");
  return s;
}

fs::path wilks_path(const RunConfig& rc) {
  return rc.wilks_file.empty() ? default_wilks_file() : fs::path(rc.wilks_file);
}

DiagnosticsOptions diagnostics_options(const RunConfig& rc) {
  DiagnosticsOptions o;
  o.top_k = rc.top_k;
  o.fairness_slope = rc.fairness_slope;
  o.plateau_threshold = rc.plateau_threshold;
  o.max_class_share = rc.max_class_share;
  if (rc.top_k < 1) throw Error(ErrorKind::Config, "--top-k must be at least 1");
  if (!(rc.grid_step > 0.0)) throw Error(ErrorKind::Config, "--grid-step must be positive");
  if (!(rc.plateau_threshold > 0.0)) throw Error(ErrorKind::Config, "--plateau-threshold must be positive");
  return o;
}

/// Timestamps live only here so the primary outputs stay byte-identical.
void write_run_log(const fs::path& dir, const std::vector<std::string>& args,
                   const std::vector<std::string>& notes) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  std::string text = std::string("started: ") + stamp + "\ncommand: liftscore";
  for (const auto& a : args) text += " " + a;
  text += "\n";
  for (const auto& n : notes) text += n + "\n";
  write_file_atomic(dir / "run.log", text);
}

struct LoadedEntries {
  std::vector<Entry> entries;
  std::vector<RowError> row_errors;
  std::vector<std::string> notes;
};

LoadedEntries load_entries(const RunConfig& rc, std::ostream& err) {
  ParseResult parsed = parse_entries_file(rc.data);
  LoadedEntries out;
  out.row_errors = parsed.row_errors;
  std::vector<BodyweightOverride> overrides;
  if (!rc.overrides.empty()) overrides = load_overrides_file(rc.overrides);
  OverrideOutcome applied = apply_overrides(std::move(parsed.entries), overrides, parsed.unweighed);
  for (const auto& w : applied.warnings) warn(err, w);
  for (const auto& a : applied.applied) out.notes.push_back("override: " + a);
  for (const auto& w : applied.warnings) out.notes.push_back("warning: " + w);
  out.entries = std::move(applied.entries);
  return out;
}

FilterConfig filter_config_for(const RunConfig& rc, const std::string& path) {
  FilterConfig cfg = path.empty() ? FilterConfig::preset(sex_flag(rc).value_or(Sex::Male))
                                  : load_filter_config(path);
  if (auto s = sex_flag(rc)) cfg.sex = *s;
  cfg.validate();
  return cfg;
}

// ---------------------------------------------------------------------------

int cmd_fit(const RunConfig& rc, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_file(rc.data, "--data");
  if (!rc.filter_config.empty()) require_file(rc.filter_config, "--filter-config");
  if (!rc.overrides.empty()) require_file(rc.overrides, "--overrides");
  const FilterConfig cfg = filter_config_for(rc, rc.filter_config);
  std::vector<int> degrees = rc.degrees.empty() ? std::vector<int>{2, 3, 4, 5} : rc.degrees;
  for (int d : degrees) {
    if (d < 1) throw Error(ErrorKind::Config, "--degrees entries must be at least 1");
  }
  int selected = rc.select_degree.value_or(
      std::find(degrees.begin(), degrees.end(), 4) != degrees.end() ? 4
                                                                   : *std::max_element(degrees.begin(), degrees.end()));
  if (std::find(degrees.begin(), degrees.end(), selected) == degrees.end()) {
    throw Error(ErrorKind::Config, "--select-degree must be one of --degrees");
  }
  const DiagnosticsOptions opts = diagnostics_options(rc);
  const fs::path dir = prepare_out_dir(rc.out_dir);

  LoadedEntries loaded = load_entries(rc, err);
  const FitSample sample = select_top_n(loaded.entries, cfg);
  const auto points = to_data_points(sample);
  const auto sweep = fit_sweep(points, degrees);

  std::optional<ScoringModel> chosen;
  std::string chosen_error;
  Interval scan_range;
  std::vector<std::pair<int, std::string>> reports;
  for (const auto& s : sweep) {
    if (!s.report) {
      warn(err, "degree " + std::to_string(s.degree) + ": " + s.error);
      continue;
    }
    const std::string label = "fit-degree-" + std::to_string(s.degree);
    try {
      ScoringModel m = model_from_fit(*s.report, sample, cfg, label);
      scan_range = m.domain_kg();
      reports.emplace_back(s.degree, fit_report_json(*s.report, m));
      if (s.degree == selected) chosen = std::move(m);
    } catch (const Error& e) {
      reports.emplace_back(s.degree, fit_report_json(*s.report, cfg.sex, e.what()));
      if (s.degree == selected) chosen_error = e.what();
      warn(err, "degree " + std::to_string(s.degree) + " cannot be packaged: " + e.what());
    }
  }
  if (scan_range.width() <= 0.0) {
    // Every degree failed; the summary still records why.
    scan_range = Interval{cfg.bodyweight_min_kg.value_or(0.0), cfg.bodyweight_max_kg.value_or(1.0)};
  }
  const auto summary = summarize_degrees(sweep, scan_range, opts);

  for (const auto& [d, text] : reports) write_file_atomic(dir / ("fit_deg" + std::to_string(d) + ".json"), text);
  for (const auto& s : sweep) {
    if (s.report) {
      write_file_atomic(dir / ("residuals_deg" + std::to_string(s.degree) + ".csv"), residuals_csv(s.report->residuals));
    }
  }
  write_file_atomic(dir / "degree_selection.json", degree_summary_json(summary, selected));
  write_file_atomic(dir / "degree_selection.csv", degree_summary_csv(summary));
  write_file_atomic(dir / "sample.csv", sample_csv(sample));
  write_file_atomic(dir / "exclusions.csv", exclusions_csv(sample.excluded_log));
  write_file_atomic(dir / "row_errors.csv", row_errors_csv(loaded.row_errors));
  write_file_atomic(dir / "class_counts.csv", class_counts_csv(sample.per_class_counts));
  write_run_log(dir, args, loaded.notes);

  if (!chosen) {
    const auto it = std::find_if(sweep.begin(), sweep.end(), [&](const SweepEntry& s) { return s.degree == selected; });
    const std::string why = chosen_error.empty() && it != sweep.end() ? it->error : chosen_error;
    throw Error(ErrorKind::Fit, "selected degree " + std::to_string(selected) + " failed: " + why);
  }
  save_model_file(dir / "model.json", *chosen);
  write_file_atomic(dir / "curve.csv", curve_csv(chosen->poly(), chosen->extrapolation_kg(), rc.grid_step));

  for (const auto& row : summary) {
    if (!row.ok) continue;
    out << "degree " << row.degree << ": R^2 " << format_number(round_half_away(row.r_squared, 4))
        << ", plateaus " << row.plateaus.size() << ", monotone " << (row.monotone ? "yes" : "no")
        << (row.implausible() ? "  [implausible]" : "") << "\n";
  }
  out << "selected degree " << selected << " -> " << (dir / "model.json").string() << "\n";
  return kOk;
}

int cmd_score(const RunConfig& rc, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_model(rc.model, "--model");
  const bool single = rc.bodyweight || rc.total;
  if (single && !(rc.bodyweight && rc.total)) {
    throw Error(ErrorKind::Config, "--bodyweight and --total go together");
  }
  if (single == !rc.data.empty()) {
    throw Error(ErrorKind::Config, "give either --bodyweight/--total or --data");
  }
  const ScoringModel model = resolve_model(rc.model, sex_flag(rc), wilks_path(rc));

  if (single) {
    const Score s = score(model, *rc.bodyweight, *rc.total);
    out << format_points(s.points) << "\n";
    if (s.extrapolated) {
      warn(err, "bodyweight " + format_number(*rc.bodyweight) + " kg is outside the fitted domain " +
                    model.domain_kg().to_string() + "; score is extrapolated");
    }
    return kOk;
  }

  require_file(rc.data, "--data");
  if (!rc.overrides.empty()) require_file(rc.overrides, "--overrides");
  LoadedEntries loaded = load_entries(rc, err);
  const auto outcome = score_entries(loaded.entries, model, class_boundaries_for(model.sex()));
  for (const auto& s : outcome.skipped) {
    if (s.reason != "sex") warn(err, s.entry.lifter_id + ": " + s.reason);
  }
  const std::string text = scored_csv(outcome.scored);
  if (rc.out_dir.empty()) {
    out << text;
  } else {
    const fs::path dir = prepare_out_dir(rc.out_dir);
    write_file_atomic(dir / "scored.csv", text);
    write_run_log(dir, args, loaded.notes);
  }
  return kOk;
}

int cmd_rank(const RunConfig& rc, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_model(rc.model, "--model");
  require_file(rc.data, "--data");
  if (!rc.overrides.empty()) require_file(rc.overrides, "--overrides");
  std::vector<ScoringModel> models{resolve_model(rc.model, sex_flag(rc), wilks_path(rc))};
  if (!rc.model2.empty()) {
    require_model(rc.model2, "--model2");
    std::optional<Sex> other = models.front().sex() == Sex::Male ? Sex::Female : Sex::Male;
    models.push_back(resolve_model(rc.model2, other, wilks_path(rc)));
    if (models[0].sex() == models[1].sex()) throw Error(ErrorKind::Config, "--model and --model2 must be for different sexes");
  }
  const DiagnosticsOptions opts = diagnostics_options(rc);

  LoadedEntries loaded = load_entries(rc, err);
  std::vector<ScoredEntry> ranked;
  for (const Entry& e : loaded.entries) {
    auto m = std::find_if(models.begin(), models.end(), [&](const ScoringModel& x) { return x.sex() == e.sex; });
    if (m == models.end()) {
      warn(err, e.lifter_id + ": no model for sex " + std::string(sex_code(e.sex)) + ", excluded");
      continue;
    }
    if (!m->extrapolation_kg().contains(e.bodyweight_kg)) {
      warn(err, e.lifter_id + ": bodyweight " + format_number(e.bodyweight_kg) + " kg outside " +
                    m->extrapolation_kg().to_string() + ", excluded");
      continue;
    }
    const Score s = score(*m, e.bodyweight_kg, e.total_kg);
    ranked.push_back({e, assign_weight_class(e.bodyweight_kg, class_boundaries_for(e.sex)), s.points, s.extrapolated});
  }
  std::sort(ranked.begin(), ranked.end(), scored_ranks_before);

  // Class distribution of the combined top k, labelled "<sex> <class>".
  std::vector<std::string> labels;
  for (Sex sex : {Sex::Male, Sex::Female}) {
    if (std::none_of(models.begin(), models.end(), [&](const ScoringModel& m) { return m.sex() == sex; })) continue;
    for (const auto& l : class_labels(class_boundaries_for(sex))) labels.push_back(std::string(sex_code(sex)) + " " + l);
  }
  std::vector<ScoredEntry> tagged = ranked;
  for (auto& t : tagged) t.class_label = std::string(sex_code(t.entry.sex)) + " " + t.class_label;
  const ClassCounts counts = top_k_distribution(tagged, opts.top_k, labels);
  std::string table = "sex,class,count\n";
  for (const auto& [label, n] : counts) {
    table += label.substr(0, 1) + "," + label.substr(2) + "," + std::to_string(n) + "\n";
  }

  if (rc.out_dir.empty()) {
    out << ranked_csv(ranked);
    out << "\n" << table;
  } else {
    const fs::path dir = prepare_out_dir(rc.out_dir);
    write_file_atomic(dir / "ranked.csv", ranked_csv(ranked));
    write_file_atomic(dir / "topk.csv", table);
    write_run_log(dir, args, loaded.notes);
    out << "ranked " << ranked.size() << " entries -> " << (dir / "ranked.csv").string() << "\n";
  }
  return kOk;
}

void write_diagnostics(const fs::path& dir, const ScoringModel& model, std::span<const Entry> entries,
                       const std::vector<double>& boundaries, const DiagnosticsOptions& opts,
                       double grid_step, std::ostream& out, std::ostream& err) {
  const auto outcome = score_entries(entries, model, boundaries);
  for (const auto& s : outcome.skipped) {
    if (s.reason != "sex") warn(err, s.entry.lifter_id + ": " + s.reason);
  }
  const auto labels = class_labels(boundaries);
  const DiagnosticsReport rep = diagnose(outcome.scored, model, labels, opts);
  if (!rep.trend_error.empty()) warn(err, "trend: " + rep.trend_error);

  std::vector<DataPoint> pts;
  for (const auto& s : outcome.scored) pts.push_back({s.entry.bodyweight_kg, s.entry.total_kg});
  write_file_atomic(dir / "diagnostics.json", diagnostics_json(rep, model));
  write_file_atomic(dir / "scored.csv", scored_csv(outcome.scored));
  write_file_atomic(dir / "residuals.csv", residuals_csv(residuals(model.poly(), pts)));
  write_file_atomic(dir / "curve.csv", curve_csv(model.poly(), model.extrapolation_kg(), grid_step));
  write_file_atomic(dir / "topk.csv", class_counts_csv(rep.top_k_class_counts));

  const std::string label = model.fit_meta() ? model.fit_meta()->source_label : std::string("model");
  out << label << ": ";
  if (rep.trend) {
    out << "trend slope " << format_number(round_half_away(rep.trend->slope, 4)) << " points/kg"
        << (rep.trend_within_fairness ? " (horizontal)" : " (tilted)");
  } else {
    out << "trend undefined";
  }
  out << ", max class share " << format_number(round_half_away(rep.max_class_share, 4))
      << ", monotone " << (rep.monotone ? "yes" : "no") << ", plateaus " << rep.plateau_intervals.size() << "\n";
}

int cmd_diagnose(const RunConfig& rc, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_model(rc.model, "--model");
  if (!rc.model2.empty()) require_model(rc.model2, "--model2");
  require_file(rc.data, "--data");
  if (!rc.filter_config.empty()) require_file(rc.filter_config, "--filter-config");
  if (!rc.overrides.empty()) require_file(rc.overrides, "--overrides");
  const DiagnosticsOptions opts = diagnostics_options(rc);

  std::optional<FilterConfig> cfg;
  if (!rc.filter_config.empty()) cfg = filter_config_for(rc, rc.filter_config);
  std::optional<Sex> hint = sex_flag(rc);
  if (!hint && cfg) hint = cfg->sex;
  std::vector<ScoringModel> models{resolve_model(rc.model, hint, wilks_path(rc))};
  if (!rc.model2.empty()) models.push_back(resolve_model(rc.model2, hint.value_or(models.front().sex()), wilks_path(rc)));
  const fs::path dir = prepare_out_dir(rc.out_dir);

  LoadedEntries loaded = load_entries(rc, err);
  std::vector<Entry> entries;
  if (cfg) {
    const FitSample sample = select_top_n(loaded.entries, *cfg);
    for (const auto& p : sample.points) entries.push_back(p.entry);
    write_file_atomic(dir / "sample.csv", sample_csv(sample));
  } else {
    entries = loaded.entries;
  }

  for (std::size_t i = 0; i < models.size(); ++i) {
    const fs::path sub = models.size() == 1 ? dir : dir / ("model" + std::to_string(i + 1));
    fs::create_directories(sub);
    const auto boundaries = cfg && cfg->sex == models[i].sex() ? cfg->class_boundaries_kg
                                                                 : class_boundaries_for(models[i].sex());
    write_diagnostics(sub, models[i], entries, boundaries, opts, rc.grid_step, out, err);
  }
  write_run_log(dir, args, loaded.notes);
  return kOk;
}

int cmd_bias(const RunConfig& rc, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  require_file(rc.data, "--data");
  require_file(rc.filter_config, "--filter-config");
  require_file(rc.restricted_config, "--restricted-config");
  if (!rc.overrides.empty()) require_file(rc.overrides, "--overrides");
  const FilterConfig full = filter_config_for(rc, rc.filter_config);
  const FilterConfig restricted = filter_config_for(rc, rc.restricted_config);
  if (rc.degrees.size() > 1) throw Error(ErrorKind::Config, "bias-experiment takes a single degree");
  const int degree = rc.degrees.empty() ? 4 : rc.degrees.front();
  const DiagnosticsOptions opts = diagnostics_options(rc);
  const fs::path dir = prepare_out_dir(rc.out_dir);

  LoadedEntries loaded = load_entries(rc, err);
  const BiasExperiment exp = [&] {
    try {
      return bias_experiment(loaded.entries, full, restricted, degree, opts);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ModelIntegrity) throw Error(ErrorKind::Fit, e.what());
      throw;
    }
  }();
  write_file_atomic(dir / "bias_experiment.json", bias_experiment_json(exp));
  for (const auto* half : {&exp.full, &exp.restricted}) {
    const fs::path sub = dir / (half == &exp.full ? "full" : "restricted");
    save_model_file(sub / "model.json", half->model);
    write_file_atomic(sub / "sample.csv", sample_csv(half->sample));
    write_file_atomic(sub / "scored.csv", scored_csv(half->scored));
    write_file_atomic(sub / "curve.csv", curve_csv(half->model.poly(), half->model.extrapolation_kg(), rc.grid_step));
  }
  write_run_log(dir, args, loaded.notes);
  out << "light-class (< " << format_number(exp.light_limit_kg) << " kg) score spread: all-classes fit "
      << format_points(exp.full.light_spread) << ", restricted fit " << format_points(exp.restricted.light_spread)
      << "\n";
  return kOk;
}

int cmd_curve(const RunConfig& rc, const std::vector<std::string>& args, std::ostream& out, std::ostream&) {
  require_model(rc.model, "--model");
  if (!(rc.grid_step > 0.0)) throw Error(ErrorKind::Config, "--grid-step must be positive");
  const ScoringModel model = resolve_model(rc.model, sex_flag(rc), wilks_path(rc));
  const std::string text = curve_csv(model.poly(), model.extrapolation_kg(), rc.grid_step);
  if (rc.out_dir.empty()) {
    out << text;
  } else {
    const fs::path dir = prepare_out_dir(rc.out_dir);
    write_file_atomic(dir / "curve.csv", text);
    write_run_log(dir, args, {});
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit, score and diagnose bodyweight-adjusted powerlifting scoring models", "liftscore"};
  app.require_subcommand(1);
  RunConfig rc;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", rc.out_dir, "Output directory (created if absent)");
    sub->add_option("--sex", rc.sex, "M or F; selects the classic Wilks variant and overrides config sex");
    sub->add_option("--wilks-file", rc.wilks_file, "Classic Wilks coefficient file");
  };
  auto add_diag = [&](CLI::App* sub) {
    sub->add_option("--top-k", rc.top_k, "Entries in the top-k class distribution")->capture_default_str();
    sub->add_option("--fairness-slope", rc.fairness_slope, "|points/kg| regarded as horizontal")->capture_default_str();
    sub->add_option("--plateau-threshold", rc.plateau_threshold, "Plateau flatness, kg per kg")->capture_default_str();
    sub->add_option("--max-class-share", rc.max_class_share, "Advisory bound on one class's top-k share")->capture_default_str();
    sub->add_option("--grid-step", rc.grid_step, "Curve grid step, kg")->capture_default_str();
  };

  auto* fit = app.add_subcommand("fit", "Fit polynomial degrees to a top-N sample and write a model");
  fit->add_option("--data", rc.data, "openpowerlifting CSV")->required();
  fit->add_option("--filter-config", rc.filter_config, "FilterConfig JSON");
  fit->add_option("--overrides", rc.overrides, "Bodyweight overrides CSV");
  fit->add_option("--degrees", rc.degrees, "Degrees to fit (default 2 3 4 5)")->delimiter(',');
  fit->add_option("--select-degree", rc.select_degree, "Degree written to model.json (default 4 if fitted)");
  add_common(fit);
  add_diag(fit);

  auto* sc = app.add_subcommand("score", "Score one result or a CSV batch");
  sc->add_option("--model", rc.model, "Model file or built-in name")->required();
  sc->add_option("--bodyweight", rc.bodyweight, "Bodyweight, kg");
  sc->add_option("--total", rc.total, "Total, kg");
  sc->add_option("--data", rc.data, "Batch CSV");
  sc->add_option("--overrides", rc.overrides, "Bodyweight overrides CSV");
  add_common(sc);

  auto* rk = app.add_subcommand("rank", "Rank a mixed-sex batch with one model per sex");
  rk->add_option("--model", rc.model, "Model for one sex")->required();
  rk->add_option("--model2", rc.model2, "Model for the other sex");
  rk->add_option("--data", rc.data, "Batch CSV")->required();
  rk->add_option("--overrides", rc.overrides, "Bodyweight overrides CSV");
  add_common(rk);
  add_diag(rk);

  auto* dg = app.add_subcommand("diagnose", "Trend, top-k, monotonicity and plateau report");
  dg->add_option("--model", rc.model, "Model file or built-in name")->required();
  dg->add_option("--model2", rc.model2, "Second model for side-by-side comparison");
  dg->add_option("--data", rc.data, "Batch CSV")->required();
  dg->add_option("--filter-config", rc.filter_config, "Select the top-N sample first");
  dg->add_option("--overrides", rc.overrides, "Bodyweight overrides CSV");
  add_common(dg);
  add_diag(dg);

  auto* be = app.add_subcommand("bias-experiment", "Compare an all-classes fit with a restricted fit");
  be->add_option("--data", rc.data, "openpowerlifting CSV")->required();
  be->add_option("--filter-config", rc.filter_config, "Full (all-classes) FilterConfig")->required();
  be->add_option("--restricted-config", rc.restricted_config, "Restricted FilterConfig")->required();
  be->add_option("--degrees", rc.degrees, "Single degree (default 4)")->delimiter(',');
  be->add_option("--overrides", rc.overrides, "Bodyweight overrides CSV");
  add_common(be);
  add_diag(be);

  auto* cv = app.add_subcommand("curve", "Emit the bodyweight -> predicted total grid");
  cv->add_option("--model", rc.model, "Model file or built-in name")->required();
  cv->add_option("--grid-step", rc.grid_step, "Grid step, kg")->capture_default_str();
  add_common(cv);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    emit_error(err, kConfigError, "config", e.what());
    return kConfigError;
  }

  try {
    if (fit->parsed()) return cmd_fit(rc, args, out, err);
    if (sc->parsed()) return cmd_score(rc, args, out, err);
    if (rk->parsed()) return cmd_rank(rc, args, out, err);
    if (dg->parsed()) return cmd_diagnose(rc, args, out, err);
    if (be->parsed()) return cmd_bias(rc, args, out, err);
    if (cv->parsed()) return cmd_curve(rc, args, out, err);
  } catch (const Error& e) {
    const int code = exit_code_for(e.kind());
    emit_error(err, code, to_string(e.kind()), e.what());
    return code;
  } catch (const std::exception& e) {
    emit_error(err, kFailure, "internal", e.what());
    return kFailure;
  }
  return kFailure;
}

}  // namespace liftscore::cli
