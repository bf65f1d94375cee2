#include "liftscore/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <json.hpp>

#include "liftscore/csv.hpp"
#include "liftscore/io.hpp"

namespace liftscore {

namespace {

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t") == std::string_view::npos;
}

std::map<std::string, std::size_t> header_index(const csv::Row& header) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < header.size(); ++i) idx.emplace(header[i], i);
  return idx;
}

std::size_t require_column(const std::map<std::string, std::size_t>& idx, const char* name) {
  auto it = idx.find(name);
  if (it == idx.end()) {
    throw Error(ErrorKind::Ingest, std::string("missing required column ") + name);
  }
  return it->second;
}

}  // namespace

ParseResult parse_entries(std::string_view csv_text) {
  const auto records = csv::parse(csv_text);
  if (records.empty()) throw Error(ErrorKind::Ingest, "input has no header line");
  const auto idx = header_index(records.front().fields);
  const std::size_t c_name = require_column(idx, "Name");
  const std::size_t c_sex = require_column(idx, "Sex");
  const std::size_t c_eq = require_column(idx, "Equipment");
  const std::size_t c_bw = require_column(idx, "BodyweightKg");
  const std::size_t c_total = require_column(idx, "TotalKg");
  const std::size_t c_date = require_column(idx, "Date");
  const std::size_t c_event = require_column(idx, "Event");
  const auto meet_it = idx.find("MeetName");
  const std::size_t width = std::max({c_name, c_sex, c_eq, c_bw, c_total, c_date, c_event}) + 1;

  ParseResult out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const auto& f = rec.fields;
    auto fail = [&](std::string reason) { out.row_errors.push_back({rec.line_no, std::move(reason)}); };
    if (f.size() < width) {
      fail("truncated row");
      continue;
    }
    Entry e;
    e.lifter_id = f[c_name];
    if (blank(e.lifter_id)) {
      fail("missing name");
      continue;
    }
    auto sex = parse_sex(f[c_sex]);
    if (!sex) {
      fail("unknown sex '" + f[c_sex] + "'");
      continue;
    }
    e.sex = *sex;
    auto eq = parse_equipment(f[c_eq]);
    if (!eq) {
      fail("unknown equipment '" + f[c_eq] + "'");
      continue;
    }
    e.equipment = *eq;
    auto date = Date::parse(f[c_date]);
    if (!date) {
      fail("invalid date '" + f[c_date] + "'");
      continue;
    }
    e.date = *date;
    e.event = f[c_event];
    if (blank(e.event)) {
      fail("missing event");
      continue;
    }
    if (meet_it != idx.end() && meet_it->second < f.size()) e.meet_name = f[meet_it->second];

    if (blank(f[c_total])) {
      fail("missing total");
      continue;
    }
    auto total = parse_double(f[c_total]);
    if (!total) {
      fail("non-numeric total");
      continue;
    }
    if (!(*total > 0.0)) {
      fail("non-positive total");
      continue;
    }
    e.total_kg = *total;

    if (blank(f[c_bw])) {
      fail("missing bodyweight");
      out.unweighed.push_back({rec.line_no, std::move(e)});
      continue;
    }
    auto bw = parse_double(f[c_bw]);
    if (!bw) {
      fail("non-numeric bodyweight");
      continue;
    }
    if (!(*bw > 0.0)) {
      fail("non-positive bodyweight");
      continue;
    }
    e.bodyweight_kg = *bw;
    out.entries.push_back(std::move(e));
  }
  return out;
}

ParseResult parse_entries_file(const std::filesystem::path& path) {
  return parse_entries(read_text_file(path));
}

std::vector<BodyweightOverride> parse_overrides(std::string_view csv_text) {
  const auto records = csv::parse(csv_text);
  if (records.empty()) return {};
  const auto idx = header_index(records.front().fields);
  auto col = [&](const char* name) {
    auto it = idx.find(name);
    if (it == idx.end()) throw Error(ErrorKind::Config, std::string("overrides file lacks column ") + name);
    return it->second;
  };
  const std::size_t c_id = col("lifter_id"), c_meet = col("meet_name"), c_bw = col("bodyweight_kg"),
                    c_note = col("note");
  const std::size_t width = std::max({c_id, c_meet, c_bw, c_note}) + 1;
  std::vector<BodyweightOverride> out;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    const std::string where = "overrides line " + std::to_string(records[r].line_no);
    if (f.size() < width) throw Error(ErrorKind::Config, where + ": truncated row");
    auto bw = parse_double(f[c_bw]);
    if (!bw || !(*bw > 0.0)) {
      throw Error(ErrorKind::Config, where + ": replacement bodyweight must be positive");
    }
    if (blank(f[c_note])) throw Error(ErrorKind::Config, where + ": provenance note is required");
    out.push_back({f[c_id], f[c_meet], *bw, f[c_note]});
  }
  return out;
}

std::vector<BodyweightOverride> load_overrides_file(const std::filesystem::path& path) {
  return parse_overrides(read_text_file(path));
}

OverrideOutcome apply_overrides(std::vector<Entry> entries,
                                std::span<const BodyweightOverride> overrides,
                                std::span<const UnweighedRow> unweighed) {
  OverrideOutcome out;
  for (const auto& ov : overrides) {
    std::size_t hits = 0;
    for (auto& e : entries) {
      if (e.lifter_id == ov.lifter_id && e.meet_name == ov.meet_name) {
        out.applied.push_back("bodyweight of " + e.lifter_id + " at " + e.meet_name + " " +
                              format_number(e.bodyweight_kg) + " -> " +
                              format_number(ov.replacement_bodyweight_kg) + " kg (" +
                              ov.provenance_note + ")");
        e.bodyweight_kg = ov.replacement_bodyweight_kg;
        ++hits;
      }
    }
    for (const auto& u : unweighed) {
      if (u.entry.lifter_id == ov.lifter_id && u.entry.meet_name == ov.meet_name) {
        Entry e = u.entry;
        e.bodyweight_kg = ov.replacement_bodyweight_kg;
        out.applied.push_back("bodyweight of " + e.lifter_id + " at " + e.meet_name +
                              " (line " + std::to_string(u.line_no) + ", missing) -> " +
                              format_number(ov.replacement_bodyweight_kg) + " kg (" +
                              ov.provenance_note + ")");
        entries.push_back(std::move(e));
        ++hits;
      }
    }
    if (hits == 0) {
      out.warnings.push_back("override for " + ov.lifter_id + " at " + ov.meet_name +
                             " matched no entry");
    }
  }
  out.entries = std::move(entries);
  return out;
}

std::vector<double> men_class_boundaries() {
  return {44, 48, 52, 56, 60, 67.5, 75, 82.5, 90, 100, 120, 140};
}

std::vector<double> women_class_boundaries() {
  return {44, 48, 52, 56, 60, 67.5, 75, 82.5, 90};
}

std::vector<double> class_boundaries_for(Sex sex) {
  return sex == Sex::Male ? men_class_boundaries() : women_class_boundaries();
}

std::string assign_weight_class(double bodyweight_kg, std::span<const double> boundaries_kg) {
  if (boundaries_kg.empty()) throw Error(ErrorKind::Config, "no weight-class boundaries configured");
  for (double b : boundaries_kg) {
    if (bodyweight_kg <= b) return "-" + format_number(b);
  }
  return "+" + format_number(boundaries_kg.back());
}

std::vector<std::string> class_labels(std::span<const double> boundaries_kg) {
  if (boundaries_kg.empty()) throw Error(ErrorKind::Config, "no weight-class boundaries configured");
  std::vector<std::string> out;
  for (double b : boundaries_kg) out.push_back("-" + format_number(b));
  out.push_back("+" + format_number(boundaries_kg.back()));
  return out;
}

void FilterConfig::validate() const {
  if (class_boundaries_kg.empty()) throw Error(ErrorKind::Config, "class_boundaries_kg is empty");
  for (std::size_t i = 0; i < class_boundaries_kg.size(); ++i) {
    if (!(class_boundaries_kg[i] > 0.0) ||
        (i > 0 && !(class_boundaries_kg[i] > class_boundaries_kg[i - 1]))) {
      throw Error(ErrorKind::Config, "class_boundaries_kg must be positive and strictly ascending");
    }
  }
  if (top_n < 1) throw Error(ErrorKind::Config, "top_n must be at least 1");
  if (bodyweight_min_kg && bodyweight_max_kg && !(*bodyweight_min_kg < *bodyweight_max_kg)) {
    throw Error(ErrorKind::Config, "bodyweight_min_kg must be below bodyweight_max_kg");
  }
  if (equipment_allowed.empty()) throw Error(ErrorKind::Config, "equipment_allowed is empty");
  for (Equipment eq : equipment_allowed) {
    if (!is_raw_family(eq)) {
      throw Error(ErrorKind::Config, "only Raw and Wraps results can be fitted, got " +
                                         std::string(equipment_label(eq)));
    }
  }
  if (event_required.empty()) throw Error(ErrorKind::Config, "event_required is empty");
  if (normalization_points && !(*normalization_points > 0.0)) {
    throw Error(ErrorKind::Config, "normalization_points must be positive");
  }
  if (extrapolation_kg && !(extrapolation_kg->lo > 0.0 && extrapolation_kg->lo < extrapolation_kg->hi)) {
    throw Error(ErrorKind::Config, "extrapolation_kg must be a positive [lo, hi] with lo < hi");
  }
}

bool FilterConfig::allows(Equipment eq) const {
  return std::find(equipment_allowed.begin(), equipment_allowed.end(), eq) !=
         equipment_allowed.end();
}

FilterConfig FilterConfig::preset(Sex sex) {
  FilterConfig c;
  c.sex = sex;
  c.class_boundaries_kg = class_boundaries_for(sex);
  return c;
}

using Json = nlohmann::ordered_json;

FilterConfig filter_config_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("filter config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Config, "filter config must be a JSON object");
  auto sex_it = doc.find("sex");
  if (sex_it == doc.end() || !sex_it->is_string() || !parse_sex(sex_it->get<std::string>())) {
    throw Error(ErrorKind::Config, "filter config needs sex \"M\" or \"F\"");
  }
  FilterConfig c = FilterConfig::preset(*parse_sex(sex_it->get<std::string>()));
  try {
    if (auto it = doc.find("equipment_allowed"); it != doc.end()) {
      c.equipment_allowed.clear();
      for (const auto& label : *it) {
        auto eq = parse_equipment(label.get<std::string>());
        if (!eq) throw Error(ErrorKind::Config, "unknown equipment " + label.get<std::string>());
        c.equipment_allowed.push_back(*eq);
      }
    }
    if (auto it = doc.find("event_required"); it != doc.end()) c.event_required = it->get<std::string>();
    if (auto it = doc.find("bodyweight_min_kg"); it != doc.end() && !it->is_null()) {
      c.bodyweight_min_kg = it->get<double>();
    }
    if (auto it = doc.find("bodyweight_max_kg"); it != doc.end() && !it->is_null()) {
      c.bodyweight_max_kg = it->get<double>();
    }
    if (auto it = doc.find("class_boundaries_kg"); it != doc.end()) {
      if (it->is_string()) {
        const auto name = it->get<std::string>();
        if (name == "men") c.class_boundaries_kg = men_class_boundaries();
        else if (name == "women") c.class_boundaries_kg = women_class_boundaries();
        else throw Error(ErrorKind::Config, "unknown class preset " + name);
      } else {
        c.class_boundaries_kg = it->get<std::vector<double>>();
      }
    }
    if (auto it = doc.find("top_n"); it != doc.end()) {
      if (!it->is_number_integer() || it->get<long long>() < 1) {
        throw Error(ErrorKind::Config, "top_n must be a positive integer");
      }
      c.top_n = it->get<std::size_t>();
    }
    if (auto it = doc.find("anchor_rows"); it != doc.end()) {
      for (const auto& a : *it) {
        auto date = Date::parse(a.at("date").get<std::string>());
        if (!date) throw Error(ErrorKind::Config, "anchor date must be YYYY-MM-DD");
        c.anchor_rows.push_back({a.at("lifter_id").get<std::string>(), *date});
      }
    }
    if (auto it = doc.find("normalization_points"); it != doc.end() && !it->is_null()) {
      c.normalization_points = it->get<double>();
    }
    if (auto it = doc.find("extrapolation_kg"); it != doc.end() && !it->is_null()) {
      auto v = it->get<std::vector<double>>();
      if (v.size() != 2) throw Error(ErrorKind::Config, "extrapolation_kg must be [lo, hi]");
      c.extrapolation_kg = Interval{v[0], v[1]};
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::Config, std::string("filter config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string filter_config_to_json(const FilterConfig& c) {
  Json doc;
  doc["sex"] = std::string(sex_code(c.sex));
  Json eq = Json::array();
  for (Equipment e : c.equipment_allowed) eq.push_back(std::string(equipment_label(e)));
  doc["equipment_allowed"] = std::move(eq);
  doc["event_required"] = c.event_required;
  doc["bodyweight_min_kg"] = c.bodyweight_min_kg ? Json(*c.bodyweight_min_kg) : Json(nullptr);
  doc["bodyweight_max_kg"] = c.bodyweight_max_kg ? Json(*c.bodyweight_max_kg) : Json(nullptr);
  doc["class_boundaries_kg"] = c.class_boundaries_kg;
  doc["top_n"] = c.top_n;
  Json anchors = Json::array();
  for (const auto& a : c.anchor_rows) anchors.push_back({{"lifter_id", a.lifter_id}, {"date", a.date.to_string()}});
  doc["anchor_rows"] = std::move(anchors);
  if (c.normalization_points) doc["normalization_points"] = *c.normalization_points;
  if (c.extrapolation_kg) doc["extrapolation_kg"] = {c.extrapolation_kg->lo, c.extrapolation_kg->hi};
  return doc.dump(2) + "\n";
}

FilterConfig load_filter_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error&) {
    throw Error(ErrorKind::Config, "cannot read filter config " + path.string());
  }
  return filter_config_from_json(text);
}

bool ranks_before(const Entry& a, const Entry& b) {
  auto key = [](const Entry& e) {
    return std::tuple(-e.total_kg, e.bodyweight_kg, e.date, std::string_view(e.lifter_id),
                      std::string_view(e.meet_name), static_cast<int>(e.equipment),
                      std::string_view(e.event), static_cast<int>(e.sex));
  };
  return key(a) < key(b);
}

namespace {

bool exclusion_before(const Exclusion& a, const Exclusion& b) {
  auto key = [](const Exclusion& x) {
    return std::tuple(std::string_view(x.reason), std::string_view(x.entry.lifter_id), x.entry.date,
                      -x.entry.total_kg, x.entry.bodyweight_kg, std::string_view(x.entry.meet_name),
                      static_cast<int>(x.entry.equipment), std::string_view(x.entry.event),
                      static_cast<int>(x.entry.sex));
  };
  return key(a) < key(b);
}

}  // namespace

FitSample select_top_n(std::span<const Entry> entries, const FilterConfig& config) {
  config.validate();
  FitSample sample;
  auto exclude = [&](const Entry& e, std::string reason) {
    sample.excluded_log.push_back({e, std::move(reason)});
  };

  std::vector<Entry> pool;
  for (const Entry& e : entries) {
    if (e.sex != config.sex) exclude(e, "sex");
    else if (!config.allows(e.equipment)) exclude(e, "equipment");
    else if (e.event != config.event_required) exclude(e, "event");
    else pool.push_back(e);
  }

  // One best result per lifter.
  std::sort(pool.begin(), pool.end(), ranks_before);
  std::set<std::string, std::less<>> seen;
  std::vector<Entry> best;
  for (Entry& e : pool) {
    if (seen.insert(e.lifter_id).second) best.push_back(std::move(e));
    else exclude(e, "not lifter's best result");
  }

  const auto labels = class_labels(config.class_boundaries_kg);
  std::map<std::string, std::size_t, std::less<>> kept_in_class;
  std::vector<SamplePoint> top;
  for (Entry& e : best) {  // still in ranking order
    std::string label = assign_weight_class(e.bodyweight_kg, config.class_boundaries_kg);
    if (kept_in_class[label] >= config.top_n) {
      exclude(e, "below top " + std::to_string(config.top_n) + " in class " + label);
      continue;
    }
    ++kept_in_class[label];
    top.push_back({std::move(e), std::move(label), false});
  }

  auto is_anchor = [&](const Entry& e) {
    return std::any_of(config.anchor_rows.begin(), config.anchor_rows.end(), [&](const AnchorRow& a) {
      return a.lifter_id == e.lifter_id && a.date == e.date;
    });
  };
  const Interval bounds{config.bodyweight_min_kg.value_or(-HUGE_VAL),
                        config.bodyweight_max_kg.value_or(HUGE_VAL)};
  for (SamplePoint& p : top) {
    if (bounds.contains(p.entry.bodyweight_kg)) {
      sample.points.push_back(std::move(p));
    } else if (is_anchor(p.entry)) {
      p.anchor = true;
      sample.points.push_back(std::move(p));
    } else {
      exclude(p.entry, "bodyweight outside bounds");
    }
  }

  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& p : sample.points) ++counts[p.class_label];
  std::map<std::string, std::size_t, std::less<>> order;
  for (std::size_t i = 0; i < labels.size(); ++i) order[labels[i]] = i;
  for (const auto& label : labels) sample.per_class_counts.emplace_back(label, counts[label]);

  std::stable_sort(sample.points.begin(), sample.points.end(),
                   [&](const SamplePoint& a, const SamplePoint& b) {
                     const auto ia = order[a.class_label], ib = order[b.class_label];
                     if (ia != ib) return ia < ib;
                     return ranks_before(a.entry, b.entry);
                   });
  std::sort(sample.excluded_log.begin(), sample.excluded_log.end(), exclusion_before);

  if (sample.points.empty()) throw Error(ErrorKind::Ingest, "nothing to fit");
  return sample;
}

}  // namespace liftscore
