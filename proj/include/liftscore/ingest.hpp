#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "liftscore/core.hpp"

namespace liftscore {

// ---------------------------------------------------------------------------
// Parsing

struct RowError {
  std::size_t line_no = 0;
  std::string reason;

  friend bool operator==(const RowError&, const RowError&) = default;
};

/// A row that was well formed except for a blank bodyweight. It is reported
/// in row_errors and kept here so a BodyweightOverride can still recover it.
struct UnweighedRow {
  std::size_t line_no = 0;
  Entry entry;  // bodyweight_kg is 0 until an override supplies it
};

struct ParseResult {
  std::vector<Entry> entries;
  std::vector<RowError> row_errors;
  std::vector<UnweighedRow> unweighed;
};

/// Reads an openpowerlifting-style export. Required columns: Name, Sex,
/// Equipment, BodyweightKg, TotalKg, Date, Event. MeetName is optional and
/// other columns are ignored.
ParseResult parse_entries(std::string_view csv_text);
ParseResult parse_entries_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Bodyweight overrides

struct BodyweightOverride {
  std::string lifter_id;
  std::string meet_name;
  double replacement_bodyweight_kg = 0.0;
  std::string provenance_note;
};

/// CSV with columns lifter_id, meet_name, bodyweight_kg, note.
std::vector<BodyweightOverride> parse_overrides(std::string_view csv_text);
std::vector<BodyweightOverride> load_overrides_file(const std::filesystem::path& path);

struct OverrideOutcome {
  std::vector<Entry> entries;
  std::vector<std::string> applied;   // one annotation per entry changed
  std::vector<std::string> warnings;  // one per override that matched nothing
};

/// Matches on lifter_id AND meet_name. Matching complete entries get the
/// replacement bodyweight; matching unweighed rows are promoted to entries.
OverrideOutcome apply_overrides(std::vector<Entry> entries,
                                std::span<const BodyweightOverride> overrides,
                                std::span<const UnweighedRow> unweighed = {});

// ---------------------------------------------------------------------------
// Weight classes

/// Upper class limits as listed for men: 44 ... 140, then +140. There is no
/// 110 kg class in this list.
std::vector<double> men_class_boundaries();
/// 44 ... 90, then +90.
std::vector<double> women_class_boundaries();
std::vector<double> class_boundaries_for(Sex sex);

/// "-b" for the smallest boundary b >= bodyweight, "+last" above all of them.
std::string assign_weight_class(double bodyweight_kg, std::span<const double> boundaries_kg);
/// Every label assign_weight_class can return, lightest first.
std::vector<std::string> class_labels(std::span<const double> boundaries_kg);

// ---------------------------------------------------------------------------
// Top-N selection

struct AnchorRow {
  std::string lifter_id;
  Date date;

  friend bool operator==(const AnchorRow&, const AnchorRow&) = default;
};

struct FilterConfig {
  Sex sex = Sex::Male;
  std::vector<Equipment> equipment_allowed{Equipment::Raw, Equipment::Wraps};
  std::string event_required = "SBD";
  std::optional<double> bodyweight_min_kg;
  std::optional<double> bodyweight_max_kg;
  std::vector<double> class_boundaries_kg;
  std::size_t top_n = 10;
  std::vector<AnchorRow> anchor_rows;
  // Consumed when a fitted model is packaged; not used by selection.
  std::optional<double> normalization_points;
  std::optional<Interval> extrapolation_kg;

  /// Throws Config on violated invariants.
  void validate() const;
  bool allows(Equipment eq) const;

  static FilterConfig preset(Sex sex);

  friend bool operator==(const FilterConfig&, const FilterConfig&) = default;
};

/// JSON mirror of FilterConfig. class_boundaries_kg may be an array or the
/// preset name "men" / "women"; omitted fields take preset defaults.
FilterConfig filter_config_from_json(std::string_view text);
std::string filter_config_to_json(const FilterConfig& config);
FilterConfig load_filter_config(const std::filesystem::path& path);

struct SamplePoint {
  Entry entry;
  std::string class_label;
  bool anchor = false;

  friend bool operator==(const SamplePoint&, const SamplePoint&) = default;
};

struct Exclusion {
  Entry entry;
  std::string reason;

  friend bool operator==(const Exclusion&, const Exclusion&) = default;
};

using ClassCounts = std::vector<std::pair<std::string, std::size_t>>;

struct FitSample {
  std::vector<SamplePoint> points;
  ClassCounts per_class_counts;  // every class label, lightest first
  std::vector<Exclusion> excluded_log;

  friend bool operator==(const FitSample&, const FitSample&) = default;
};

/// Deterministic result ordering: higher total, then lower bodyweight, then
/// earlier date, then lifter_id (remaining fields only to make it total).
bool ranks_before(const Entry& a, const Entry& b);

/// sex -> equipment -> event -> one best result per lifter -> class ->
/// top_n per class -> bodyweight bounds (anchors exempt). Throws Ingest
/// "nothing to fit" when the sample ends up empty.
FitSample select_top_n(std::span<const Entry> entries, const FilterConfig& config);

}  // namespace liftscore
