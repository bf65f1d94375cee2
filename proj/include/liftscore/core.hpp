#pragma once

#include <array>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liftscore/errors.hpp"
#include "liftscore/polynomial.hpp"

namespace liftscore {

enum class Sex { Male, Female };

/// "M" / "F".
std::string_view sex_code(Sex sex);
std::optional<Sex> parse_sex(std::string_view code);

/// Equipment labels as they appear in openpowerlifting exports. Only Raw and
/// Wraps are acceptable for fitting; the rest exist so they can be filtered.
enum class Equipment { Raw, Wraps, Straps, SinglePly, MultiPly, Unlimited };

std::string_view equipment_label(Equipment eq);
std::optional<Equipment> parse_equipment(std::string_view label);
constexpr bool is_raw_family(Equipment eq) {
  return eq == Equipment::Raw || eq == Equipment::Wraps;
}

/// Calendar date, ISO-8601 on the wire.
struct Date {
  std::chrono::year_month_day ymd{};

  static std::optional<Date> parse(std::string_view iso);
  std::string to_string() const;

  friend bool operator==(const Date&, const Date&) = default;
  friend auto operator<=>(const Date& a, const Date& b) { return a.ymd <=> b.ymd; }
};

/// One competition result.
struct Entry {
  std::string lifter_id;
  Sex sex = Sex::Male;
  double bodyweight_kg = 0.0;
  double total_kg = 0.0;
  Equipment equipment = Equipment::Raw;
  Date date;
  std::string event = "SBD";
  std::string meet_name;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double width() const { return hi - lo; }
  std::string to_string() const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct FitMeta {
  double r_squared = 0.0;
  std::optional<std::size_t> sample_size;
  std::string source_label;
  std::optional<Date> snapshot_date;

  friend bool operator==(const FitMeta&, const FitMeta&) = default;
};

/// A bodyweight-adjustment polynomial packaged for scoring. Construction
/// validates that the predicted total is positive over the whole
/// extrapolation interval (0.1 kg grid plus both endpoints).
class ScoringModel {
 public:
  static constexpr double kValidationStepKg = 0.1;

  ScoringModel(Sex sex, Poly poly, double normalization_points, Interval domain_kg,
               Interval extrapolation_kg, std::optional<FitMeta> fit_meta = std::nullopt);

  Sex sex() const { return sex_; }
  const Poly& poly() const { return poly_; }
  double normalization_points() const { return normalization_points_; }
  const Interval& domain_kg() const { return domain_; }
  const Interval& extrapolation_kg() const { return extrapolation_; }
  const std::optional<FitMeta>& fit_meta() const { return fit_meta_; }

  double predicted_total(double bodyweight_kg) const { return eval_poly(poly_, bodyweight_kg); }

  friend bool operator==(const ScoringModel&, const ScoringModel&) = default;

 private:
  Sex sex_;
  Poly poly_;
  double normalization_points_;
  Interval domain_;
  Interval extrapolation_;
  std::optional<FitMeta> fit_meta_;
};

struct Score {
  double points = 0.0;
  bool extrapolated = false;
};

/// points = total * normalization / f(bodyweight).
Score score(const ScoringModel& model, double bodyweight_kg, double total_kg);

/// Classic Wilks denominator: a 5th-order polynomial per sex, loaded from a
/// coefficient file (see model_io.hpp).
struct WilksClassicCoefficients {
  static constexpr double kNormalizationPoints = 500.0;

  Sex sex = Sex::Male;
  std::array<double, 6> coefficients{};
  Interval valid_kg;
  std::string source;

  Poly poly() const;
};

double wilks_classic_score(const WilksClassicCoefficients& coeffs, double bodyweight_kg,
                           double total_kg);

/// Wilks as an ordinary ScoringModel (normalization 500, domain = validity
/// interval) so every diagnostic applies to it unchanged.
ScoringModel to_scoring_model(const WilksClassicCoefficients& coeffs);

/// 4th-order revised models. The printed x^4 coefficients are read as
/// 9.31e-6 (men) and -5.64e-6 (women); see README.
ScoringModel revised_2019_men();
ScoringModel revised_2019_women();

/// Round half away from zero to `decimals` places.
double round_half_away(double value, int decimals);

/// lo, lo + step, lo + 2 step, ... and always hi as the last point.
std::vector<double> make_grid(const Interval& range, double step);

}  // namespace liftscore
