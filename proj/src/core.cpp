#include "liftscore/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace liftscore {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InputDomain: return "input_domain";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::ModelIntegrity: return "model_integrity";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
    case ErrorKind::Ingest: return "ingest";
    case ErrorKind::Fit: return "fit";
    case ErrorKind::Statistic: return "statistic";
  }
  return "unknown";
}

std::string_view sex_code(Sex sex) { return sex == Sex::Male ? "M" : "F"; }

std::optional<Sex> parse_sex(std::string_view code) {
  if (code == "M") return Sex::Male;
  if (code == "F") return Sex::Female;
  return std::nullopt;
}

std::string_view equipment_label(Equipment eq) {
  switch (eq) {
    case Equipment::Raw: return "Raw";
    case Equipment::Wraps: return "Wraps";
    case Equipment::Straps: return "Straps";
    case Equipment::SinglePly: return "Single-ply";
    case Equipment::MultiPly: return "Multi-ply";
    case Equipment::Unlimited: return "Unlimited";
  }
  return "Raw";
}

std::optional<Equipment> parse_equipment(std::string_view label) {
  for (Equipment eq : {Equipment::Raw, Equipment::Wraps, Equipment::Straps,
                       Equipment::SinglePly, Equipment::MultiPly, Equipment::Unlimited}) {
    if (label == equipment_label(eq)) return eq;
  }
  return std::nullopt;
}

std::optional<Date> Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
  int y = 0;
  unsigned m = 0, d = 0;
  auto field = [&](std::size_t pos, std::size_t len, auto& out) {
    auto [ptr, ec] = std::from_chars(iso.data() + pos, iso.data() + pos + len, out);
    return ec == std::errc{} && ptr == iso.data() + pos + len;
  };
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
  Date out{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}};
  if (!out.ymd.ok()) return std::nullopt;
  return out;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string Interval::to_string() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "[%g, %g] kg", lo, hi);
  return buf;
}

std::vector<double> make_grid(const Interval& range, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::Config, "grid step must be positive");
  }
  std::vector<double> grid;
  const auto n = static_cast<long long>(std::floor(range.width() / step + 1e-9));
  grid.reserve(static_cast<std::size_t>(n) + 2);
  for (long long i = 0; i <= n; ++i) grid.push_back(range.lo + static_cast<double>(i) * step);
  if (grid.empty()) grid.push_back(range.lo);
  if (range.hi - grid.back() > 1e-9 * step) {
    grid.push_back(range.hi);
  } else {
    grid.back() = range.hi;
  }
  return grid;
}

ScoringModel::ScoringModel(Sex sex, Poly poly, double normalization_points, Interval domain_kg,
                           Interval extrapolation_kg, std::optional<FitMeta> fit_meta)
    : sex_(sex),
      poly_(std::move(poly)),
      normalization_points_(normalization_points),
      domain_(domain_kg),
      extrapolation_(extrapolation_kg),
      fit_meta_(std::move(fit_meta)) {
  if (!(normalization_points_ > 0.0) || !std::isfinite(normalization_points_)) {
    throw Error(ErrorKind::ModelIntegrity, "normalization points must be positive");
  }
  if (!(domain_.lo < domain_.hi)) {
    throw Error(ErrorKind::ModelIntegrity, "domain requires lo < hi, got " + domain_.to_string());
  }
  if (!(extrapolation_.lo <= domain_.lo && extrapolation_.hi >= domain_.hi)) {
    throw Error(ErrorKind::ModelIntegrity, "extrapolation interval " + extrapolation_.to_string() +
                                               " must contain domain " + domain_.to_string());
  }
  if (!(extrapolation_.lo > 0.0)) {
    throw Error(ErrorKind::ModelIntegrity, "extrapolation interval must be positive bodyweights");
  }
  for (double x : make_grid(extrapolation_, kValidationStepKg)) {
    const double f = poly_(x);
    if (!(f > 0.0) || !std::isfinite(f)) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "predicted total %g at %g kg is not positive", f, x);
      throw Error(ErrorKind::ModelIntegrity, buf);
    }
  }
}

Score score(const ScoringModel& model, double bodyweight_kg, double total_kg) {
  if (!std::isfinite(bodyweight_kg) || !std::isfinite(total_kg)) {
    throw Error(ErrorKind::InputDomain, "bodyweight and total must be finite");
  }
  if (!(total_kg > 0.0)) throw Error(ErrorKind::InputDomain, "total must be positive");
  if (!model.extrapolation_kg().contains(bodyweight_kg)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "bodyweight %g kg outside permitted interval [%g, %g] kg",
                  bodyweight_kg, model.extrapolation_kg().lo, model.extrapolation_kg().hi);
    throw Error(ErrorKind::Domain, buf);
  }
  const double predicted = model.predicted_total(bodyweight_kg);
  if (!(predicted > 0.0)) {
    throw Error(ErrorKind::ModelIntegrity, "model predicts a non-positive total");
  }
  return {total_kg * model.normalization_points() / predicted,
          !model.domain_kg().contains(bodyweight_kg)};
}

Poly WilksClassicCoefficients::poly() const {
  return Poly(Eigen::Map<const Eigen::VectorXd>(coefficients.data(), 6));
}

double wilks_classic_score(const WilksClassicCoefficients& coeffs, double bodyweight_kg,
                           double total_kg) {
  if (!std::isfinite(bodyweight_kg) || !std::isfinite(total_kg) || !(total_kg > 0.0)) {
    throw Error(ErrorKind::InputDomain, "bodyweight and total must be finite, total positive");
  }
  if (!coeffs.valid_kg.contains(bodyweight_kg)) {
    throw Error(ErrorKind::Domain, "bodyweight outside classic Wilks interval " +
                                       coeffs.valid_kg.to_string());
  }
  const double g = coeffs.poly()(bodyweight_kg);
  if (!(g > 0.0)) throw Error(ErrorKind::Domain, "Wilks denominator is not positive");
  return total_kg * WilksClassicCoefficients::kNormalizationPoints / g;
}

ScoringModel to_scoring_model(const WilksClassicCoefficients& coeffs) {
  return ScoringModel(coeffs.sex, coeffs.poly(), WilksClassicCoefficients::kNormalizationPoints,
                      coeffs.valid_kg, coeffs.valid_kg,
                      FitMeta{0.0, std::nullopt, coeffs.source, std::nullopt});
}

namespace {
FitMeta table_meta(double r2, std::string label) {
  return FitMeta{r2, std::nullopt, std::move(label), Date::parse("2019-02-27")};
}
}  // namespace

ScoringModel revised_2019_men() {
  return ScoringModel(Sex::Male, Poly{561.53, -15.807, 0.47799, -0.00373, 9.31e-6}, 500.0,
                      Interval{60.0, 175.0}, Interval{50.0, 175.0},
                      table_meta(0.9628, "revised-2019-m"));
}

ScoringModel revised_2019_women() {
  // Fitting data start at 44 kg with no stated upper bound; the quartic stays
  // positive on (25.2, 237.6) kg and rises up to 162.6 kg.
  return ScoringModel(Sex::Female, Poly{-898.34, 48.077, -0.5618, 0.00292, -5.64e-6}, 455.0,
                      Interval{44.0, 125.0}, Interval{26.0, 200.0},
                      table_meta(0.8536, "revised-2019-f"));
}

double round_half_away(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace liftscore
