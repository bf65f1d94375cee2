#include "liftscore/model_io.hpp"

#include <json.hpp>

#include "liftscore/io.hpp"

namespace liftscore {

using Json = nlohmann::ordered_json;

namespace {

Json interval_json(const Interval& i) { return Json::array({i.lo, i.hi}); }

Interval interval_from(const Json& j, const char* field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::Config, std::string(field) + " must be [lo, hi]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Sex sex_from(const Json& j) {
  if (!j.is_string()) throw Error(ErrorKind::Config, "sex must be \"M\" or \"F\"");
  auto sex = parse_sex(j.get<std::string>());
  if (!sex) throw Error(ErrorKind::Config, "sex must be \"M\" or \"F\"");
  return *sex;
}

const Json& require(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw Error(ErrorKind::Config, std::string("missing field ") + key);
  return *it;
}

}  // namespace

std::string model_to_json(const ScoringModel& model) {
  Json doc;
  doc["schema_version"] = kModelSchemaVersion;
  doc["sex"] = std::string(sex_code(model.sex()));
  doc["degree"] = model.poly().degree();
  Json coeffs = Json::array();
  for (Eigen::Index i = 0; i <= model.poly().degree(); ++i) coeffs.push_back(model.poly()[i]);
  doc["coefficients"] = std::move(coeffs);
  doc["normalization_points"] = model.normalization_points();
  doc["domain_kg"] = interval_json(model.domain_kg());
  doc["extrapolation_kg"] = interval_json(model.extrapolation_kg());
  if (const auto& meta = model.fit_meta()) {
    Json m;
    m["r_squared"] = meta->r_squared;
    m["sample_size"] = meta->sample_size ? Json(*meta->sample_size) : Json(nullptr);
    m["source_label"] = meta->source_label;
    m["snapshot_date"] =
        meta->snapshot_date ? Json(meta->snapshot_date->to_string()) : Json(nullptr);
    doc["fit_meta"] = std::move(m);
  } else {
    doc["fit_meta"] = nullptr;
  }
  return doc.dump(2) + "\n";
}

ScoringModel model_from_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::Config, "model file must be a JSON object");
  if (require(doc, "schema_version") != kModelSchemaVersion) {
    throw Error(ErrorKind::Config, "unsupported model schema_version");
  }
  const Json& coeffs = require(doc, "coefficients");
  if (!coeffs.is_array() || coeffs.empty()) {
    throw Error(ErrorKind::Config, "coefficients must be a non-empty array");
  }
  Eigen::VectorXd c(static_cast<Eigen::Index>(coeffs.size()));
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!coeffs[i].is_number()) throw Error(ErrorKind::Config, "coefficients must be numbers");
    c(static_cast<Eigen::Index>(i)) = coeffs[i].get<double>();
  }
  if (auto it = doc.find("degree"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<long>() != c.size() - 1) {
      throw Error(ErrorKind::Config, "degree does not match coefficient count");
    }
  }
  std::optional<FitMeta> meta;
  if (auto it = doc.find("fit_meta"); it != doc.end() && !it->is_null()) {
    FitMeta m;
    m.r_squared = it->value("r_squared", 0.0);
    if (auto n = it->find("sample_size"); n != it->end() && !n->is_null()) {
      m.sample_size = n->get<std::size_t>();
    }
    m.source_label = it->value("source_label", std::string{});
    if (auto d = it->find("snapshot_date"); d != it->end() && !d->is_null()) {
      m.snapshot_date = Date::parse(d->get<std::string>());
      if (!m.snapshot_date) throw Error(ErrorKind::Config, "snapshot_date must be YYYY-MM-DD");
    }
    meta = std::move(m);
  }
  const Json& norm = require(doc, "normalization_points");
  if (!norm.is_number()) throw Error(ErrorKind::Config, "normalization_points must be a number");
  return ScoringModel(sex_from(require(doc, "sex")), Poly(std::move(c)), norm.get<double>(),
                      interval_from(require(doc, "domain_kg"), "domain_kg"),
                      interval_from(require(doc, "extrapolation_kg"), "extrapolation_kg"),
                      std::move(meta));
}

ScoringModel load_model_file(const std::filesystem::path& path) {
  return model_from_json(read_text_file(path));
}

void save_model_file(const std::filesystem::path& path, const ScoringModel& model) {
  write_file_atomic(path, model_to_json(model));
}

std::vector<WilksClassicCoefficients> load_wilks_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const Error&) {
    throw Error(ErrorKind::Config, "classic Wilks coefficient file not found: " + path.string());
  }
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("Wilks file is not valid JSON: ") + e.what());
  }
  if (doc.value("kind", std::string{}) != "wilks_classic") {
    throw Error(ErrorKind::Config, "Wilks file must declare kind \"wilks_classic\"");
  }
  const std::string source = doc.value("source", std::string{"wilks-classic"});
  std::vector<WilksClassicCoefficients> out;
  for (const Json& m : require(doc, "models")) {
    WilksClassicCoefficients w;
    w.sex = sex_from(require(m, "sex"));
    const Json& c = require(m, "coefficients");
    if (!c.is_array() || c.size() != 6) {
      throw Error(ErrorKind::Config, "classic Wilks needs exactly 6 coefficients");
    }
    for (std::size_t i = 0; i < 6; ++i) w.coefficients[i] = c[i].get<double>();
    w.valid_kg = interval_from(require(m, "valid_kg"), "valid_kg");
    w.source = source + (w.sex == Sex::Male ? "-m" : "-f");
    // Rejects a denominator that is non-positive anywhere on the interval.
    (void)to_scoring_model(w);
    out.push_back(w);
  }
  return out;
}

const WilksClassicCoefficients& wilks_for(const std::vector<WilksClassicCoefficients>& all,
                                          Sex sex) {
  for (const auto& w : all) {
    if (w.sex == sex) return w;
  }
  throw Error(ErrorKind::Config,
              "no classic Wilks coefficients for sex " + std::string(sex_code(sex)));
}

std::filesystem::path default_wilks_file() {
  return std::filesystem::path(LIFTSCORE_DATA_DIR) / "wilks_classic.json";
}

bool is_builtin_model_name(std::string_view name) {
  return name == "revised-2019-m" || name == "revised-2019-f" || name == "wilks-classic" ||
         name == "wilks-classic-m" || name == "wilks-classic-f";
}

ScoringModel resolve_model(std::string_view name_or_path, std::optional<Sex> sex_hint,
                           const std::filesystem::path& wilks_file) {
  if (name_or_path == "revised-2019-m") return revised_2019_men();
  if (name_or_path == "revised-2019-f") return revised_2019_women();
  if (name_or_path.starts_with("wilks-classic")) {
    Sex sex = sex_hint.value_or(Sex::Male);
    if (name_or_path == "wilks-classic-m") sex = Sex::Male;
    else if (name_or_path == "wilks-classic-f") sex = Sex::Female;
    else if (name_or_path != "wilks-classic") {
      throw Error(ErrorKind::Config, "unknown built-in model " + std::string(name_or_path));
    }
    return to_scoring_model(wilks_for(load_wilks_file(wilks_file), sex));
  }
  try {
    return load_model_file(std::filesystem::path(name_or_path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Io) {
      throw Error(ErrorKind::Config, "model not found: " + std::string(name_or_path));
    }
    throw;
  }
}

}  // namespace liftscore
