#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include "liftscore/core.hpp"
#include "liftscore/io.hpp"
#include "liftscore/model_io.hpp"

using namespace liftscore;
using Catch::Matchers::WithinRel;
using Catch::Matchers::WithinAbs;

namespace {

// Term-by-term power sum, written without Horner.
double power_sum(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c[i] * std::pow(x, static_cast<double>(i));
  return s;
}

const std::vector<double> kMen{561.53, -15.807, 0.47799, -0.00373, 9.31e-6};
const std::vector<double> kWomen{-898.34, 48.077, -0.5618, 0.00292, -5.64e-6};

Poly make_poly(const std::vector<double>& c) {
  Poly::Coefficients v(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) v(static_cast<Eigen::Index>(i)) = c[i];
  return Poly(v);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("eval_poly small cases") {
  CHECK(eval_poly(Poly{5.0}, 123.0) == 5.0);
  CHECK(eval_poly(Poly{0.0, 1.0}, 7.5) == 7.5);
  CHECK(kind_of([] { eval_poly(Poly{1.0, 2.0}, std::nan("")); }) == ErrorKind::InputDomain);
  CHECK(kind_of([] { eval_poly(Poly{1.0}, std::numeric_limits<double>::infinity()); }) == ErrorKind::InputDomain);
}

TEST_CASE("built-in revised models against power-sum arithmetic") {
  const double men100 = power_sum(kMen, 100.0);
  const double women60 = power_sum(kWomen, 60.0);
  CHECK_THAT(men100, WithinAbs(961.73, 0.005));
  CHECK_THAT(women60, WithinAbs(521.43, 0.005));
  CHECK_THAT(revised_2019_men().predicted_total(100.0), WithinRel(men100, 1e-6));
  CHECK_THAT(revised_2019_women().predicted_total(60.0), WithinRel(women60, 1e-6));
  // The printed exponent-free e would give totals around 1e9 kg.
  CHECK(std::abs(9.31 * std::pow(100.0, 4)) > 1e8);
}

TEST_CASE("Horner agrees with the power sum on random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(-1e3, 1e3), xs(40.0, 200.0);
  std::uniform_int_distribution<int> deg(0, 5);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
    for (auto& v : c) v = coef(rng);
    const Poly p = make_poly(c);
    double scale = 0.0;
    const double x = xs(rng);
    for (std::size_t i = 0; i < c.size(); ++i) scale += std::abs(c[i]) * std::pow(x, double(i));
    CHECK(std::abs(p(x) - power_sum(c, x)) <= 1e-9 * scale);
  }
}

TEST_CASE("array evaluation matches scalar evaluation") {
  const Poly p = make_poly(kMen);
  Eigen::ArrayXd xs = Eigen::ArrayXd::LinSpaced(12, 50.0, 175.0);
  const Eigen::ArrayXd ys = p(xs);
  for (Eigen::Index i = 0; i < xs.size(); ++i) CHECK(ys(i) == p(xs(i)));
}

TEST_CASE("derivative small cases") {
  CHECK(derivative(Poly{5.0}) == Poly{0.0});
  CHECK(derivative(Poly{0.0, 1.0}) == Poly{1.0});
  CHECK(derivative(Poly{0.0, 0.0, 1.0}) == Poly{0.0, 2.0});
}

TEST_CASE("derivative agrees with central differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-1e3, 1e3), xs(40.0, 200.0);
  std::uniform_int_distribution<int> deg(1, 5);
  const double h = 1e-4;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> c(static_cast<std::size_t>(deg(rng)) + 1);
    // Coefficients scaled so every term has a comparable size near 100 kg.
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = coef(rng) / std::pow(100.0, double(i));
    const Poly p = make_poly(c);
    const double x = xs(rng);
    const double fd = (p(x + h) - p(x - h)) / (2 * h);
    const double exact = derivative(p)(x);
    // Guard tiny slopes where relative error is meaningless.
    double mag = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) mag += std::abs(double(i) * c[i] * std::pow(x, double(i - 1)));
    CHECK(std::abs(fd - exact) <= 1e-4 * std::max(std::abs(exact), 1e-3 * mag));
  }
}

TEST_CASE("compose_affine reproduces the substituted polynomial") {
  const Poly q{1.5, -2.0, 0.25, 3.0};
  const Poly p = compose_affine(q, 110.0, 57.5);
  for (double x : {50.0, 60.0, 110.0, 175.0}) {
    const double t = (x - 110.0) / 57.5;
    CHECK_THAT(p(x), WithinRel(q(t), 1e-10));
  }
}

TEST_CASE("score normalization and linearity") {
  const auto men = revised_2019_men();
  const auto women = revised_2019_women();
  CHECK_THAT(score(men, 100.0, men.predicted_total(100.0)).points, WithinRel(500.0, 1e-12));
  CHECK_THAT(score(women, 60.0, women.predicted_total(60.0)).points, WithinRel(455.0, 1e-12));
  CHECK_THAT(score(men, 100.0, 1000.0).points, WithinAbs(1000.0 * 500.0 / power_sum(kMen, 100.0), 1e-9));
  CHECK_THAT(score(men, 100.0, 1000.0).points, WithinAbs(519.90, 0.005));

  for (const auto* m : {&men, &women}) {
    for (double x : make_grid(m->domain_kg(), 0.5)) {
      const auto s = score(*m, x, m->predicted_total(x));
      CHECK_THAT(s.points, WithinRel(m->normalization_points(), 1e-9));
      CHECK_FALSE(s.extrapolated);
    }
  }

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> bw(60.0, 175.0), tot(100.0, 1200.0), k(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double x = bw(rng), t = tot(rng), c = k(rng);
    CHECK_THAT(score(men, x, c * t).points, WithinRel(c * score(men, x, t).points, 1e-12));
  }
}

TEST_CASE("score domain handling") {
  const auto men = revised_2019_men();
  CHECK(score(men, 55.0, 500.0).extrapolated);
  CHECK_FALSE(score(men, 60.0, 500.0).extrapolated);
  try {
    score(men, 40.0, 500.0);
    FAIL("expected domain error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
    CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("[50, 175]"));
  }
  CHECK(kind_of([&] { score(men, 100.0, 0.0); }) == ErrorKind::InputDomain);
  CHECK(kind_of([&] { score(men, 100.0, -5.0); }) == ErrorKind::InputDomain);
  CHECK(kind_of([&] { score(men, std::nan(""), 500.0); }) == ErrorKind::InputDomain);
}

TEST_CASE("model validation") {
  const Poly line{0.0, 10.0};
  CHECK_NOTHROW(ScoringModel(Sex::Male, line, 500.0, {60, 175}, {50, 175}));
  CHECK(kind_of([&] { ScoringModel(Sex::Male, line, 0.0, {60, 175}, {50, 175}); }) ==
        ErrorKind::ModelIntegrity);
  CHECK(kind_of([&] { ScoringModel(Sex::Male, line, 500.0, {175, 60}, {50, 175}); }) ==
        ErrorKind::ModelIntegrity);
  CHECK(kind_of([&] { ScoringModel(Sex::Male, line, 500.0, {60, 175}, {70, 175}); }) ==
        ErrorKind::ModelIntegrity);
  // Crosses zero at 100 kg inside the extrapolation interval.
  CHECK(kind_of([&] { ScoringModel(Sex::Male, Poly{-1000.0, 10.0}, 500.0, {110, 175}, {50, 175}); }) ==
        ErrorKind::ModelIntegrity);

  for (const auto& m : {revised_2019_men(), revised_2019_women()}) {
    for (double x : make_grid(m.extrapolation_kg(), 0.1)) CHECK(m.predicted_total(x) > 0.0);
  }
}

TEST_CASE("women's quartic leaves the positive range outside its extrapolation interval") {
  CHECK(power_sum(kWomen, 25.0) < 0.0);
  CHECK(power_sum(kWomen, 26.0) > 0.0);
  CHECK(power_sum(kWomen, 200.0) > 0.0);
  CHECK(power_sum(kWomen, 238.0) < 0.0);
}

TEST_CASE("classic Wilks") {
  WilksClassicCoefficients flat;
  flat.coefficients = {500, 0, 0, 0, 0, 0};
  flat.valid_kg = {40, 200};
  CHECK_THAT(wilks_classic_score(flat, 100.0, 432.0), WithinRel(432.0, 1e-15));

  const auto all = load_wilks_file(default_wilks_file());
  REQUIRE(all.size() == 2);
  const auto& m = wilks_for(all, Sex::Male);
  const auto& f = wilks_for(all, Sex::Female);
  CHECK(m.valid_kg == Interval{40.0, 201.9});
  CHECK(f.valid_kg == Interval{26.51, 154.53});
  for (double bw : {60.0, 100.0, 150.0}) {
    CHECK_THAT(wilks_classic_score(m, bw, m.poly()(bw)), WithinRel(500.0, 1e-12));
  }
  // Frozen regression value; coefficient 500/g(100) = 0.6086 as in published tables.
  CHECK_THAT(wilks_classic_score(m, 100.0, 1000.0), WithinAbs(608.589, 0.01));
  const std::vector<double> mc(m.coefficients.begin(), m.coefficients.end());
  CHECK_THAT(wilks_classic_score(m, 100.0, 1000.0), WithinRel(1000.0 * 500.0 / power_sum(mc, 100.0), 1e-12));

  CHECK(kind_of([&] { wilks_classic_score(m, 30.0, 500.0); }) == ErrorKind::Domain);
  const auto sm = to_scoring_model(f);
  CHECK(sm.normalization_points() == 500.0);
  CHECK(sm.domain_kg() == f.valid_kg);
  CHECK(kind_of([] { load_wilks_file("/nonexistent/wilks.json"); }) == ErrorKind::Config);
}

TEST_CASE("model files round-trip") {
  for (const auto& m : {revised_2019_men(), revised_2019_women()}) {
    const auto text = model_to_json(m);
    const auto back = model_from_json(text);
    CHECK(back == m);
    CHECK(model_to_json(back) == text);
  }
  const auto tmp = std::filesystem::temp_directory_path() / "liftscore_core_model.json";
  save_model_file(tmp, revised_2019_men());
  CHECK(load_model_file(tmp) == revised_2019_men());
  std::filesystem::remove(tmp);

  const ScoringModel bare(Sex::Female, Poly{100.0, 4.0}, 455.0, {44, 125}, {30, 150});
  CHECK(model_from_json(model_to_json(bare)) == bare);
}

TEST_CASE("model files are validated on load") {
  CHECK(kind_of([] { model_from_json("{"); }) == ErrorKind::Config);
  CHECK(kind_of([] {
          model_from_json(R"({"schema_version":2,"sex":"M","degree":1,"coefficients":[0,1],)"
                          R"("normalization_points":500,"domain_kg":[60,175],"extrapolation_kg":[50,175],"fit_meta":null})");
        }) == ErrorKind::Config);
  CHECK(kind_of([] {
          model_from_json(R"({"schema_version":1,"sex":"M","degree":2,"coefficients":[0,1],)"
                          R"("normalization_points":500,"domain_kg":[60,175],"extrapolation_kg":[50,175],"fit_meta":null})");
        }) == ErrorKind::Config);
  CHECK(kind_of([] {
          model_from_json(R"({"schema_version":1,"sex":"M","degree":1,"coefficients":[-1000,10],)"
                          R"("normalization_points":500,"domain_kg":[110,175],"extrapolation_kg":[50,175],"fit_meta":null})");
        }) == ErrorKind::ModelIntegrity);
}

TEST_CASE("built-in registry") {
  CHECK(resolve_model("revised-2019-m") == revised_2019_men());
  CHECK(resolve_model("revised-2019-f") == revised_2019_women());
  CHECK(resolve_model("wilks-classic", Sex::Female).sex() == Sex::Female);
  CHECK(resolve_model("wilks-classic-m").sex() == Sex::Male);
  CHECK(is_builtin_model_name("wilks-classic"));
  CHECK_FALSE(is_builtin_model_name("model.json"));
  CHECK(kind_of([] { resolve_model("/nonexistent/model.json"); }) == ErrorKind::Config);
}

TEST_CASE("presentation rounding") {
  CHECK(round_half_away(2.125, 2) == 2.13);
  CHECK(round_half_away(-2.5, 0) == -3.0);
  CHECK(round_half_away(-0.375, 2) == -0.38);
  CHECK(format_points(500.0) == "500.00");
  // printf alone would give 454.62 for this exactly representable half.
  CHECK(format_points(454.625) == "454.63");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(175.0) == "175");
}

TEST_CASE("grids end on the upper bound") {
  const auto g = make_grid({60.0, 61.0}, 0.3);
  REQUIRE(g.size() == 5);
  CHECK(g.front() == 60.0);
  CHECK(g.back() == 61.0);
  CHECK(make_grid({60.0, 175.0}, 0.5).size() == 231);
  CHECK(kind_of([] { make_grid({0.0, 1.0}, 0.0); }) == ErrorKind::Config);
}

TEST_CASE("codes and dates") {
  CHECK(parse_sex("M") == Sex::Male);
  CHECK(parse_sex("F") == Sex::Female);
  CHECK_FALSE(parse_sex("Mx"));
  CHECK(parse_equipment("Single-ply") == Equipment::SinglePly);
  CHECK(is_raw_family(Equipment::Wraps));
  CHECK_FALSE(is_raw_family(Equipment::Straps));
  const auto d = Date::parse("2019-02-27");
  REQUIRE(d);
  CHECK(d->to_string() == "2019-02-27");
  CHECK_FALSE(Date::parse("2019-02-30"));
  CHECK_FALSE(Date::parse("27.02.2019"));
}

TEST_CASE("atomic writes leave no temporary behind") {
  const auto dir = std::filesystem::temp_directory_path() / "liftscore_atomic";
  std::filesystem::remove_all(dir);
  write_file_atomic(dir / "a" / "x.txt", "one");
  write_file_atomic(dir / "a" / "x.txt", "two");
  CHECK(read_text_file(dir / "a" / "x.txt") == "two");
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "a")) files += e.is_regular_file();
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
  CHECK(kind_of([&] { read_text_file(dir / "missing"); }) == ErrorKind::Io);
}
