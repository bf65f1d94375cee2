#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <sys/wait.h>
#include <sstream>

#include "liftscore/cli.hpp"
#include "liftscore/csv.hpp"
#include "liftscore/io.hpp"
#include "liftscore/model_io.hpp"

using namespace liftscore;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("liftscore_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

const char* kHeader = "Name,Sex,Event,Equipment,BodyweightKg,TotalKg,Date,MeetName\n";

std::string quartic_csv(int n) {
  const Poly q{561.53, -15.807, 0.47799, -0.00373, 9.31e-6};
  std::string text = kHeader;
  for (int i = 0; i < n; ++i) {
    const double bw = 60.0 + 115.0 * i / (n - 1);
    text += csv::join({"Q" + std::to_string(i), "M", "SBD", "Raw", format_number(bw), format_number(q(bw)),
                       "2018-01-01", "Synthetic"}) +
            "\n";
  }
  return text;
}

std::map<std::string, std::string> read_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file() || e.path().filename() == "run.log") continue;
    files[fs::relative(e.path(), dir).string()] = read_text_file(e.path());
  }
  return files;
}

}  // namespace

TEST_CASE("exit code table") {
  CHECK(cli::exit_code_for(ErrorKind::Config) == 2);
  CHECK(cli::exit_code_for(ErrorKind::Io) == 2);
  CHECK(cli::exit_code_for(ErrorKind::Ingest) == 3);
  CHECK(cli::exit_code_for(ErrorKind::Fit) == 4);
  CHECK(cli::exit_code_for(ErrorKind::Statistic) == 4);
  CHECK(cli::exit_code_for(ErrorKind::Domain) == 5);
}

TEST_CASE("score: single results") {
  auto r = run({"score", "--model", "revised-2019-m", "--bodyweight", "100", "--total",
                format_number(revised_2019_men().predicted_total(100.0))});
  CHECK(r.code == 0);
  CHECK(r.out == "500.00\n");
  CHECK(r.err.empty());

  r = run({"score", "--model", "revised-2019-f", "--bodyweight", "60", "--total", "521.43"});
  CHECK(r.code == 0);
  CHECK(r.out == "455.00\n");

  r = run({"score", "--model", "revised-2019-m", "--bodyweight", "55", "--total", "600"});
  CHECK(r.code == 0);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("extrapolated"));

  r = run({"score", "--model", "revised-2019-m", "--bodyweight", "40", "--total", "500"});
  CHECK(r.code == 5);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("[50, 175]"));
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("\"exit_code\":5"));

  r = run({"score", "--model", "wilks-classic", "--sex", "M", "--bodyweight", "100", "--total", "1000"});
  CHECK(r.code == 0);
  CHECK(r.out == "608.59\n");
}

TEST_CASE("score: the installed binary reports the same exit codes") {
  const std::string quiet = " > /dev/null 2>&1";
  const std::string bin = LIFTSCORE_CLI_PATH;
  auto status = [&](const std::string& tail) {
    const int s = std::system((bin + " " + tail + quiet).c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  CHECK(status("score --model revised-2019-m --bodyweight 100 --total 900") == 0);
  CHECK(status("score --model revised-2019-m --bodyweight 40 --total 500") == 5);
  CHECK(status("score --model no-such-model.json --bodyweight 100 --total 500") == 2);
  CHECK(status("frobnicate") == 2);
  CHECK(status("--help") == 0);
}

TEST_CASE("config errors") {
  CHECK(run({"score", "--model", "revised-2019-m", "--bodyweight", "100"}).code == 2);
  CHECK(run({"fit", "--data", "/nonexistent.csv"}).code == 2);
  CHECK(run({"score", "--model", "revised-2019-m", "--bodyweight", "abc", "--total", "1"}).code == 2);
  const auto dir = scratch("config");
  write_file_atomic(dir / "d.csv", quartic_csv(10));
  CHECK(run({"fit", "--data", (dir / "d.csv").string(), "--degrees", "0", "--out-dir", (dir / "o").string()}).code ==
        2);
}

TEST_CASE("fit: header-only data") {
  const auto dir = scratch("empty");
  write_file_atomic(dir / "empty.csv", kHeader);
  const auto r = run({"fit", "--data", (dir / "empty.csv").string(), "--out-dir", (dir / "out").string()});
  CHECK(r.code == 3);
  CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("nothing to fit"));
  CHECK_FALSE(fs::exists(dir / "out" / "model.json"));
}

TEST_CASE("fit: exact quartic round-trips through the model file") {
  const auto dir = scratch("quartic");
  write_file_atomic(dir / "q.csv", quartic_csv(60));
  write_file_atomic(dir / "cfg.json", R"({"sex":"M","top_n":1000,"class_boundaries_kg":"men"})");
  const auto r = run({"fit", "--data", (dir / "q.csv").string(), "--filter-config", (dir / "cfg.json").string(),
                      "--degrees", "4", "--out-dir", (dir / "out").string()});
  REQUIRE(r.code == 0);
  const auto m = load_model_file(dir / "out" / "model.json");
  const Poly q{561.53, -15.807, 0.47799, -0.00373, 9.31e-6};
  for (double x = 60.0; x <= 175.0; x += 2.5) {
    CHECK_THAT(m.predicted_total(x), Catch::Matchers::WithinRel(q(x), 1e-6));
  }
  CHECK(m.normalization_points() == 500.0);
  REQUIRE(m.fit_meta());
  CHECK(m.fit_meta()->sample_size == 60);
  for (const char* f : {"fit_deg4.json", "residuals_deg4.csv", "degree_selection.json", "degree_selection.csv",
                        "sample.csv", "exclusions.csv", "row_errors.csv", "class_counts.csv", "curve.csv",
                        "run.log"}) {
    CHECK(fs::exists(dir / "out" / f));
  }
}

TEST_CASE("fit: outputs are byte-identical between runs") {
  const auto dir = scratch("repeat");
  std::string text = quartic_csv(80);
  text += "Bad Row,M,SBD,Raw,80,,2018-02-02,X\n";
  write_file_atomic(dir / "q.csv", text);
  for (const char* out : {"a", "b"}) {
    REQUIRE(run({"fit", "--data", (dir / "q.csv").string(), "--degrees", "2,3,4,5", "--out-dir",
                 (dir / out).string()})
                .code == 0);
  }
  const auto a = read_dir(dir / "a"), b = read_dir(dir / "b");
  CHECK(a.size() >= 14);
  CHECK(a == b);
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    CHECK(entry.path().extension() != ".tmp");
  }
}

TEST_CASE("rank") {
  const auto dir = scratch("rank");
  SECTION("single entry") {
    write_file_atomic(dir / "one.csv", std::string(kHeader) + "Solo,M,SBD,Raw,90,800,2018-01-01,X\n");
    const auto r = run({"rank", "--model", "revised-2019-m", "--data", (dir / "one.csv").string()});
    CHECK(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::StartsWith("rank,name"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("\n1,Solo,M,90,800,"));
  }
  SECTION("tie on points goes to the lighter lifter") {
    const auto men = revised_2019_men();
    const std::string t80 = format_number(men.predicted_total(80.0));
    const std::string t90 = format_number(men.predicted_total(90.0));
    write_file_atomic(dir / "tie.csv", std::string(kHeader) + "Heavy,M,SBD,Raw,90," + t90 + ",2018-01-01,X\n" +
                                           "Light,M,SBD,Raw,80," + t80 + ",2018-01-01,X\n");
    const auto r = run({"rank", "--model", "revised-2019-m", "--data", (dir / "tie.csv").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("1,Light") < r.out.find("2,Heavy"));
  }
  SECTION("sex without a model is excluded with a warning") {
    write_file_atomic(dir / "mixed.csv", std::string(kHeader) + "A,M,SBD,Raw,90,800,2018-01-01,X\n" +
                                             "B,F,SBD,Raw,60,500,2018-01-01,X\n");
    const auto r = run({"rank", "--model", "revised-2019-m", "--data", (dir / "mixed.csv").string()});
    CHECK(r.code == 0);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("no model for sex F"));
    CHECK(r.out.find(",B,") == std::string::npos);
  }
  SECTION("mixed-sex batch against hand arithmetic") {
    // Points written out from the printed coefficients (men 500 / f_m, women 455 / f_w).
    auto fm = [](double x) { return 561.53 - 15.807 * x + 0.47799 * x * x - 0.00373 * x * x * x + 9.31e-6 * x * x * x * x; };
    auto fw = [](double x) { return -898.34 + 48.077 * x - 0.5618 * x * x + 0.00292 * x * x * x - 5.64e-6 * x * x * x * x; };
    struct Row { std::string name; char sex; double bw; double total; double points; };
    std::vector<Row> rows;
    const double bws[] = {59.5, 66.2, 74.1, 82.3, 89.9, 99.0, 108.4, 118.7, 131.0, 150.2};
    for (int i = 0; i < 10; ++i) {
      const double t = std::round(fm(bws[i]) * (0.86 + 0.013 * i) * 2) / 2;
      rows.push_back({"Man" + std::to_string(i), 'M', bws[i], t, t * 500.0 / fm(bws[i])});
      const double w = bws[i] * 0.82;
      const double tw = std::round(fw(w) * (0.97 - 0.011 * i) * 2) / 2;
      rows.push_back({"Woman" + std::to_string(i), 'F', w, tw, tw * 455.0 / fw(w)});
    }
    std::string text = kHeader;
    for (const auto& r : rows) {
      text += r.name + "," + r.sex + ",SBD,Raw," + format_number(r.bw) + "," + format_number(r.total) +
              ",2018-01-01,X\n";
    }
    write_file_atomic(dir / "mixed20.csv", text);
    const auto res = run({"rank", "--model", "revised-2019-m", "--model2", "revised-2019-f", "--data",
                          (dir / "mixed20.csv").string(), "--out-dir", (dir / "out").string()});
    REQUIRE(res.code == 0);
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      if (a.points != b.points) return a.points > b.points;
      if (a.bw != b.bw) return a.bw < b.bw;
      return a.name < b.name;
    });
    const auto recs = csv::parse(read_text_file(dir / "out" / "ranked.csv"));
    REQUIRE(recs.size() == 21);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(recs[i + 1].fields[1] == rows[i].name);
      CHECK(recs[i + 1].fields[5] == format_points(rows[i].points));
    }
    CHECK(fs::exists(dir / "out" / "topk.csv"));
  }
}

TEST_CASE("diagnose") {
  const auto dir = scratch("diagnose");
  SECTION("single bodyweight still produces a report") {
    write_file_atomic(dir / "d.csv", std::string(kHeader) + "A,M,SBD,Raw,90,800,2018-01-01,X\n" +
                                         "B,M,SBD,Raw,90,780,2018-01-01,X\n");
    const auto r = run({"diagnose", "--model", "revised-2019-m", "--data", (dir / "d.csv").string(), "--out-dir",
                        (dir / "out").string()});
    CHECK(r.code == 0);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("trend"));
    const auto j = read_text_file(dir / "out" / "diagnostics.json");
    CHECK_THAT(j, Catch::Matchers::ContainsSubstring("\"trend_slope\": null"));
    CHECK_THAT(j, Catch::Matchers::ContainsSubstring("\"monotone\": true"));
    for (const char* f : {"scored.csv", "residuals.csv", "curve.csv", "topk.csv"}) CHECK(fs::exists(dir / "out" / f));
  }
  SECTION("model pair") {
    write_file_atomic(dir / "q.csv", quartic_csv(30));
    const auto r = run({"diagnose", "--model", "revised-2019-m", "--model2", "wilks-classic-m", "--data",
                        (dir / "q.csv").string(), "--out-dir", (dir / "pair").string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "pair" / "model1" / "diagnostics.json"));
    CHECK(fs::exists(dir / "pair" / "model2" / "diagnostics.json"));
  }
}

TEST_CASE("bias-experiment") {
  const auto dir = scratch("bias");
  std::string text = quartic_csv(40);
  for (int i = 0; i < 12; ++i) {
    text += "Light" + std::to_string(i) + ",M,SBD,Raw," + format_number(50.0 + 0.8 * i) + "," +
            format_number(480.0 + 7.0 * i - 30.0 * (i % 3)) + ",2018-01-01,X\n";
  }
  write_file_atomic(dir / "d.csv", text);
  write_file_atomic(dir / "full.json", R"({"sex":"M","top_n":1000})");
  write_file_atomic(dir / "restricted.json", R"({"sex":"M","top_n":1000,"bodyweight_min_kg":60})");
  write_file_atomic(dir / "empty.json", R"({"sex":"M","top_n":1000,"bodyweight_min_kg":300,"bodyweight_max_kg":400})");

  SECTION("identical configs") {
    const auto r = run({"bias-experiment", "--data", (dir / "d.csv").string(), "--filter-config",
                        (dir / "full.json").string(), "--restricted-config", (dir / "full.json").string(),
                        "--out-dir", (dir / "same").string()});
    REQUIRE(r.code == 0);
    CHECK(read_dir(dir / "same" / "full") == read_dir(dir / "same" / "restricted"));
  }
  SECTION("restricted run") {
    const auto r = run({"bias-experiment", "--data", (dir / "d.csv").string(), "--filter-config",
                        (dir / "full.json").string(), "--restricted-config", (dir / "restricted.json").string(),
                        "--out-dir", (dir / "r").string()});
    REQUIRE(r.code == 0);
    CHECK_THAT(read_text_file(dir / "r" / "bias_experiment.json"),
               Catch::Matchers::ContainsSubstring("\"light_limit_kg\": 60.0"));
  }
  SECTION("restricted config that selects nothing") {
    const auto r = run({"bias-experiment", "--data", (dir / "d.csv").string(), "--filter-config",
                        (dir / "full.json").string(), "--restricted-config", (dir / "empty.json").string(),
                        "--out-dir", (dir / "e").string()});
    CHECK(r.code == 3);
  }
}

TEST_CASE("curve") {
  const auto r = run({"curve", "--model", "revised-2019-m", "--grid-step", "25"});
  CHECK(r.code == 0);
  CHECK_THAT(r.out, Catch::Matchers::StartsWith("bodyweight_kg,predicted_total_kg\n50,"));
  CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("\n175,"));
}
