#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qthermo/error.hpp"
#include "qthermo/serialize.hpp"

using namespace qthermo;
using Catch::Approx;

namespace fs = std::filesystem;

namespace {

const fs::path kData = QTHERMO_DATA_DIR;

fs::path write_temp(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("qthermo_test_" + name);
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("spectrum files parse with default degeneracy", "[serialize]") {
  const Spectrum s = spectrum_from_json(Json::parse(
      R"({"label": "demo", "levels": [{"energy": 2.5}, {"energy": 0.0, "degeneracy": 3}]})"));
  CHECK(s.label() == "demo");
  REQUIRE(s.size() == 2);
  CHECK(s.levels()[0] == Level{0.0, 3});
  CHECK(s.levels()[1] == Level{2.5, 1});

  const Spectrum bundled = load_spectrum(kData / "two_level.json");
  CHECK(bundled.size() == 2);
  CHECK(bundled.gap(1) == 1.0);
}

TEST_CASE("malformed spectrum files are format errors", "[serialize]") {
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"label": "x"})")), FormatError);
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"levels": []})")), FormatError);
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"levels": [{"energy": "one"}]})")), FormatError);
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"levels": [{"energy": 0, "degeneracy": -2}]})")),
                  FormatError);
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"([1, 2])")), FormatError);
  CHECK_THROWS_AS(load_spectrum(write_temp("bad.json", "{ not json")), FormatError);
  CHECK_THROWS_AS(load_spectrum("/nonexistent/spectrum.json"), FormatError);
  // Structurally fine but numerically invalid.
  CHECK_THROWS_AS(spectrum_from_json(Json::parse(R"({"levels": [{"energy": 0, "degeneracy": 0}]})")),
                  DomainError);
}

TEST_CASE("spectrum energies round-trip at 17 significant digits", "[serialize]") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> e(-1e3, 1e3);
  for (int i = 0; i < 200; ++i) {
    std::vector<Level> lv;
    for (int k = 0; k < 5; ++k) lv.push_back({e(rng), static_cast<std::uint32_t>(k % 3 + 1)});
    const Spectrum s = make_spectrum(lv, "rt");
    const Spectrum back = spectrum_from_json(Json::parse(dump(to_json(s))));
    CHECK(back == s);

    const double v = e(rng) * std::pow(10.0, std::uniform_int_distribution<int>(-200, 200)(rng));
    CHECK(std::strtod(format_real(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("gap family files", "[serialize]") {
  const GapFamily lin = load_gap_family(kData / "linear_family.json");
  CHECK(std::holds_alternative<LinearGap>(lin.first()));
  CHECK(lin.domain() == Interval{0.01, 10.0});

  const GapFamily tab = load_gap_family(kData / "table_family.json");
  CHECK(tab.domain() == Interval{0.0, 10.0});

  const GapFamily three = gap_family_from_json(Json::parse(
      R"({"kind": "linear", "slope": 1, "lambda_min": 0.1, "lambda_max": 2,
          "second_gap": {"kind": "quadratic", "curvature": 0.5, "center": 0, "minimum": 2}})"));
  CHECK(three.three_level());
  CHECK(three.second_gap(1.0) == 2.5);

  const GapFamily back = gap_family_from_json(Json::parse(dump(to_json(three))));
  CHECK(back.domain() == three.domain());
  CHECK(back.second_gap(1.3) == three.second_gap(1.3));

  CHECK_THROWS_AS(gap_family_from_json(Json::parse(R"({"kind": "cubic"})")), FormatError);
  CHECK_THROWS_AS(gap_family_from_json(Json::parse(R"({"kind": "linear", "slope": 1})")), FormatError);
  CHECK_THROWS_AS(gap_family_from_json(Json::parse(R"({"kind": "table", "table": [[0, 1], [1]]})")),
                  FormatError);
}

TEST_CASE("sample set interchange", "[serialize]") {
  const SampleSet s = load_sample_set(kData / "sample_731_269.json");
  CHECK(s.counts == std::vector<std::uint64_t>{731, 269});
  CHECK(s.shots == 1000);
  const Json j = to_json(s);
  CHECK(j.contains("spectrum_label"));
  CHECK(j.contains("counts"));
  CHECK(j.contains("M"));
  const SampleSet back = sample_set_from_json(Json::parse(dump(j)));
  CHECK(back.counts == s.counts);
  CHECK(back.shots == s.shots);
  CHECK(back.spectrum_label == s.spectrum_label);
  CHECK_THROWS_AS(sample_set_from_json(Json::parse(R"({"counts": [1, -1], "M": 0})")), FormatError);
}

TEST_CASE("experiment configs", "[serialize]") {
  const ExperimentConfig cfg = load_experiment_config(kData / "saturation_x24.cfg");
  CHECK(cfg.spectrum.size() == 2);
  CHECK(cfg.spectrum.gap(1) / cfg.true_temperature == Approx(2.4).epsilon(1e-15));
  CHECK(cfg.shots_per_trial == 1000);
  CHECK(cfg.trials == 10000);
  CHECK(std::holds_alternative<MleEstimator>(cfg.estimator));
  CHECK(cfg.policy == DegeneratePolicy::exclude_and_report);

  const Json bayes = Json::parse(R"({"spectrum": {"levels": [{"energy": 0}, {"energy": 1}]},
      "true_temperature": 0.5, "shots_per_trial": 100, "trials": 10, "seed": 18446744073709551615,
      "estimator": {"kind": "bayes", "prior": [0.1, 2.0], "grid_size": 256},
      "degenerate_sample_policy": "abort"})");
  const ExperimentConfig b = experiment_config_from_json(bayes);
  CHECK(b.seed == 18446744073709551615ULL);
  CHECK(b.policy == DegeneratePolicy::abort);
  const auto& est = std::get<BayesEstimator>(b.estimator);
  CHECK(*est.prior == Interval{0.1, 2.0});
  CHECK(est.grid_size == 256);

  const Json echo = to_json(b);
  CHECK(echo["estimator"]["kind"] == "bayes");
  CHECK(echo["degenerate_sample_policy"] == "abort");
  const ExperimentConfig again = experiment_config_from_json(echo);
  CHECK(dump(to_json(again)) == dump(echo));

  Json bad = bayes;
  bad["degenerate_sample_policy"] = "ignore";
  CHECK_THROWS_AS(experiment_config_from_json(bad), FormatError);
  bad = bayes;
  bad.erase("trials");
  CHECK_THROWS_AS(experiment_config_from_json(bad), FormatError);
  bad = bayes;
  bad["estimator"] = "median";
  CHECK_THROWS_AS(experiment_config_from_json(bad), FormatError);
  bad = bayes;
  bad["true_temperature"] = -1.0;
  CHECK_THROWS_AS(experiment_config_from_json(bad), DomainError);
}

TEST_CASE("fisher report field names", "[serialize]") {
  const Json j = to_json(fisher_report(make_spectrum({{0.0, 1}, {1.0, 1}}), 1.0), 10);
  for (const char* k : {"temperature", "fisher", "specific_heat", "crb_single_shot", "sld_eigenvalues",
                        "crb_m_shots"}) {
    CHECK(j.contains(k));
  }
  CHECK(j["crb_single_shot"].is_number());
  const Json u = to_json(fisher_report(make_spectrum({{0.0, 1}}), 1.0));
  CHECK(u["crb_single_shot"] == "unbounded");
}

TEST_CASE("sweep csv parses back losslessly", "[serialize]") {
  SaturationReport r;
  r.true_temperature = 1.0 / 3.0;
  r.crb = 2.0 / 7.0;
  r.empirical_mse = 0.1 + 0.2;
  r.ratio = r.empirical_mse / r.crb;
  r.excluded_trials = 3;
  r.trials_used = 997;
  const std::vector<SaturationReport> reps{r, r};
  const std::string csv = sweep_csv(reps);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "T,crb,empirical_mse,ratio,excluded,trials_used");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 6);
    CHECK(std::strtod(cells[0].c_str(), nullptr) == r.true_temperature);
    CHECK(std::strtod(cells[1].c_str(), nullptr) == r.crb);
    CHECK(std::strtod(cells[2].c_str(), nullptr) == r.empirical_mse);
    CHECK(std::strtod(cells[3].c_str(), nullptr) == r.ratio);
    CHECK(cells[4] == "3");
    CHECK(cells[5] == "997");
  }
  CHECK(rows == 2);
}
