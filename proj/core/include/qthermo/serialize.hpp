#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "qthermo/estimation.hpp"
#include "qthermo/experiment.hpp"
#include "qthermo/fisher.hpp"
#include "qthermo/gap_family.hpp"
#include "qthermo/lowtemp.hpp"

namespace qthermo {

using Json = nlohmann::ordered_json;

/// Parses a file as JSON. Throws FormatError naming the path on failure.
Json read_json_file(const std::filesystem::path& path);

/// `{"label": str, "levels": [{"energy": num, "degeneracy": int = 1}, ...]}`
Spectrum spectrum_from_json(const Json& j);
Json to_json(const Spectrum& s);
Spectrum load_spectrum(const std::filesystem::path& path);

/// `{"kind": "linear"|"quadratic"|"table", <named parameters>,
///   "lambda_min", "lambda_max", "description", "second_gap": {...}}`
GapFamily gap_family_from_json(const Json& j);
GapFamily load_gap_family(const std::filesystem::path& path);
Json to_json(const GapCurve& c);
Json to_json(const GapFamily& f);

/// `{"spectrum_label": str, "counts": [int, ...], "M": int}`
SampleSet sample_set_from_json(const Json& j);
Json to_json(const SampleSet& s);
SampleSet load_sample_set(const std::filesystem::path& path);

/// Experiment configuration; `spectrum_file` paths resolve against base_dir.
ExperimentConfig experiment_config_from_json(const Json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Echo with every default resolved (thread count excluded).
Json to_json(const ExperimentConfig& cfg);

Json to_json(const VarianceBound& b);
Json to_json(const FisherReport& r, std::optional<std::uint64_t> shots = std::nullopt);
Json to_json(const EstimateResult& r);
Json to_json(const TuneResult& r, double temperature);
Json to_json(const SaturationReport& r);
/// Full simulate output: report fields, config echo, generator identity.
Json saturation_document(const SaturationReport& r, const ExperimentConfig& cfg);
Json minima_document(const MinimumResult& g, const PairMinimumResult& h, Interval bracket, double tol);

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

/// Header `T,crb,empirical_mse,ratio,excluded,trials_used`, one row per report.
std::string sweep_csv(std::span<const SaturationReport> reports);

/// Serialised form used for files and standard output.
std::string dump(const Json& j);

}  // namespace qthermo
