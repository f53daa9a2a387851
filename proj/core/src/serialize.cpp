#include "qthermo/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qthermo/error.hpp"

namespace qthermo {

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw FormatError(where + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) malformed(where, "expected an object");
  const auto it = j.find(name);
  if (it == j.end()) malformed(where, std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& j, const char* name, const std::string& where) {
  const Json& v = field(j, name, where);
  if (!v.is_number()) malformed(where, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::optional<double> optional_number(const Json& j, const char* name, const std::string& where) {
  if (!j.contains(name)) return std::nullopt;
  return number(j, name, where);
}

std::uint64_t count(const Json& v, const std::string& name, const std::string& where) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    malformed(where, "field '" + name + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string text(const Json& j, const char* name, const std::string& where, std::string fallback = {}) {
  if (!j.contains(name)) return fallback;
  const Json& v = j.at(name);
  if (!v.is_string()) malformed(where, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

Interval interval(const Json& v, const std::string& name, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    malformed(where, "field '" + name + "' must be a [lo, hi] pair of numbers");
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Json interval_json(Interval iv) { return Json::array({iv.lo, iv.hi}); }

GapCurve curve_from_json(const Json& j, const std::string& where) {
  const std::string kind = text(j, "kind", where);
  if (kind == "linear") {
    return LinearGap{number(j, "slope", where), optional_number(j, "intercept", where).value_or(0.0)};
  }
  if (kind == "quadratic") {
    return QuadraticGap{number(j, "curvature", where), number(j, "center", where),
                        number(j, "minimum", where)};
  }
  if (kind == "table") {
    const Json& t = field(j, "table", where);
    if (!t.is_array()) malformed(where, "field 'table' must be an array of [lambda, gap] pairs");
    std::vector<std::pair<double, double>> pts;
    for (const Json& row : t) {
      const Interval p = interval(row, "table", where);
      pts.emplace_back(p.lo, p.hi);
    }
    return TabulatedGap(std::move(pts));
  }
  if (kind.empty()) malformed(where, "missing field 'kind'");
  malformed(where, "unknown gap family kind '" + kind + "' (expected linear, quadratic or table)");
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": invalid JSON: " + e.what());
  }
}

Spectrum spectrum_from_json(const Json& j) {
  const std::string where = "spectrum";
  const Json& levels = field(j, "levels", where);
  if (!levels.is_array()) malformed(where, "field 'levels' must be an array");
  if (levels.empty()) malformed(where, "field 'levels' must not be empty");
  std::vector<Level> out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const std::string at = where + ".levels[" + std::to_string(i) + "]";
    const Level lv{number(levels[i], "energy", at),
                   levels[i].contains("degeneracy")
                       ? static_cast<std::uint32_t>(count(levels[i]["degeneracy"], "degeneracy", at))
                       : 1u};
    out.push_back(lv);
  }
  return make_spectrum(std::move(out), text(j, "label", where));
}

Json to_json(const Spectrum& s) {
  Json levels = Json::array();
  for (const Level& lv : s.levels()) {
    levels.push_back({{"energy", lv.energy}, {"degeneracy", lv.multiplicity}});
  }
  return {{"label", s.label()}, {"levels", std::move(levels)}};
}

Spectrum load_spectrum(const std::filesystem::path& path) {
  try {
    return spectrum_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

GapFamily gap_family_from_json(const Json& j) {
  const std::string where = "gap family";
  GapCurve first = curve_from_json(j, where);
  std::optional<GapCurve> second;
  if (j.contains("second_gap")) second = curve_from_json(j.at("second_gap"), where + ".second_gap");

  Interval dom{};
  const auto lo = optional_number(j, "lambda_min", where);
  const auto hi = optional_number(j, "lambda_max", where);
  if (const auto* t = std::get_if<TabulatedGap>(&first)) {
    dom = {lo.value_or(t->range().lo), hi.value_or(t->range().hi)};
  } else {
    if (!lo) malformed(where, "missing field 'lambda_min'");
    if (!hi) malformed(where, "missing field 'lambda_max'");
    dom = {*lo, *hi};
  }
  return GapFamily(std::move(first), dom, text(j, "description", where), std::move(second));
}

GapFamily load_gap_family(const std::filesystem::path& path) {
  try {
    return gap_family_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json to_json(const GapCurve& c) {
  Json j;
  j["kind"] = std::string(gap_curve_kind(c));
  if (const auto* l = std::get_if<LinearGap>(&c)) {
    j["slope"] = l->slope;
    j["intercept"] = l->intercept;
  } else if (const auto* q = std::get_if<QuadraticGap>(&c)) {
    j["curvature"] = q->curvature;
    j["center"] = q->center;
    j["minimum"] = q->minimum;
  } else {
    const auto& t = std::get<TabulatedGap>(c);
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.lambdas().size(); ++i) rows.push_back({t.lambdas()[i], t.gaps()[i]});
    j["table"] = std::move(rows);
  }
  return j;
}

Json to_json(const GapFamily& f) {
  Json j = to_json(f.first());
  j["lambda_min"] = f.domain().lo;
  j["lambda_max"] = f.domain().hi;
  j["description"] = f.description();
  if (f.second()) j["second_gap"] = to_json(*f.second());
  return j;
}

SampleSet sample_set_from_json(const Json& j) {
  const std::string where = "sample";
  SampleSet s;
  s.spectrum_label = text(j, "spectrum_label", where);
  const Json& counts = field(j, "counts", where);
  if (!counts.is_array()) malformed(where, "field 'counts' must be an array");
  for (const Json& c : counts) s.counts.push_back(count(c, "counts", where));
  s.shots = count(field(j, "M", where), "M", where);
  return s;
}

Json to_json(const SampleSet& s) {
  return {{"spectrum_label", s.spectrum_label}, {"counts", s.counts}, {"M", s.shots}};
}

SampleSet load_sample_set(const std::filesystem::path& path) {
  try {
    return sample_set_from_json(read_json_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

ExperimentConfig experiment_config_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const std::string where = "config";
  if (!j.is_object()) malformed(where, "expected an object");

  std::optional<Spectrum> spectrum;
  if (j.contains("spectrum")) {
    spectrum = spectrum_from_json(j.at("spectrum"));
  } else if (j.contains("spectrum_file")) {
    std::filesystem::path p = text(j, "spectrum_file", where);
    if (p.is_relative()) p = base_dir / p;
    spectrum = load_spectrum(p);
  } else {
    malformed(where, "missing field 'spectrum' (or 'spectrum_file')");
  }

  ExperimentConfig cfg{*spectrum};
  cfg.true_temperature = number(j, "true_temperature", where);
  cfg.shots_per_trial = count(field(j, "shots_per_trial", where), "shots_per_trial", where);
  cfg.trials = count(field(j, "trials", where), "trials", where);
  cfg.seed = count(field(j, "seed", where), "seed", where);

  const Json& est = field(j, "estimator", where);
  const std::string kind = est.is_string() ? est.get<std::string>() : text(est, "kind", where + ".estimator");
  if (kind == "mle") {
    MleEstimator m;
    if (est.is_object() && est.contains("bracket")) m.bracket = interval(est["bracket"], "bracket", where);
    cfg.estimator = m;
  } else if (kind == "bayes") {
    BayesEstimator b;
    if (est.is_object() && est.contains("prior")) b.prior = interval(est["prior"], "prior", where);
    if (est.is_object() && est.contains("grid_size")) {
      b.grid_size = static_cast<std::size_t>(count(est["grid_size"], "grid_size", where));
    }
    cfg.estimator = b;
  } else {
    malformed(where, "estimator must be 'mle' or 'bayes', got '" + kind + "'");
  }

  const std::string policy = text(j, "degenerate_sample_policy", where, "exclude_and_report");
  if (policy == "exclude_and_report") {
    cfg.policy = DegeneratePolicy::exclude_and_report;
  } else if (policy == "abort") {
    cfg.policy = DegeneratePolicy::abort;
  } else {
    malformed(where, "degenerate_sample_policy must be 'exclude_and_report' or 'abort'");
  }
  if (j.contains("threads")) cfg.threads = static_cast<unsigned>(count(j["threads"], "threads", where));
  validate(cfg);
  return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  try {
    return experiment_config_from_json(read_json_file(path), path.parent_path());
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Json to_json(const ExperimentConfig& cfg) {
  Json est;
  if (const auto* b = std::get_if<BayesEstimator>(&cfg.estimator)) {
    const Interval prior =
        b->prior.value_or(Interval{cfg.true_temperature / 5.0, 5.0 * cfg.true_temperature});
    est = {{"kind", "bayes"}, {"prior", interval_json(prior)}, {"grid_size", b->grid_size}};
  } else {
    const auto& m = std::get<MleEstimator>(cfg.estimator);
    est = {{"kind", "mle"},
           {"bracket", interval_json(m.bracket.value_or(default_mle_bracket(cfg.spectrum)))},
           {"relative_tolerance", kMleRelativeTolerance}};
  }
  return {{"spectrum", to_json(cfg.spectrum)},
          {"true_temperature", cfg.true_temperature},
          {"shots_per_trial", cfg.shots_per_trial},
          {"trials", cfg.trials},
          {"estimator", std::move(est)},
          {"seed", cfg.seed},
          {"degenerate_sample_policy", std::string(to_string(cfg.policy))}};
}

Json to_json(const VarianceBound& b) {
  if (is_unbounded(b)) return "unbounded";
  return std::get<double>(b);
}

Json to_json(const FisherReport& r, std::optional<std::uint64_t> shots) {
  Json j = {{"temperature", r.temperature},
            {"fisher", r.fisher},
            {"specific_heat", r.specific_heat},
            {"crb_single_shot", to_json(r.crb_single_shot)},
            {"sld_eigenvalues", r.sld_eigenvalues}};
  if (shots) {
    j["M"] = *shots;
    j["crb_m_shots"] = to_json(r.crb_m_shots(*shots));
  }
  if (!is_unbounded(r.crb_single_shot)) {
    j["crb_single_shot_over_T2"] = std::get<double>(r.crb_single_shot) / (r.temperature * r.temperature);
  }
  return j;
}

Json to_json(const EstimateResult& r) {
  Json j;
  j["status"] = std::string(to_string(r.status));
  j["estimate"] = r.estimate ? Json(*r.estimate) : Json(nullptr);
  if (r.posterior_mean) j["posterior_mean"] = *r.posterior_mean;
  if (r.posterior_sd) j["posterior_sd"] = *r.posterior_sd;
  j["iterations"] = r.iterations;
  return j;
}

Json to_json(const TuneResult& r, double temperature) {
  Json j = {{"temperature", temperature}, {"lambda", r.lambda}, {"gap", r.gap}};
  if (r.second_gap) j["second_gap"] = *r.second_gap;
  j["bound"] = r.bound;
  j["bound_over_T2"] = r.bound_over_t2;
  j["method"] = r.method;
  j["converged"] = r.converged;
  j["evaluations"] = r.evaluations;
  return j;
}

Json to_json(const SaturationReport& r) {
  return {{"true_temperature", r.true_temperature},
          {"empirical_mse", r.empirical_mse},
          {"crb", r.crb},
          {"ratio", r.ratio},
          {"mean_estimate", r.mean_estimate},
          {"excluded_trials", r.excluded_trials},
          {"trials_used", r.trials_used},
          {"excluded_breakdown",
           {{"at_lower_bound", r.excluded_at_lower_bound},
            {"at_upper_bound", r.excluded_at_upper_bound},
            {"non_invertible", r.excluded_non_invertible}}},
          {"generator", r.generator}};
}

Json saturation_document(const SaturationReport& r, const ExperimentConfig& cfg) {
  Json j = to_json(r);
  j["exclusion_policy_note"] =
      "boundary and non-invertible trials are excluded from empirical_mse and counted in excluded_trials";
  j["config"] = to_json(cfg);
  return j;
}

Json minima_document(const MinimumResult& g, const PairMinimumResult& h, Interval bracket, double tol) {
  return {{"x_m", g.argmin},
          {"g_min", g.value},
          {"x_h", h.argmin[0]},
          {"y_h", h.argmin[1]},
          {"h_min", h.value},
          {"diagnostics",
           {{"g",
             {{"bracket", interval_json(bracket)},
              {"tolerance", tol},
              {"method", "brent + bisection on x sinh x = 2 (1 + cosh x)"},
              {"converged", g.converged},
              {"iterations", g.iterations}}},
            {"h",
             {{"domain", interval_json(kDefaultThreeLevelDomain)},
              {"tolerance", tol},
              {"method", "diagonal brent + bisection, nelder-mead 2-d confirmation"},
              {"converged", h.converged},
              {"iterations", h.iterations},
              {"polish_argmin", h.polish_argmin},
              {"polish_value", h.polish_value},
              {"polish_iterations", h.polish_iterations},
              {"gradient", h.gradient},
              {"stationary", h.stationary}}}}}};
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_csv(std::span<const SaturationReport> reports) {
  std::ostringstream os;
  os << "T,crb,empirical_mse,ratio,excluded,trials_used\n";
  for (const SaturationReport& r : reports) {
    os << format_real(r.true_temperature) << ',' << format_real(r.crb) << ','
       << format_real(r.empirical_mse) << ',' << format_real(r.ratio) << ',' << r.excluded_trials << ','
       << r.trials_used << '\n';
  }
  return os.str();
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qthermo
