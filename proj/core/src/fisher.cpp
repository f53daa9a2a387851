#include "qthermo/fisher.hpp"

#include "qthermo/error.hpp"

namespace qthermo {

VarianceBound bound_from_information(double fisher) {
  if (!(fisher > 0.0)) return Unbounded{};
  return 1.0 / fisher;
}

VarianceBound per_shots(const VarianceBound& single_shot, std::uint64_t shots) {
  if (shots == 0) throw DomainError("M", "number of shots must be at least 1");
  if (is_unbounded(single_shot)) return Unbounded{};
  return std::get<double>(single_shot) / static_cast<double>(shots);
}

namespace {

std::vector<double> sld_from_state(const ThermalState& st) {
  const auto& s = st.spectrum();
  const double t2 = st.temperature() * st.temperature();
  const double mean = mean_excitation(st);
  std::vector<double> out(s.size());
  for (std::size_t n = 0; n < s.size(); ++n) out[n] = (s.gap(n) - mean) / t2;
  return out;
}

}  // namespace

std::vector<double> sld_eigenvalues(const Spectrum& s, double temperature) {
  return sld_from_state(gibbs_state(s, temperature));
}

double fisher_information(const Spectrum& s, double temperature) {
  const double cv = specific_heat(s, temperature);
  return cv / (temperature * temperature);
}

FisherReport fisher_report(const Spectrum& s, double temperature) {
  const ThermalState st = gibbs_state(s, temperature);
  const double t2 = temperature * temperature;

  FisherReport r;
  r.temperature = temperature;
  r.specific_heat = energy_variance(st) / t2;
  r.fisher = r.specific_heat / t2;
  r.sld_eigenvalues = sld_from_state(st);
  r.crb_single_shot = bound_from_information(r.fisher);
  return r;
}

}  // namespace qthermo
