#include "mrepi/experiments.hpp"

#include <bit>
#include <ostream>

#include "mrepi/error.hpp"
#include "mrepi/rng.hpp"

namespace mrepi {

namespace {

std::uint64_t target_seed(std::uint64_t seed, double target) {
  return derive_seed(seed, std::bit_cast<std::uint64_t>(target));
}

void fill_metrics(StudyRow& row, const MultiplexGraph& g, const StudyConfig& config) {
  row.asn = asn(g);
  row.ddc = ddc(g);
  const auto dist = empirical_vector_distribution(g);
  row.threshold = diagonal_threshold(moment_set(dist, config.weighting));
  const SpreadingRate rate(config.rate, config.rate);
  OutbreakOptions options;
  options.weighting = config.weighting;
  row.s_theory = outbreak_size(dist, rate, options).s;
  if (config.sim) {
    SimConfig sim = *config.sim;
    const SimResult result = run_ensemble(g, rate, sim);
    row.s_sim = result.mean_s;
    row.stderr_s = result.stderr_s;
  }
}

}  // namespace

StudyKind parse_study_kind(std::string_view text) {
  if (text == "asn") return StudyKind::asn;
  if (text == "ddc") return StudyKind::ddc;
  throw InputError("unknown study '" + std::string(text) + "' (expected asn or ddc)");
}

std::vector<StudyRow> run_study(const StudyConfig& config) {
  config.spec_a.validate();
  config.spec_b.validate();
  if (config.spec_a.n != config.spec_b.n) throw InputError("layers must have the same node count");
  SpreadingRate(config.rate, config.rate);  // validates the rate
  std::vector<StudyRow> rows;
  if (config.targets.empty()) return rows;

  EdgeList layer_a, layer_b;
  if (config.kind == StudyKind::ddc) {
    layer_a = gen_layer(config.spec_a, derive_seed(config.seed, 1));
    layer_b = gen_layer(config.spec_b, derive_seed(config.seed, 2));
  }

  for (const double target : config.targets) {
    StudyRow row;
    row.target = target;
    if (config.kind == StudyKind::asn) {
      try {
        // Same seed for every target: one layer A, nested shared bases.
        const auto coupled = couple_asn(config.spec_a, config.spec_b, target, config.seed,
                                        config.tolerance > 0.0 ? config.tolerance : 0.01);
        fill_metrics(row, coupled.graph, config);
      } catch (const InfeasibleError&) {
        row.status = "infeasible";
      }
    } else {
      DdcSearchOptions options;
      if (config.tolerance > 0.0) options.tolerance = config.tolerance;
      const auto coupled = couple_ddc(config.spec_a.n, layer_a, layer_b, target,
                                      target_seed(config.seed, target), options);
      if (coupled.status == CouplingStatus::unmet) row.status = "unmet";
      fill_metrics(row, coupled.graph, config);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_study_csv(std::ostream& out, StudyKind kind, const std::vector<StudyRow>& rows,
                     const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << '#' << c << '\n';
  out << "study,target,asn,ddc,threshold,s_theory,s_sim,stderr,status\n";
  const char* name = kind == StudyKind::asn ? "asn" : "ddc";
  for (const StudyRow& row : rows) {
    out << name << ',' << format_number(row.target) << ',';
    if (row.status == "infeasible") {
      out << ",,,,,," << row.status << '\n';
      continue;
    }
    out << format_number(row.asn) << ',' << format_number(row.ddc) << ','
        << (row.threshold ? format_number(*row.threshold) : std::string()) << ','
        << format_number(row.s_theory) << ','
        << (row.s_sim ? format_number(*row.s_sim) : std::string()) << ','
        << (row.s_sim ? format_number(row.stderr_s) : std::string()) << ',' << row.status << '\n';
  }
}

}  // namespace mrepi
