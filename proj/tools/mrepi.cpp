// mrepi: epidemic thresholds and outbreak sizes of two-route SIR epidemics on
// two-layer multiplex networks.
//
//   mrepi generate  --kind er-er --n 2000 --ka 5.922 --kb 5.965 --seed 7 --out g.txt
//   mrepi metrics   --graph g.txt
//   mrepi threshold --graph g.txt --step 0.01 --out curve.csv
//   mrepi sweep     --graph g.txt --realizations 500 --out sweep.csv
//   mrepi study     asn --kind sf-sf --targets 0,0.5,1 --rate 0.1 --out asn.csv
//
// Exit codes: 0 success, 1 input error, 2 infeasible target, 3 convergence failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mrepi/edgelist_io.hpp"
#include "mrepi/error.hpp"
#include "mrepi/experiments.hpp"
#include "mrepi/netgen.hpp"
#include "mrepi/rng.hpp"
#include "mrepi/simulation.hpp"
#include "mrepi/theory.hpp"

namespace {

using namespace mrepi;

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kInputError = 1, kInfeasible = 2, kNoConvergence = 3 };

// Options that never influence results and are left out of metadata headers.
bool is_run_neutral(const std::string& name) {
  return name == "threads" || name == "config" || name == "out" || name == "quiet" || name == "help";
}

/// `#config key=value` lines for every resolved option of a subcommand. Feeding
/// an output file back through --config reproduces the run.
std::vector<std::string> metadata(const CLI::App& sub, std::uint64_t seed) {
  std::vector<std::string> lines;
  lines.push_back("mrepi " + std::string(kVersion) + " " + sub.get_name());
  lines.push_back("rng " + std::string(kRngName) + " seed=" + std::to_string(seed));
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || is_run_neutral(name)) continue;
    std::string value;
    if (opt->count() > 0) {
      const auto& results = opt->results();
      for (std::size_t i = 0; i < results.size(); ++i) value += (i ? "," : "") + results[i];
      if (opt->get_type_size() == 0 && value.empty()) value = "true";
    } else {
      value = opt->get_default_str();
      if (opt->get_type_size() == 0 && value.empty()) value = "false";
    }
    if (opt->get_positional() && !opt->nonpositional()) {
      lines.push_back("config " + name + "=" + value + " (positional)");
    } else {
      lines.push_back("config " + name + "=" + value);
    }
  }
  return lines;
}

/// Reads key=value pairs from a plain-text file. Lines starting with '#' are
/// comments except `#config key=value`, so an output header can be reused.
std::map<std::string, std::string> read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path.string() + "'");
  std::map<std::string, std::string> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with("#config ")) {
      line = line.substr(8);
      if (line.ends_with(" (positional)")) continue;
    } else if (line.empty() || line.front() == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.find(',') < eq) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return values;
}

/// Appends `--key value` for config entries not given on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config_path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") config_path = args[i + 1];
  }
  for (const auto& a : args) {
    if (a.starts_with("--config=")) config_path = a.substr(9);
  }
  if (config_path.empty()) return args;
  for (const auto& [key, value] : read_config(config_path)) {
    const std::string flag = "--" + key;
    bool present = false;
    for (const auto& a : args) present = present || a == flag || a.starts_with(flag + "=");
    if (present) continue;
    if (value == "false") continue;
    args.push_back(flag);
    if (value != "true") args.push_back(value);
  }
  return args;
}

struct OutputTarget {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);
    if (!file) throw InputError("cannot open '" + path + "' for writing");
    stream = &file;
  }
  std::ostream& operator*() { return *stream; }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("cannot parse '" + item + "' as a number");
    }
  }
  return values;
}

std::pair<LayerKind, LayerKind> parse_pair_kind(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) throw InputError("--kind expects e.g. er-er, sf-sf, er-sf");
  return {parse_layer_kind(text.substr(0, dash)), parse_layer_kind(text.substr(dash + 1))};
}

ExcessWeighting parse_weighting(const std::string& text) {
  if (text == "edge-class") return ExcessWeighting::edge_class;
  if (text == "magnitude") return ExcessWeighting::magnitude;
  throw InputError("unknown weighting '" + text + "' (expected edge-class or magnitude)");
}

std::string metrics_line(const MultiplexGraph& g) {
  std::ostringstream out;
  out << "n=" << g.size() << " mean_degree_a=" << format_number(g.mean_degree_a())
      << " mean_degree_b=" << format_number(g.mean_degree_b()) << " edges_a_only=" << g.a_only().size()
      << " edges_b_only=" << g.b_only().size() << " edges_shared=" << g.shared().size();
  auto metric = [&](const char* key, auto&& compute) {
    out << ' ' << key << '=';
    try {
      out << format_number(compute());
    } catch (const UndefinedMetricError&) {
      out << "undefined";
    }
  };
  metric("asn", [&] { return asn(g); });
  metric("ddc", [&] { return ddc(g, DdcMode::pearson); });
  metric("ddc_ratio", [&] { return ddc(g, DdcMode::variance_ratio); });
  out << " mean_km=" << format_number(empirical_vector_distribution(g).mean_magnitude());
  return out.str();
}

struct CommonFlags {
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  unsigned threads = 0;
};

void add_common(CLI::App* sub, CommonFlags& flags) {
  sub->option_defaults()->always_capture_default();
  sub->add_option("--seed", flags.seed, "Master RNG seed")->capture_default_str();
  sub->add_option("--out", flags.out, "Output path (default: stdout)");
  sub->add_option("--config", flags.config, "Plain-text key=value file; flags override it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-route SIR epidemics on two-layer multiplex networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  CommonFlags common;

  // generate
  std::string gen_kind = "er-er";
  std::size_t gen_n = 2000;
  double gen_ka = 4.0, gen_kb = 4.0, gen_tol = 0.0;
  std::optional<double> gen_asn, gen_ddc;
  auto* generate = app.add_subcommand("generate", "Generate a multiplex network");
  add_common(generate, common);
  generate->add_option("--kind", gen_kind, "Layer kinds: er-er, sf-sf, er-sf, sf-er");
  generate->add_option("--n", gen_n, "Node count");
  generate->add_option("--ka", gen_ka, "Layer-A mean degree");
  generate->add_option("--kb", gen_kb, "Layer-B mean degree");
  auto* asn_opt = generate->add_option("--asn", gen_asn, "Target ASN (same-kind layers)");
  generate->add_option("--ddc", gen_ddc, "Target Pearson DDC")->excludes(asn_opt);
  generate->add_option("--tolerance", gen_tol, "Coupling tolerance (0: 0.01 ASN, 0.02 DDC)");

  // metrics
  std::string graph_path;
  auto* metrics = app.add_subcommand("metrics", "Print layer degrees, ASN and DDC of a graph file");
  add_common(metrics, common);
  metrics->add_option("--graph", graph_path, "multiplex-edgelist v1 file")->required();

  // threshold
  double step = 0.01;
  std::string weighting_name = "edge-class";
  auto* threshold = app.add_subcommand("threshold", "Epidemic threshold curve of a graph file");
  add_common(threshold, common);
  threshold->add_option("--graph", graph_path, "multiplex-edgelist v1 file")->required();
  threshold->add_option("--step", step, "lambda_a grid step in (0, 0.5]");
  threshold->add_option("--weighting", weighting_name, "edge-class or magnitude");

  // sweep
  double la_min = 0.0, la_max = 0.5, la_step = 0.02, lb_min = 0.0, lb_max = 0.5, lb_step = 0.02;
  std::string fix_lambda_a;
  std::size_t realizations = 500;
  std::string mode_name = "percolation";
  double cutoff = 0.01;
  bool theory_only = false, quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Theory and Monte Carlo outbreak sizes over a rate grid");
  add_common(sweep, common);
  sweep->add_option("--graph", graph_path, "multiplex-edgelist v1 file")->required();
  sweep->add_option("--la-min", la_min);
  sweep->add_option("--la-max", la_max);
  sweep->add_option("--la-step", la_step);
  sweep->add_option("--lb-min", lb_min);
  sweep->add_option("--lb-max", lb_max);
  sweep->add_option("--lb-step", lb_step);
  sweep->add_option("--fix-lambda-a", fix_lambda_a, "Comma list; one section file per value");
  sweep->add_option("--realizations", realizations);
  sweep->add_option("--mode", mode_name, "percolation or sir");
  sweep->add_option("--cutoff", cutoff, "Outbreak cutoff fraction");
  sweep->add_option("--weighting", weighting_name, "edge-class or magnitude");
  sweep->add_flag("--theory-only", theory_only, "Skip Monte Carlo");
  sweep->add_option("--threads", common.threads, "Worker threads (0: all cores)");
  sweep->add_flag("--quiet", quiet, "No progress on stderr");

  // study
  std::string study_name;
  std::string targets;
  std::optional<double> study_rate;
  auto* study = app.add_subcommand("study", "ASN or DDC sweep at equal route rates");
  add_common(study, common);
  study->add_option("study", study_name, "asn or ddc")->required();
  study->add_option("--kind", gen_kind, "Layer kinds: er-er, sf-sf, er-sf, sf-er");
  study->add_option("--n", gen_n);
  study->add_option("--ka", gen_ka);
  study->add_option("--kb", gen_kb);
  study->add_option("--targets", targets, "Comma list of target ASN or DDC values");
  study->add_option("--rate", study_rate, "Common lambda at which outbreak size is measured")->required();
  study->add_option("--tolerance", gen_tol);
  study->add_option("--realizations", realizations);
  study->add_option("--mode", mode_name, "percolation or sir");
  study->add_option("--weighting", weighting_name, "edge-class or magnitude");
  study->add_flag("--theory-only", theory_only, "Skip Monte Carlo");
  study->add_option("--threads", common.threads, "Worker threads (0: all cores)");

  try {
    auto args = merge_config(std::vector<std::string>(argv + 1, argv + argc));
    // CLI11 consumes a vector in reverse order.
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*generate) {
      const auto [kind_a, kind_b] = parse_pair_kind(gen_kind);
      const LayerSpec spec_a{kind_a, gen_n, gen_ka};
      const LayerSpec spec_b{kind_b, gen_n, gen_kb};
      CouplingSpec coupling;
      coupling.tolerance = gen_tol;
      if (gen_asn) {
        coupling.target = CouplingSpec::Target::asn;
        coupling.value = *gen_asn;
      } else if (gen_ddc) {
        coupling.target = CouplingSpec::Target::ddc;
        coupling.value = *gen_ddc;
      }
      const auto result = generate_multiplex(spec_a, spec_b, coupling, common.seed);
      auto header = metadata(*generate, common.seed);
      if (coupling.target == CouplingSpec::Target::none) {
        header.push_back("note layer B randomly relabelled (uncoupled, DDC ~ 0)");
      }
      OutputTarget out(common.out);
      write_edgelist(*out, result.graph, header);
      std::ostream& report = common.out.empty() ? std::cerr : std::cout;
      report << metrics_line(result.graph) << '\n';
      if (result.status == CouplingStatus::unmet) {
        std::cerr << "warning: DDC target " << format_number(result.target) << " not met; best "
                  << format_number(result.measured) << '\n';
      }
    } else if (*metrics) {
      const auto g = read_edgelist(graph_path);
      OutputTarget out(common.out);
      *out << metrics_line(g) << '\n';
    } else if (*threshold) {
      const auto g = read_edgelist(graph_path);
      const auto moments = moment_set(empirical_vector_distribution(g), parse_weighting(weighting_name));
      const auto curve = threshold_curve(moments, step);
      auto header = metadata(*threshold, common.seed);
      if (g.edges_b().empty()) {
        const auto critical = threshold_point_a(moments, 0.0);
        std::cout << "lambda_a_critical="
                  << (critical ? format_number(*critical) : std::string("none")) << '\n';
        header.push_back("single-layer network: lambda_a_critical=" +
                         (critical ? format_number(*critical) : std::string("none")));
      }
      OutputTarget out(common.out);
      write_curve_csv(*out, curve, header);
    } else if (*sweep) {
      const auto g = read_edgelist(graph_path);
      SimConfig cfg;
      cfg.realizations = realizations;
      cfg.master_seed = common.seed;
      cfg.mode = parse_sim_mode(mode_name);
      cfg.outbreak_cutoff = cutoff;
      cfg.threads = common.threads;
      SweepOptions options;
      options.simulate = !theory_only;
      options.theory.weighting = parse_weighting(weighting_name);
      if (!quiet) {
        options.progress = [](std::size_t done, std::size_t total) {
          if (done == total || done % std::max<std::size_t>(1, total / 20) == 0) {
            std::fprintf(stderr, "\rsweep: %zu/%zu", done, total);
            if (done == total) std::fputc('\n', stderr);
          }
        };
      }
      const auto header = metadata(*sweep, common.seed);
      const auto lb_values = grid_values(lb_min, lb_max, lb_step);
      if (!fix_lambda_a.empty()) {
        const auto fixed = parse_list(fix_lambda_a);
        for (const double la : fixed) {
          const auto result = phase_diagram(g, LambdaGrid{{la}, lb_values}, cfg, options);
          std::string path;
          if (!common.out.empty()) {
            std::filesystem::path p(common.out);
            path = (p.parent_path() / (p.stem().string() + ".la" + format_number(la) +
                                       p.extension().string())).string();
          }
          OutputTarget out(path);
          auto section_header = header;
          section_header.push_back("section lambda_a=" + format_number(la));
          write_sweep_csv(*out, result, section_header);
        }
      } else {
        const auto result =
            phase_diagram(g, LambdaGrid{grid_values(la_min, la_max, la_step), lb_values}, cfg, options);
        OutputTarget out(common.out);
        write_sweep_csv(*out, result, header);
      }
    } else if (*study) {
      const auto [kind_a, kind_b] = parse_pair_kind(gen_kind);
      StudyConfig config;
      config.kind = parse_study_kind(study_name);
      config.spec_a = LayerSpec{kind_a, gen_n, gen_ka};
      config.spec_b = LayerSpec{kind_b, gen_n, gen_kb};
      config.targets = parse_list(targets);
      config.rate = *study_rate;
      config.seed = common.seed;
      config.tolerance = gen_tol;
      config.weighting = parse_weighting(weighting_name);
      if (!theory_only) {
        SimConfig cfg;
        cfg.realizations = realizations;
        cfg.master_seed = common.seed;
        cfg.mode = parse_sim_mode(mode_name);
        cfg.threads = common.threads;
        config.sim = cfg;
      }
      const auto rows = run_study(config);
      OutputTarget out(common.out);
      write_study_csv(*out, config.kind, rows, metadata(*study, common.seed));
    }
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}
