#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mrepi/edgelist_io.hpp"
#include "mrepi/experiments.hpp"
#include "mrepi/multiplex.hpp"
#include "mrepi/netgen.hpp"
#include "mrepi/simulation.hpp"
#include "mrepi/theory.hpp"

namespace py = pybind11;
using namespace mrepi;

namespace {

using PyEdges = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

EdgeList to_edges(const PyEdges& pairs) {
  EdgeList edges;
  edges.reserve(pairs.size());
  for (auto [u, v] : pairs) edges.push_back(Edge(u, v));
  return edges;
}

PyEdges to_pairs(std::span<const Edge> edges) {
  PyEdges out;
  out.reserve(edges.size());
  for (const Edge& e : edges) out.emplace_back(e.u, e.v);
  return out;
}

ExcessWeighting parse_weighting(const std::string& name) {
  if (name == "edge-class" || name == "edge_class") return ExcessWeighting::edge_class;
  if (name == "magnitude") return ExcessWeighting::magnitude;
  throw InputError("unknown weighting '" + name + "'");
}

CouplingSpec coupling(std::optional<double> asn_target, std::optional<double> ddc_target, double tolerance) {
  if (asn_target && ddc_target) throw InputError("give at most one of asn and ddc");
  CouplingSpec spec;
  spec.tolerance = tolerance;
  if (asn_target) spec.target = CouplingSpec::Target::asn, spec.value = *asn_target;
  if (ddc_target) spec.target = CouplingSpec::Target::ddc, spec.value = *ddc_target;
  return spec;
}

py::dict solution_dict(const OutbreakSolution& s) {
  py::dict d;
  d["u_a"] = s.u_a;
  d["u_b"] = s.u_b;
  d["u_c"] = s.u_c;
  d["s"] = s.s;
  d["iterations"] = s.iterations;
  d["converged"] = s.converged;
  return d;
}

}  // namespace

PYBIND11_MODULE(_mrepi, m) {
  m.doc() = "Two-route SIR epidemics on two-layer multiplex networks";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<InfeasibleError>(m, "InfeasibleError", base.ptr());
  py::register_exception<SupercriticalError>(m, "SupercriticalError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConvergenceError& e) {
      PyErr_SetString(PyExc_ArithmeticError, e.what());
    }
  });

  py::class_<VectorDegree>(m, "VectorDegree")
      .def_readonly("a_only", &VectorDegree::a_only)
      .def_readonly("b_only", &VectorDegree::b_only)
      .def_readonly("shared", &VectorDegree::shared)
      .def_property_readonly("magnitude", &VectorDegree::magnitude)
      .def("__repr__", [](const VectorDegree& k) {
        return "VectorDegree(" + std::to_string(k.a_only) + ", " + std::to_string(k.b_only) + ", " +
               std::to_string(k.shared) + ")";
      });

  py::class_<MultiplexGraph>(m, "MultiplexGraph")
      .def(py::init([](std::size_t n, const PyEdges& a, const PyEdges& b) {
             return MultiplexGraph(n, to_edges(a), to_edges(b));
           }),
           py::arg("n"), py::arg("edges_a"), py::arg("edges_b"))
      .def_property_readonly("n", &MultiplexGraph::size)
      .def_property_readonly("edges_a", [](const MultiplexGraph& g) { return to_pairs(g.edges_a()); })
      .def_property_readonly("edges_b", [](const MultiplexGraph& g) { return to_pairs(g.edges_b()); })
      .def_property_readonly("a_only", [](const MultiplexGraph& g) { return to_pairs(g.a_only()); })
      .def_property_readonly("b_only", [](const MultiplexGraph& g) { return to_pairs(g.b_only()); })
      .def_property_readonly("shared", [](const MultiplexGraph& g) { return to_pairs(g.shared()); })
      .def_property_readonly("mean_degree_a", &MultiplexGraph::mean_degree_a)
      .def_property_readonly("mean_degree_b", &MultiplexGraph::mean_degree_b)
      .def("vector_degree", &MultiplexGraph::vector_degree, py::arg("node"));

  m.def("asn", &asn, py::arg("graph"));
  m.def(
      "ddc",
      [](const MultiplexGraph& g, const std::string& mode) {
        return ddc(g, mode == "variance-ratio" || mode == "variance_ratio" ? DdcMode::variance_ratio : DdcMode::pearson);
      },
      py::arg("graph"), py::arg("mode") = "pearson");
  m.def(
      "vector_distribution",
      [](const MultiplexGraph& g) {
        std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, double> out;
        for (const auto& [k, p] : empirical_vector_distribution(g).entries()) out[{k.a_only, k.b_only, k.shared}] = p;
        return out;
      },
      py::arg("graph"), "{(k_A - k_C, k_B - k_C, k_C): probability}");

  m.def(
      "read_edgelist", [](const std::filesystem::path& p) { return read_edgelist(p); }, py::arg("path"));
  m.def(
      "write_edgelist",
      [](const std::filesystem::path& p, const MultiplexGraph& g, const std::vector<std::string>& comments) {
        write_edgelist(p, g, comments);
      },
      py::arg("path"), py::arg("graph"), py::arg("comments") = std::vector<std::string>{});

  m.def(
      "gen_er", [](std::size_t n, double k, std::uint64_t seed) { return to_pairs(gen_er(n, k, seed)); },
      py::arg("n"), py::arg("mean_degree"), py::arg("seed"));
  m.def(
      "gen_sf", [](std::size_t n, double k, std::uint64_t seed) { return to_pairs(gen_sf(n, k, seed)); },
      py::arg("n"), py::arg("mean_degree"), py::arg("seed"));
  m.def(
      "generate",
      [](const std::string& kind_a, const std::string& kind_b, std::size_t n, double ka, double kb,
         std::uint64_t seed, std::optional<double> asn_target, std::optional<double> ddc_target, double tolerance) {
        const LayerSpec a{parse_layer_kind(kind_a), n, ka};
        const LayerSpec b{parse_layer_kind(kind_b), n, kb};
        auto r = generate_multiplex(a, b, coupling(asn_target, ddc_target, tolerance), seed);
        return py::make_tuple(std::move(r.graph), r.measured, r.status == CouplingStatus::met);
      },
      py::arg("kind_a"), py::arg("kind_b"), py::arg("n"), py::arg("ka"), py::arg("kb"), py::arg("seed"),
      py::arg("asn") = py::none(), py::arg("ddc") = py::none(), py::arg("tolerance") = 0.0,
      "Returns (graph, measured coupling value, target met).");

  m.def("compose_lambda_c", &compose_lambda_c, py::arg("lambda_a"), py::arg("lambda_b"));
  m.def(
      "moment_set",
      [](const MultiplexGraph& g, const std::string& weighting) {
        const auto ms = moment_set(empirical_vector_distribution(g), parse_weighting(weighting));
        py::dict d;
        d["mean_km"] = ms.mean_km;
        d["m"] = ms.m;
        d["norm"] = ms.norm;
        return d;
      },
      py::arg("graph"), py::arg("weighting") = "edge-class");
  m.def(
      "threshold_point",
      [](const MultiplexGraph& g, double la, const std::string& w) {
        return threshold_point(empirical_vector_distribution(g), la, parse_weighting(w));
      },
      py::arg("graph"), py::arg("lambda_a"), py::arg("weighting") = "edge-class");
  m.def(
      "threshold_point_a",
      [](const MultiplexGraph& g, double lb, const std::string& w) {
        return threshold_point_a(moment_set(empirical_vector_distribution(g), parse_weighting(w)), lb);
      },
      py::arg("graph"), py::arg("lambda_b"), py::arg("weighting") = "edge-class");
  m.def(
      "threshold_curve",
      [](const MultiplexGraph& g, double step, const std::string& w) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : threshold_curve(empirical_vector_distribution(g), step, parse_weighting(w)).points) {
          out.emplace_back(p.lambda_a, p.lambda_b);
        }
        return out;
      },
      py::arg("graph"), py::arg("step") = 0.01, py::arg("weighting") = "edge-class");
  m.def(
      "diagonal_threshold",
      [](const MultiplexGraph& g, const std::string& w) {
        return diagonal_threshold(moment_set(empirical_vector_distribution(g), parse_weighting(w)));
      },
      py::arg("graph"), py::arg("weighting") = "edge-class");
  m.def(
      "mean_outbreak",
      [](const MultiplexGraph& g, double la, double lb, const std::string& w) {
        return mean_outbreak(empirical_vector_distribution(g), SpreadingRate(la, lb), parse_weighting(w));
      },
      py::arg("graph"), py::arg("lambda_a"), py::arg("lambda_b"), py::arg("weighting") = "edge-class");
  m.def(
      "outbreak_size",
      [](const MultiplexGraph& g, double la, double lb, double tol, std::size_t max_iter, const std::string& w) {
        OutbreakOptions opt;
        opt.tol = tol;
        opt.max_iter = max_iter;
        opt.weighting = parse_weighting(w);
        return solution_dict(outbreak_size(empirical_vector_distribution(g), SpreadingRate(la, lb), opt));
      },
      py::arg("graph"), py::arg("lambda_a"), py::arg("lambda_b"), py::arg("tol") = 1e-12,
      py::arg("max_iter") = 1'000'000, py::arg("weighting") = "edge-class");

  m.def(
      "percolate_once",
      [](const MultiplexGraph& g, double la, double lb, std::uint64_t seed) {
        return percolate_once(g, SpreadingRate(la, lb), seed);
      },
      py::arg("graph"), py::arg("lambda_a"), py::arg("lambda_b"), py::arg("seed"));
  m.def(
      "sir_once",
      [](const MultiplexGraph& g, double la, double lb, NodeId node, std::uint64_t seed) {
        return sir_once(g, SpreadingRate(la, lb), node, seed);
      },
      py::arg("graph"), py::arg("lambda_a"), py::arg("lambda_b"), py::arg("seed_node"), py::arg("seed"));
  m.def(
      "run_ensemble",
      [](const MultiplexGraph& g, double la, double lb, std::size_t realizations, std::uint64_t seed,
         const std::string& mode, double cutoff, unsigned threads) {
        SimConfig cfg;
        cfg.realizations = realizations;
        cfg.master_seed = seed;
        cfg.mode = parse_sim_mode(mode);
        cfg.outbreak_cutoff = cutoff;
        cfg.threads = threads;
        SimResult r;
        {
          py::gil_scoped_release release;
          r = run_ensemble(g, SpreadingRate(la, lb), cfg);
        }
        py::dict d;
        d["mean_s"] = r.mean_s;
        d["stderr"] = r.stderr_s;
        d["outbreak_probability"] = r.outbreak_probability;
        d["seed_mean"] = r.seed_mean;
        d["seed_stderr"] = r.seed_stderr;
        d["realizations"] = r.realizations;
        return d;
      },
      py::arg("graph"), py::arg("lambda_a"), py::arg("lambda_b"), py::arg("realizations") = 500,
      py::arg("seed") = 1, py::arg("mode") = "percolation", py::arg("cutoff") = 0.01, py::arg("threads") = 0);

  m.attr("__version__") = "0.1.0";
}
