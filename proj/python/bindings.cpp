#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "khopnet/baselines.hpp"
#include "khopnet/config.hpp"
#include "khopnet/dump.hpp"
#include "khopnet/engine.hpp"
#include "khopnet/error.hpp"
#include "khopnet/experiment.hpp"
#include "khopnet/metrics.hpp"
#include "khopnet/protocol.hpp"
#include "khopnet/topology.hpp"

namespace py = pybind11;
using namespace khopnet;

namespace {

std::vector<Role> roles_of(const BaselineResult& r) { return r.roles; }

MetricsReport report_for(const SimResult& r, int k) { return make_report(k, r.snapshot, r.ledgers); }

}  // namespace

PYBIND11_MODULE(_khopnet, m) {
  m.doc() = "k-hop cluster-head election simulator";

  py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", m.attr("Error"));
  py::register_exception<FileNotFound>(m, "FileNotFound", m.attr("Error"));
  py::register_exception<UsageError>(m, "UsageError", m.attr("Error"));
  py::register_exception<PhaseTimeout>(m, "PhaseTimeout", m.attr("Error"));
  py::register_exception<EmptyInput>(m, "EmptyInput", m.attr("Error"));

  py::enum_<Role>(m, "Role")
      .value("CLUSTER_HEAD", Role::ClusterHead)
      .value("GATEWAY", Role::Gateway)
      .value("ORDINARY", Role::Ordinary)
      .value("UNCLUSTERED", Role::Unclustered);

  py::class_<Vec3>(m, "Vec3")
      .def(py::init<double, double, double>(), py::arg("x") = 0, py::arg("y") = 0,
           py::arg("z") = 0)
      .def_readwrite("x", &Vec3::x)
      .def_readwrite("y", &Vec3::y)
      .def_readwrite("z", &Vec3::z);

  py::class_<NodeKinematics>(m, "NodeKinematics")
      .def(py::init<>())
      .def_readwrite("id", &NodeKinematics::id)
      .def_readwrite("position", &NodeKinematics::position)
      .def_readwrite("destination", &NodeKinematics::destination)
      .def_readwrite("speed", &NodeKinematics::speed);

  py::class_<Topology>(m, "Topology")
      .def(py::init<>())
      .def_readwrite("tag", &Topology::tag)
      .def_readwrite("kind", &Topology::kind)
      .def_readwrite("nodes", &Topology::nodes)
      .def("__len__", &Topology::count);

  py::class_<TopologySpec>(m, "TopologySpec")
      .def(py::init<>())
      .def_readwrite("nodes", &TopologySpec::nodes)
      .def_readwrite("width", &TopologySpec::width)
      .def_readwrite("height", &TopologySpec::height)
      .def_readwrite("min_speed", &TopologySpec::min_speed)
      .def_readwrite("max_speed", &TopologySpec::max_speed)
      .def_readwrite("with_motion", &TopologySpec::with_motion)
      .def_readwrite("seed", &TopologySpec::seed);

  py::class_<VisibilityGraph>(m, "VisibilityGraph")
      .def(py::init<std::size_t>())
      .def("add_edge", &VisibilityGraph::add_edge)
      .def("neighbors", [](const VisibilityGraph& g, int v) {
        auto nb = g.neighbors(v);
        return std::vector<int>(nb.begin(), nb.end());
      })
      .def("degree", &VisibilityGraph::degree)
      .def("adjacent", &VisibilityGraph::adjacent)
      .def("edge_count", &VisibilityGraph::edge_count)
      .def("__len__", &VisibilityGraph::size);

  m.def("parse_topology", [](const std::string& text) { return parse_topology(text); });
  m.def("emit_topology", &emit_topology);
  m.def("generate_topology", &generate_topology);
  m.def("build_visibility_graph",
        [](const Topology& t, double range) { return build_visibility_graph(t, RadioConfig{range}); },
        py::arg("topology"), py::arg("range") = 250.0);
  m.def("k_hop_set", &k_hop_set);

  py::class_<NodeAttributes>(m, "NodeAttributes")
      .def(py::init([](double b, double mob, double mc, int ns, double pp, double serve) {
             return NodeAttributes{b, mob, mc, ns, pp, serve};
           }),
           py::arg("battery"), py::arg("mobility"), py::arg("memory"),
           py::arg("single_hop_count") = 0, py::arg("processing") = 0.0,
           py::arg("serve_time") = 0.0)
      .def_readwrite("battery", &NodeAttributes::battery)
      .def_readwrite("mobility", &NodeAttributes::mobility)
      .def_readwrite("memory", &NodeAttributes::memory)
      .def_readwrite("single_hop_count", &NodeAttributes::single_hop_count)
      .def_readwrite("processing", &NodeAttributes::processing)
      .def_readwrite("serve_time", &NodeAttributes::serve_time);

  py::class_<PriorityWeights>(m, "PriorityWeights")
      .def(py::init([](int w1, int w2, int w3, int w4, int w5) {
             return PriorityWeights{w1, w2, w3, w4, w5};
           }),
           py::arg("w1") = 3, py::arg("w2") = 4, py::arg("w3") = 2, py::arg("w4") = 2,
           py::arg("w5") = 1);

  m.def("compute_priority", &compute_priority, py::arg("attributes"),
        py::arg("weights") = PriorityWeights{}, py::arg("ns_threshold") = 10);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("duration", &SimConfig::duration)
      .def_readwrite("boot_join", &SimConfig::boot_join)
      .def_property(
          "k", [](const SimConfig& c) { return c.protocol.thresholds.max_hops; },
          [](SimConfig& c, int k) { c.protocol.thresholds.max_hops = k; })
      .def_property(
          "radio_range", [](const SimConfig& c) { return c.radio.range; },
          [](SimConfig& c, double r) { c.radio.range = r; })
      .def("to_text", &emit_config)
      .def_static("from_text", [](const std::string& text) { return parse_config(text); });

  py::class_<EnergyLedger>(m, "EnergyLedger")
      .def_readonly("node", &EnergyLedger::node)
      .def_readonly("ucast_bytes_tx", &EnergyLedger::ucast_bytes_tx)
      .def_readonly("ucast_msgs_tx", &EnergyLedger::ucast_msgs_tx)
      .def_readonly("bcast_bytes_tx", &EnergyLedger::bcast_bytes_tx)
      .def_readonly("bcast_msgs_tx", &EnergyLedger::bcast_msgs_tx)
      .def_readonly("ucast_bytes_rx", &EnergyLedger::ucast_bytes_rx)
      .def_readonly("ucast_msgs_rx", &EnergyLedger::ucast_msgs_rx)
      .def_readonly("bcast_bytes_rx", &EnergyLedger::bcast_bytes_rx)
      .def_readonly("bcast_msgs_rx", &EnergyLedger::bcast_msgs_rx)
      .def_readonly("exec_time", &EnergyLedger::exec_time)
      .def_readonly("consumed_energy", &EnergyLedger::consumed_energy);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("k", &MetricsReport::k)
      .def_readonly("nodes", &MetricsReport::nodes)
      .def_readonly("n_clusterheads", &MetricsReport::n_clusterheads)
      .def_readonly("n_gateways", &MetricsReport::n_gateways)
      .def_readonly("n_ordinary", &MetricsReport::n_ordinary)
      .def_readonly("avg_connected_clusterheads", &MetricsReport::avg_connected_clusterheads)
      .def_readonly("backbone_avg_shortest_path", &MetricsReport::backbone_avg_shortest_path)
      .def_readonly("packets_total", &MetricsReport::packets_total)
      .def_readonly("bytes_total", &MetricsReport::bytes_total)
      .def("__str__", &format_report_line);

  py::class_<SimResult>(m, "SimResult")
      .def_property_readonly("roles", [](const SimResult& r) { return r.snapshot.roles; })
      .def_property_readonly("membership", [](const SimResult& r) { return r.snapshot.membership; })
      .def_readonly("ledgers", &SimResult::ledgers)
      .def_readonly("packets", &SimResult::packets)
      .def_readonly("bytes", &SimResult::bytes)
      .def_property_readonly("trace_text", [](const SimResult& r) { return format_trace(r.trace); })
      .def("report", &report_for, py::arg("k"));

  m.def("simulate", [](const SimConfig& cfg, const Topology& t) { return run(cfg, t); },
        py::arg("config"), py::arg("topology"), py::call_guard<py::gil_scoped_release>());

  py::class_<BaselineResult>(m, "BaselineResult")
      .def_property_readonly("roles", &roles_of)
      .def_readonly("membership", &BaselineResult::membership);
  m.def("lowest_id_clustering", &lowest_id_clustering);
  m.def("highest_degree_clustering", &highest_degree_clustering);

  py::class_<DumpData>(m, "DumpData")
      .def_readonly("tag", &DumpData::tag)
      .def_readonly("kind", &DumpData::kind)
      .def_readonly("rows", &DumpData::rows)
      .def_readonly("packets", &DumpData::packets)
      .def_readonly("bytes", &DumpData::bytes)
      .def_readonly("black", &DumpData::black)
      .def_readonly("grey", &DumpData::grey)
      .def_readonly("white", &DumpData::white)
      .def_readonly("adjacency", &DumpData::adjacency);
  m.def("parse_dump", [](const std::string& text) { return parse_dump(text); });
  m.def("emit_dump", &emit_dump);

  m.def(
      "run_experiment",
      [](const std::string& topology_dir, std::size_t n, int index, int k, bool degree,
         const std::string& algo, std::optional<std::uint64_t> seed, bool generate,
         double area) {
        CliOptions o;
        o.topology_dir = topology_dir;
        o.n = n;
        o.index = index;
        o.k = k;
        o.degree_version = degree;
        auto a = algorithm_from_string(algo);
        if (!a) throw UsageError("unknown algorithm '" + algo + "'");
        o.algorithm = *a;
        o.seed = seed;
        o.generate = generate;
        o.area = area;
        auto out = run_experiment(o);
        return py::make_tuple(out.dump_text, out.report);
      },
      py::arg("topology_dir"), py::arg("n"), py::arg("index"), py::arg("k"),
      py::arg("degree") = false, py::arg("algo") = "khop", py::arg("seed") = py::none(),
      py::arg("generate") = false, py::arg("area") = 2500.0);

  m.def("emit_plot_data",
        [](const std::vector<MetricsReport>& reports, const std::string& recipe) {
          return emit_plot_data(reports, recipe);
        });
  m.def("figure_ids", &figure_ids);
}
