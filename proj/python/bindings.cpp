#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwalk/bound_states.hpp"
#include "qwalk/circuit.hpp"
#include "qwalk/compose.hpp"
#include "qwalk/error.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/machine.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/transfer.hpp"
#include "qwalk/widgets.hpp"

namespace py = pybind11;
using namespace qwalk;

namespace {

WidgetKind widget_kind(const std::string &name) {
    auto kind = parse_widget_kind(name);
    if (!kind) throw py::value_error("unknown widget '" + name + "'");
    return *kind;
}

GraphTopology make_graph(std::size_t vertices, const std::vector<std::pair<VertexId, VertexId>> &edges,
                         const std::vector<std::tuple<std::string, VertexId, std::string>> &terminals) {
    std::vector<Edge> e;
    for (auto [u, v] : edges) e.push_back({std::min(u, v), std::max(u, v)});
    std::vector<Terminal> t;
    for (const auto &[name, vertex, kind] : terminals) t.push_back({name, vertex, terminal_kind_from_string(kind)});
    return GraphTopology(vertices, std::move(e), std::move(t));
}

py::dict report_dict(const RunReport &r) {
    py::dict d;
    d["mode"] = r.mode;
    d["valid_probability"] = r.valid_probability;
    d["conditional_distribution"] = r.conditional_distribution;
    d["output_probability"] = r.output_probability;
    d["t"] = r.t;
    d["vertex_count"] = r.vertex_count;
    d["filter_count"] = r.filter_count;
    d["truncation_length"] = r.truncation_length;
    d["effective_length"] = r.total_effective_length;
    d["norm"] = r.norm;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quantum-walk circuit compiler and scattering analysis";

    py::register_exception<Error>(m, "QwalkError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    py::class_<GraphTopology>(m, "Graph")
        .def(py::init(&make_graph), py::arg("vertices"), py::arg("edges"), py::arg("terminals") = py::list())
        .def_property_readonly("vertex_count", &GraphTopology::vertex_count)
        .def_property_readonly("edges",
                               [](const GraphTopology &g) {
                                   std::vector<std::pair<VertexId, VertexId>> out;
                                   for (const auto &e : g.edges()) out.emplace_back(e.u, e.v);
                                   return out;
                               })
        .def_property_readonly("terminals",
                               [](const GraphTopology &g) {
                                   std::vector<std::tuple<std::string, VertexId, std::string>> out;
                                   for (const auto &t : g.terminals()) {
                                       out.emplace_back(t.name, t.vertex, std::string(to_string(t.kind)));
                                   }
                                   return out;
                               })
        .def("max_degree", &GraphTopology::max_degree, py::arg("count_leads") = true)
        .def("is_bipartite", &GraphTopology::is_bipartite)
        .def("adjacency_matrix", &GraphTopology::adjacency_matrix)
        .def("to_json", [](const GraphTopology &g) { return serialize_graph(g); })
        .def_static("from_json", [](const std::string &text) { return parse_graph(text); })
        .def("__eq__", [](const GraphTopology &a, const GraphTopology &b) { return a == b; })
        .def("__repr__", [](const GraphTopology &g) {
            return "<Graph " + std::to_string(g.vertex_count()) + " vertices, " + std::to_string(g.edges().size()) +
                   " edges, " + std::to_string(g.terminals().size()) + " terminals>";
        });

    m.def("build_widget", [](const std::string &name) { return build_widget(widget_kind(name)); }, py::arg("name"));
    m.def("glue_series", &glue_series, py::arg("first"), py::arg("second"));

    m.def(
        "s_matrix",
        [](const GraphTopology &g, double k) {
            auto s = s_matrix(g, Momentum(k));
            return py::make_tuple(s.terminals, s.entries);
        },
        py::arg("graph"), py::arg("k"), "Terminal names and the S-matrix (rows: incoming lead).");
    m.def(
        "transmission",
        [](const GraphTopology &g, double k, const std::string &from, const std::string &to, int shift) {
            return transmission(g, Momentum(k), from, to, PhaseReference{shift});
        },
        py::arg("graph"), py::arg("k"), py::arg("source"), py::arg("target"), py::arg("shift") = 0);
    m.def(
        "effective_length",
        [](const GraphTopology &g, const std::string &from, const std::string &to, double k, int shift) {
            return effective_length(g, from, to, Momentum(k), PhaseReference{shift});
        },
        py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("k"), py::arg("shift") = 0);
    m.def(
        "reference_coefficient",
        [](const std::string &widget, const std::string &channel, double k) {
            return reference_coefficient(widget_kind(widget).type, channel, k);
        },
        py::arg("widget"), py::arg("channel"), py::arg("k"));
    m.def("group_velocity", &group_velocity, py::arg("k"));

    m.def(
        "bound_states",
        [](const GraphTopology &g) {
            py::list out;
            for (const auto &s : find_bound_states(g)) {
                py::dict d;
                d["kappa"] = s.kappa;
                d["sign"] = s.sign;
                d["energy"] = s.energy;
                d["lead_amplitudes"] = s.lead_amplitudes;
                d["residual"] = s.residual;
                out.append(d);
            }
            return out;
        },
        py::arg("graph"));

    m.def(
        "filter_chain",
        [](int m_d, double k) {
            auto r = chain_transmission(filter_decoration(), m_d, Momentum(k));
            py::dict d;
            d["transmission"] = r.transmission;
            d["eigenvalue_magnitudes"] = r.eigenvalue_magnitudes;
            return d;
        },
        py::arg("m_d"), py::arg("k"));

    m.def(
        "compose_deviation",
        [](const std::vector<std::string> &widgets, double k) {
            int qubits = 0;
            for (const auto &w : widgets) qubits = std::max(qubits, widget_qubits(widget_kind(w).type));
            std::vector<GraphTopology> parts;
            for (const auto &w : widgets) parts.push_back(widget_layer(widget_kind(w), qubits));
            Momentum momentum(k);
            GraphTopology glued = parts.front();
            ChannelBlock block = extract_block(parts.front(), momentum);
            for (std::size_t i = 1; i < parts.size(); ++i) {
                glued = glue_series(glued, parts[i]);
                block = compose_blocks(block, extract_block(parts[i], momentum));
            }
            ChannelBlock direct = extract_block(glued, momentum);
            return std::max({(block.forward - direct.forward).cwiseAbs().maxCoeff(),
                             (block.reflection - direct.reflection).cwiseAbs().maxCoeff(),
                             (block.backward - direct.backward).cwiseAbs().maxCoeff(),
                             (block.back_reflection - direct.back_reflection).cwiseAbs().maxCoeff()});
        },
        py::arg("widgets"), py::arg("k"), "Largest entry difference between composed blocks and the glued graph.");

    m.def(
        "compile_circuit",
        [](const std::string &text, std::optional<int> qubits) { return compile_circuit(parse_circuit(text, qubits)); },
        py::arg("circuit"), py::arg("qubits") = py::none());

    m.def(
        "evolve",
        [](const GraphTopology &g, const ComplexVector &psi, double t, const std::string &method) {
            return evolve_state(g, psi, t, evolution_method_from_string(method));
        },
        py::arg("graph"), py::arg("psi"), py::arg("t"), py::arg("method") = "auto");

    m.def(
        "run",
        [](const std::string &text, std::optional<int> qubits, int x, std::optional<int> filters,
           const std::string &mode, double width) {
            AssemblyOptions options;
            options.start_offset = x;
            options.filter_count = filters;
            auto machine = assemble_computer(parse_circuit(text, qubits), options);
            InputMode input = VertexInput{};
            if (mode == "packet") {
                input = PacketInput{width};
            } else if (mode != "vertex") {
                throw py::value_error("mode must be 'vertex' or 'packet'");
            }
            return report_dict(run_computer(machine, input));
        },
        py::arg("circuit"), py::arg("qubits") = py::none(), py::arg("x") = 400, py::arg("filters") = py::none(),
        py::arg("mode") = "vertex", py::arg("width") = 25.0);
}
