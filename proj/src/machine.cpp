#include "qwalk/machine.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/error.hpp"
#include "qwalk/scattering.hpp"

namespace qwalk {

const LeadPath &TruncatedGraph::lead(std::string_view terminal) const {
    for (const auto &l : leads) {
        if (l.terminal == terminal) return l;
    }
    throw GraphError("no lead named '" + std::string(terminal) + "'");
}

VertexId TruncatedGraph::vertex_at(std::string_view terminal, std::size_t x) const {
    const auto &l = lead(terminal);
    if (x == 0) return l.terminal_vertex;
    if (x > l.length()) {
        throw GraphError("position " + std::to_string(x) + " is past the end of lead '" + l.terminal + "' (length " +
                         std::to_string(l.length()) + ")");
    }
    return l.vertices[x - 1];
}

TruncatedGraph truncate_leads(const GraphTopology &graph, std::size_t length) {
    if (length < 1) throw GraphError("lead truncation length must be positive");
    TruncatedGraph out;
    out.core_vertex_count = graph.vertex_count();
    std::vector<Edge> edges(graph.edges().begin(), graph.edges().end());
    auto next = static_cast<VertexId>(graph.vertex_count());
    for (const auto &t : graph.terminals()) {
        LeadPath lead{t.name, t.kind, t.vertex, {}};
        VertexId previous = t.vertex;
        for (std::size_t x = 1; x <= length; ++x) {
            edges.push_back({previous, next});
            lead.vertices.push_back(next);
            previous = next++;
        }
        out.leads.push_back(std::move(lead));
    }
    out.graph = GraphTopology(next, std::move(edges));
    return out;
}

int default_filter_count(std::size_t gate_count) {
    return 2 * static_cast<int>(std::ceil(std::log2(static_cast<double>(gate_count) + 2.0)));
}

double evolution_time(double start_offset, double effective_length) {
    return pi * std::floor((start_offset + effective_length) / (std::sqrt(2.0) * pi));
}

double widget_delay(WidgetKind kind) {
    if (kind.type == WidgetType::wire) return kind.wire_length;
    if (kind.type == WidgetType::cnot) return 1.0;
    const GraphTopology widget = build_widget(kind);
    const auto inputs = widget.terminal_names(TerminalKind::input);
    const auto outputs = widget.terminal_names(TerminalKind::output);
    return effective_length(widget, inputs.front(), outputs.front(), Momentum(design_momentum));
}

double gate_delay(const Gate &gate) {
    switch (gate.type) {
        case GateType::cnot: return widget_delay(WidgetKind::cnot());
        case GateType::ub: return widget_delay(WidgetKind::phase_shift());
        case GateType::uc: return widget_delay(WidgetKind::basis_change());
        case GateType::hadamard: return 4 * widget_delay(WidgetKind::phase_shift()) + widget_delay(WidgetKind::basis_change());
    }
    return 0.0;
}

GraphTopology input_conditioner(int filter_count) {
    if (filter_count < 0) throw GraphError("filter count must be non-negative");
    const GraphTopology filter = build_widget(WidgetKind::filter());
    std::optional<GraphTopology> chain;
    for (int i = 1; i <= filter_count; ++i) {
        const std::pair<std::string, std::string> rename{"drain", "drain_" + std::to_string(i)};
        GraphTopology piece = filter.rename_terminals({&rename, 1});
        chain = chain ? glue_series(*chain, piece) : piece;
    }
    const GraphTopology separator = build_widget(WidgetKind::separator());
    return chain ? glue_series(*chain, separator) : separator;
}

CompiledMachine assemble_computer(const CircuitDescription &circuit, const AssemblyOptions &options) {
    validate_circuit(circuit);
    if (options.start_offset < 1) throw Error("start offset x must be at least 1");

    CompiledMachine machine;
    machine.circuit = circuit;
    machine.start_offset = options.start_offset;
    const CircuitDescription expanded = expand_macros(circuit);
    machine.filter_count = options.filter_count.value_or(default_filter_count(expanded.gates.size()));
    if (machine.filter_count < 0) throw Error("filter count must be non-negative");

    const std::string zero = basis_label(0, circuit.qubit_count);
    const std::vector<std::pair<std::string, std::string>> ports{{"in", zero + "_in"}, {"out", zero + "_out"}};
    const GraphTopology conditioner = input_conditioner(machine.filter_count).rename_terminals(ports);
    const TerminalPair join{zero + "_out", zero + "_in"};
    machine.open_graph = glue(conditioner, compile_circuit(circuit), {&join, 1});
    machine.start_terminal = zero + "_in";

    const std::size_t wires = std::size_t{1} << circuit.qubit_count;
    for (std::size_t w = 0; w < wires; ++w) {
        auto label = basis_label(w, circuit.qubit_count);
        machine.wire_labels[label] = {label + "_in", label + "_out"};
    }

    double ell = machine.filter_count * widget_delay(WidgetKind::filter()) + widget_delay(WidgetKind::separator());
    for (const auto &gate : expanded.gates) ell += gate_delay(gate);
    machine.total_effective_length = ell;
    machine.evolution_time = evolution_time(options.start_offset, ell);

    const double required = 2.0 * (options.start_offset + ell);
    machine.truncation_length = options.truncation.value_or(static_cast<std::size_t>(std::ceil(required)));
    if (static_cast<double>(machine.truncation_length) < required) {
        if (!options.allow_unsound) {
            throw UnsoundTruncation("unsound truncation: lead length " + std::to_string(machine.truncation_length) +
                                    " is below 2(x + l) = " + std::to_string(required));
        }
        machine.unsound = true;
    }
    if (machine.truncation_length < static_cast<std::size_t>(options.start_offset)) {
        throw UnsoundTruncation("lead length " + std::to_string(machine.truncation_length) +
                                " does not reach the start offset " + std::to_string(options.start_offset));
    }
    machine.truncated = truncate_leads(machine.open_graph, machine.truncation_length);
    return machine;
}

}  // namespace qwalk
