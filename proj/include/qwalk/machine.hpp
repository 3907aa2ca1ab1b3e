#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qwalk/circuit.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/widgets.hpp"

namespace qwalk {

/// A lead cut to a finite path. vertices[x - 1] is the vertex at distance x
/// from the terminal vertex (x = 0).
struct LeadPath {
    std::string terminal;
    TerminalKind kind = TerminalKind::input;
    VertexId terminal_vertex = 0;
    std::vector<VertexId> vertices;

    std::size_t length() const noexcept { return vertices.size(); }
};

/// Finite graph: the original vertices first, then every lead path in
/// terminal order. The graph itself carries no terminals.
struct TruncatedGraph {
    GraphTopology graph;
    std::size_t core_vertex_count = 0;
    std::vector<LeadPath> leads;

    const LeadPath &lead(std::string_view terminal) const;
    /// Vertex at distance x along the lead; x = 0 gives the terminal vertex.
    VertexId vertex_at(std::string_view terminal, std::size_t x) const;
};

TruncatedGraph truncate_leads(const GraphTopology &graph, std::size_t length);

struct WirePorts {
    std::string input;
    std::string output;
};

struct AssemblyOptions {
    int start_offset = 400;
    std::optional<int> filter_count;        ///< default_filter_count() when unset
    std::optional<std::size_t> truncation;  ///< ceil(2(x + l)) when unset
    bool allow_unsound = false;             ///< accept truncation below 2(x + l)
};

struct CompiledMachine {
    CircuitDescription circuit;
    /// Filters, separator and circuit with leads still semi-infinite.
    GraphTopology open_graph;
    TruncatedGraph truncated;
    std::map<std::string, WirePorts> wire_labels;
    std::string start_terminal;
    double total_effective_length = 0;
    int start_offset = 0;
    double evolution_time = 0;
    int filter_count = 0;
    std::size_t truncation_length = 0;
    bool unsound = false;

    const GraphTopology &graph() const noexcept { return truncated.graph; }
};

/// 2 ceil(log2(m + 2)) for m gates after macro expansion.
int default_filter_count(std::size_t gate_count);

/// pi * floor((x + l) / (sqrt(2) pi)): the arrival time at speed sqrt 2, rounded
/// down to a multiple of pi so that e^{2it} = e^{-2it}.
double evolution_time(double start_offset, double effective_length);

/// Input-to-output delay of a catalog widget at k = -pi/4, in edges, measured
/// between its terminals.
double widget_delay(WidgetKind kind);

/// Delay every wire picks up in one layer of the gate.
double gate_delay(const Gate &gate);

/// m_d filters and a separator in series, terminals "in", "out", "drain_1".."drain_m".
GraphTopology input_conditioner(int filter_count);

CompiledMachine assemble_computer(const CircuitDescription &circuit, const AssemblyOptions &options = {});

}  // namespace qwalk
