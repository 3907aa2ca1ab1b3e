#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/numeric.hpp"

namespace qwalk {

using VertexId = std::uint32_t;

/// Undirected edge, always stored with u < v.
struct Edge {
    VertexId u;
    VertexId v;
    auto operator<=>(const Edge &) const = default;
};

enum class TerminalKind { input, output, drain };

std::string_view to_string(TerminalKind kind);
TerminalKind terminal_kind_from_string(std::string_view text);

/// A vertex where a semi-infinite line is attached (x = 0 on that line).
struct Terminal {
    std::string name;
    VertexId vertex;
    TerminalKind kind;
    bool operator==(const Terminal &) const = default;
};

/// Simple undirected graph with 0/1 adjacency and named lead attachment points.
///
/// Construction validates the invariants: no self-loops, no duplicate edges,
/// every terminal names an existing vertex, terminal names are unique. Several
/// terminals may share a vertex (several leads on one vertex). Edges are kept
/// normalized and sorted so equal graphs compare equal.
class GraphTopology {
   public:
    GraphTopology() = default;
    GraphTopology(std::size_t vertex_count, std::vector<Edge> edges, std::vector<Terminal> terminals = {});

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Terminal> terminals() const noexcept { return terminals_; }

    const Terminal &terminal(std::string_view name) const;
    std::optional<std::size_t> find_terminal(std::string_view name) const;
    std::vector<std::string> terminal_names(std::optional<TerminalKind> kind = std::nullopt) const;

    std::vector<std::vector<VertexId>> adjacency() const;
    RealMatrix adjacency_matrix() const;

    /// Vertex degrees; with count_leads each attached lead adds one.
    std::vector<int> degrees(bool count_leads = true) const;
    int max_degree(bool count_leads = true) const;
    bool is_bipartite() const;

    /// Same vertices and edges with a replacement terminal list.
    GraphTopology with_terminals(std::vector<Terminal> terminals) const;
    /// Copy with terminals renamed; names not in the map are kept.
    GraphTopology rename_terminals(std::span<const std::pair<std::string, std::string>> renames) const;

    bool operator==(const GraphTopology &) const = default;

   private:
    std::size_t vertex_count_ = 0;
    std::vector<Edge> edges_;
    std::vector<Terminal> terminals_;
};

/// Path graph with `edge_count` edges; terminals "in" at vertex 0 and "out" at the far end.
GraphTopology path_graph(std::size_t edge_count);

/// Vertices of `second` are shifted past those of `first`; terminal names
/// must not collide.
GraphTopology disjoint_union(const GraphTopology &first, const GraphTopology &second);

struct TerminalPair {
    std::string output;  ///< output terminal of the first graph
    std::string input;   ///< input terminal of the second graph
};

/// Joins two graphs by identifying each paired output vertex of `first` with
/// the paired input vertex of `second`. Paired terminals become interior.
/// Surviving terminals keep their names; on a clash they are prefixed with
/// "1." (from `first`) and "2." (from `second`).
GraphTopology glue(const GraphTopology &first, const GraphTopology &second, std::span<const TerminalPair> pairing);

/// Channel label of a terminal name: "0_in" -> "0", "in" -> "".
std::string channel_label(std::string_view terminal_name);

/// glue() pairing every output of `first` with the input of `second` that has
/// the same channel label ("out" with "in", "0_out" with "0_in", ...).
GraphTopology glue_series(const GraphTopology &first, const GraphTopology &second);

/// JSON document with `vertices`, `edges` ([u, v] with u < v) and `terminals`.
std::string serialize_graph(const GraphTopology &graph);
/// Inverse of serialize_graph. Syntax errors raise ParseError with a position;
/// structural errors (self-loop, duplicate edge, ...) raise GraphError.
GraphTopology parse_graph(std::string_view text);

}  // namespace qwalk
