#include "qwalk/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include <nlohmann/json.hpp>

#include "qwalk/error.hpp"

namespace qwalk {

std::string_view to_string(TerminalKind kind) {
    switch (kind) {
        case TerminalKind::input:
            return "input";
        case TerminalKind::output:
            return "output";
        case TerminalKind::drain:
            return "drain";
    }
    return "unknown";
}

TerminalKind terminal_kind_from_string(std::string_view text) {
    if (text == "input") return TerminalKind::input;
    if (text == "output") return TerminalKind::output;
    if (text == "drain") return TerminalKind::drain;
    throw GraphError("unknown terminal kind '" + std::string(text) + "'");
}

GraphTopology::GraphTopology(std::size_t vertex_count, std::vector<Edge> edges, std::vector<Terminal> terminals)
    : vertex_count_(vertex_count), edges_(std::move(edges)), terminals_(std::move(terminals)) {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto &e = edges_[i];
        if (e.u == e.v) {
            throw GraphError("self-loop at vertex " + std::to_string(e.u) + " (edge " + std::to_string(i) + ")");
        }
        if (e.u >= vertex_count_ || e.v >= vertex_count_) {
            throw GraphError("edge " + std::to_string(i) + " references a vertex outside [0, " +
                             std::to_string(vertex_count_) + ")");
        }
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
        throw GraphError("duplicate edge [" + std::to_string(dup->u) + ", " + std::to_string(dup->v) + "]");
    }
    std::set<std::string_view> names;
    for (const auto &t : terminals_) {
        if (t.vertex >= vertex_count_) {
            throw GraphError("terminal '" + t.name + "' names missing vertex " + std::to_string(t.vertex));
        }
        if (!names.insert(t.name).second) {
            throw GraphError("duplicate terminal name '" + t.name + "'");
        }
    }
}

std::optional<std::size_t> GraphTopology::find_terminal(std::string_view name) const {
    for (std::size_t i = 0; i < terminals_.size(); ++i) {
        if (terminals_[i].name == name) return i;
    }
    return std::nullopt;
}

const Terminal &GraphTopology::terminal(std::string_view name) const {
    auto index = find_terminal(name);
    if (!index) throw GraphError("no terminal named '" + std::string(name) + "'");
    return terminals_[*index];
}

std::vector<std::string> GraphTopology::terminal_names(std::optional<TerminalKind> kind) const {
    std::vector<std::string> out;
    for (const auto &t : terminals_) {
        if (!kind || t.kind == *kind) out.push_back(t.name);
    }
    return out;
}

std::vector<std::vector<VertexId>> GraphTopology::adjacency() const {
    std::vector<std::vector<VertexId>> adj(vertex_count_);
    for (const auto &e : edges_) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

RealMatrix GraphTopology::adjacency_matrix() const {
    RealMatrix a = RealMatrix::Zero(vertex_count_, vertex_count_);
    for (const auto &e : edges_) {
        a(e.u, e.v) = 1.0;
        a(e.v, e.u) = 1.0;
    }
    return a;
}

std::vector<int> GraphTopology::degrees(bool count_leads) const {
    std::vector<int> deg(vertex_count_, 0);
    for (const auto &e : edges_) {
        ++deg[e.u];
        ++deg[e.v];
    }
    if (count_leads) {
        for (const auto &t : terminals_) ++deg[t.vertex];
    }
    return deg;
}

int GraphTopology::max_degree(bool count_leads) const {
    auto deg = degrees(count_leads);
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool GraphTopology::is_bipartite() const {
    auto adj = adjacency();
    std::vector<int> color(vertex_count_, -1);
    for (std::size_t start = 0; start < vertex_count_; ++start) {
        if (color[start] != -1) continue;
        color[start] = 0;
        std::queue<VertexId> queue;
        queue.push(static_cast<VertexId>(start));
        while (!queue.empty()) {
            auto v = queue.front();
            queue.pop();
            for (auto w : adj[v]) {
                if (color[w] == -1) {
                    color[w] = 1 - color[v];
                    queue.push(w);
                } else if (color[w] == color[v]) {
                    return false;
                }
            }
        }
    }
    return true;
}

GraphTopology GraphTopology::with_terminals(std::vector<Terminal> terminals) const {
    return GraphTopology(vertex_count_, edges_, std::move(terminals));
}

GraphTopology GraphTopology::rename_terminals(std::span<const std::pair<std::string, std::string>> renames) const {
    auto terminals = terminals_;
    for (auto &t : terminals) {
        for (const auto &[from, to] : renames) {
            if (t.name == from) {
                t.name = to;
                break;
            }
        }
    }
    return with_terminals(std::move(terminals));
}

GraphTopology path_graph(std::size_t edge_count) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edge_count; ++i) {
        edges.push_back({static_cast<VertexId>(i), static_cast<VertexId>(i + 1)});
    }
    return GraphTopology(edge_count + 1, std::move(edges),
                         {{"in", 0, TerminalKind::input}, {"out", static_cast<VertexId>(edge_count), TerminalKind::output}});
}

GraphTopology disjoint_union(const GraphTopology &first, const GraphTopology &second) {
    auto offset = static_cast<VertexId>(first.vertex_count());
    std::vector<Edge> edges(first.edges().begin(), first.edges().end());
    for (const auto &e : second.edges()) edges.push_back({e.u + offset, e.v + offset});
    std::vector<Terminal> terminals(first.terminals().begin(), first.terminals().end());
    for (const auto &t : second.terminals()) terminals.push_back({t.name, t.vertex + offset, t.kind});
    return GraphTopology(first.vertex_count() + second.vertex_count(), std::move(edges), std::move(terminals));
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace

GraphTopology glue(const GraphTopology &first, const GraphTopology &second, std::span<const TerminalPair> pairing) {
    const std::size_t n1 = first.vertex_count();
    const std::size_t total = n1 + second.vertex_count();
    std::set<std::string> used_first, used_second;
    DisjointSets sets(total);
    for (const auto &pair : pairing) {
        const auto &out = first.terminal(pair.output);
        const auto &in = second.terminal(pair.input);
        if (out.kind != TerminalKind::output) {
            throw GraphError("glue: '" + pair.output + "' is not an output terminal of the first graph");
        }
        if (in.kind != TerminalKind::input) {
            throw GraphError("glue: '" + pair.input + "' is not an input terminal of the second graph");
        }
        if (!used_first.insert(pair.output).second || !used_second.insert(pair.input).second) {
            throw GraphError("glue: terminal used more than once ('" + pair.output + "' / '" + pair.input + "')");
        }
        sets.unite(out.vertex, n1 + in.vertex);
    }

    // Representatives are the smallest member, so first's vertices keep their ids.
    std::vector<VertexId> relabel(total);
    std::vector<std::ptrdiff_t> id_of_root(total, -1);
    VertexId next = 0;
    for (std::size_t v = 0; v < total; ++v) {
        auto root = sets.find(v);
        if (id_of_root[root] < 0) id_of_root[root] = next++;
        relabel[v] = static_cast<VertexId>(id_of_root[root]);
    }

    std::vector<Edge> edges;
    auto add_edge = [&](VertexId a, VertexId b) {
        if (a == b) {
            throw GraphError("glue: merging terminals creates a self-loop at vertex " + std::to_string(a));
        }
        edges.push_back({std::min(a, b), std::max(a, b)});
    };
    for (const auto &e : first.edges()) add_edge(relabel[e.u], relabel[e.v]);
    for (const auto &e : second.edges()) add_edge(relabel[n1 + e.u], relabel[n1 + e.v]);
    std::sort(edges.begin(), edges.end());
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
        throw GraphError("glue: merging terminals creates a duplicate edge [" + std::to_string(dup->u) + ", " +
                         std::to_string(dup->v) + "]");
    }

    std::vector<Terminal> survivors_first, survivors_second;
    for (const auto &t : first.terminals()) {
        if (!used_first.count(t.name)) survivors_first.push_back({t.name, relabel[t.vertex], t.kind});
    }
    for (const auto &t : second.terminals()) {
        if (!used_second.count(t.name)) survivors_second.push_back({t.name, relabel[n1 + t.vertex], t.kind});
    }
    std::set<std::string> names_first, names_second;
    for (const auto &t : survivors_first) names_first.insert(t.name);
    for (const auto &t : survivors_second) names_second.insert(t.name);
    std::vector<Terminal> terminals;
    for (auto t : survivors_first) {
        if (names_second.count(t.name)) t.name = "1." + t.name;
        terminals.push_back(std::move(t));
    }
    for (auto t : survivors_second) {
        if (names_first.count(t.name)) t.name = "2." + t.name;
        terminals.push_back(std::move(t));
    }
    return GraphTopology(next, std::move(edges), std::move(terminals));
}

std::string channel_label(std::string_view name) {
    for (std::string_view suffix : {"_in", "_out"}) {
        if (name.size() >= suffix.size() && name.substr(name.size() - suffix.size()) == suffix) {
            return std::string(name.substr(0, name.size() - suffix.size()));
        }
    }
    if (name == "in" || name == "out") return "";
    return std::string(name);
}

GraphTopology glue_series(const GraphTopology &first, const GraphTopology &second) {
    std::vector<TerminalPair> pairing;
    for (const auto &out : first.terminals()) {
        if (out.kind != TerminalKind::output) continue;
        auto label = channel_label(out.name);
        const Terminal *match = nullptr;
        for (const auto &in : second.terminals()) {
            if (in.kind == TerminalKind::input && channel_label(in.name) == label) {
                match = &in;
                break;
            }
        }
        if (!match) throw GraphError("glue_series: no input matching output '" + out.name + "'");
        pairing.push_back({out.name, match->name});
    }
    return glue(first, second, pairing);
}

std::string serialize_graph(const GraphTopology &graph) {
    nlohmann::ordered_json doc;
    doc["vertices"] = graph.vertex_count();
    auto edges = nlohmann::ordered_json::array();
    for (const auto &e : graph.edges()) edges.push_back({e.u, e.v});
    doc["edges"] = std::move(edges);
    auto terminals = nlohmann::ordered_json::array();
    for (const auto &t : graph.terminals()) {
        terminals.push_back({{"name", t.name}, {"vertex", t.vertex}, {"kind", std::string(to_string(t.kind))}});
    }
    doc["terminals"] = std::move(terminals);
    return doc.dump(2) + "\n";
}

namespace {

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

}  // namespace

GraphTopology parse_graph(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        auto [line, column] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("malformed graph document: " + std::string(e.what()), line, column);
    }
    auto require = [&](const char *key) -> const nlohmann::json & {
        if (!doc.is_object() || !doc.contains(key)) {
            throw ParseError(std::string("graph document lacks field '") + key + "'", 1, 1);
        }
        return doc.at(key);
    };
    try {
        const auto &vertices = require("vertices");
        if (!vertices.is_number_unsigned()) throw ParseError("'vertices' must be a non-negative integer", 1, 1);
        std::vector<Edge> edges;
        for (const auto &item : require("edges")) {
            if (!item.is_array() || item.size() != 2) throw ParseError("each edge must be a [u, v] pair", 1, 1);
            auto u = item[0].get<VertexId>();
            auto v = item[1].get<VertexId>();
            if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
            if (u > v) {
                throw GraphError("edge [" + std::to_string(u) + ", " + std::to_string(v) + "] must satisfy u < v");
            }
            edges.push_back({u, v});
        }
        std::vector<Terminal> terminals;
        for (const auto &item : require("terminals")) {
            terminals.push_back({item.at("name").get<std::string>(), item.at("vertex").get<VertexId>(),
                                 terminal_kind_from_string(item.at("kind").get<std::string>())});
        }
        return GraphTopology(vertices.get<std::size_t>(), std::move(edges), std::move(terminals));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("invalid graph document: ") + e.what(), 1, 1);
    }
}

}  // namespace qwalk
