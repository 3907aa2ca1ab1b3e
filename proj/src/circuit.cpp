#include "qwalk/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <utility>

#include "qwalk/error.hpp"
#include "qwalk/widgets.hpp"

namespace qwalk {

namespace {

std::string upper(std::string_view text) {
    std::string out(text);
    for (auto &c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

struct Token {
    std::string_view text;
    std::size_t column;
};

std::vector<Token> split(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

int parse_index(const Token &token, std::size_t line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(token.text.data(), token.text.data() + token.text.size(), value);
    if (ec != std::errc() || ptr != token.text.data() + token.text.size()) {
        throw ParseError("expected a qubit index, found '" + std::string(token.text) + "'", line, token.column);
    }
    return value;
}

GraphTopology renamed(const GraphTopology &graph, const std::vector<std::pair<std::string, std::string>> &renames) {
    return graph.rename_terminals(renames);
}

std::size_t qubit_bit(int qubit, int qubit_count) { return std::size_t{1} << (qubit_count - qubit); }

}  // namespace

CircuitDescription parse_circuit(std::string_view text, std::optional<int> qubit_count) {
    CircuitDescription circuit;
    int largest = 1;
    std::size_t line_number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_number;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto tokens = split(line);
        if (tokens.empty()) continue;

        std::string keyword = upper(tokens[0].text);
        std::size_t arity = keyword == "CNOT" ? 2 : 1;
        if (keyword != "CNOT" && keyword != "UB" && keyword != "UC" && keyword != "H") {
            throw ParseError("unknown gate '" + std::string(tokens[0].text) + "'", line_number, tokens[0].column);
        }
        if (tokens.size() != arity + 1) {
            std::size_t column = tokens.size() > arity + 1 ? tokens[arity + 1].column : line.size() + 1;
            throw ParseError(keyword + " takes " + std::to_string(arity) + " qubit index" + (arity > 1 ? "es" : ""),
                             line_number, column);
        }
        std::vector<int> args;
        for (std::size_t a = 1; a < tokens.size(); ++a) {
            int q = parse_index(tokens[a], line_number);
            if (q < 1) throw ParseError("qubit indices start at 1", line_number, tokens[a].column);
            largest = std::max(largest, q);
            args.push_back(q);
        }
        if (keyword == "CNOT") {
            circuit.gates.push_back(Gate::cnot(args[0], args[1]));
        } else if (keyword == "UB") {
            circuit.gates.push_back(Gate::ub(args[0]));
        } else if (keyword == "UC") {
            circuit.gates.push_back(Gate::uc(args[0]));
        } else {
            circuit.gates.push_back(Gate::hadamard(args[0]));
        }
        if (end == text.size()) break;
    }
    circuit.qubit_count = qubit_count.value_or(largest);
    validate_circuit(circuit);
    return circuit;
}

std::string format_circuit(const CircuitDescription &circuit) {
    std::ostringstream out;
    out << "# qubits: " << circuit.qubit_count << "\n";
    for (const auto &g : circuit.gates) {
        switch (g.type) {
            case GateType::cnot: out << "CNOT " << g.control << " " << g.target << "\n"; break;
            case GateType::ub: out << "UB " << g.target << "\n"; break;
            case GateType::uc: out << "UC " << g.target << "\n"; break;
            case GateType::hadamard: out << "H " << g.target << "\n"; break;
        }
    }
    return out.str();
}

void validate_circuit(const CircuitDescription &circuit) {
    const int n = circuit.qubit_count;
    if (n < 1) throw CircuitError("a circuit needs at least one qubit");
    for (std::size_t i = 0; i < circuit.gates.size(); ++i) {
        const auto &g = circuit.gates[i];
        auto check = [&](int q, const char *role) {
            if (q < 1 || q > n) {
                throw CircuitError("gate " + std::to_string(i + 1) + ": " + role + " qubit " + std::to_string(q) +
                                   " is outside [1, " + std::to_string(n) + "]");
            }
        };
        check(g.target, "target");
        if (g.type == GateType::cnot) {
            check(g.control, "control");
            if (g.control == g.target) {
                throw CircuitError("gate " + std::to_string(i + 1) + ": control and target are both qubit " +
                                   std::to_string(g.target));
            }
        }
    }
}

CircuitDescription expand_macros(const CircuitDescription &circuit) {
    CircuitDescription out{circuit.qubit_count, {}};
    for (const auto &g : circuit.gates) {
        if (g.type == GateType::hadamard) {
            for (auto t : {GateType::ub, GateType::ub, GateType::uc, GateType::ub, GateType::ub}) {
                out.gates.push_back({t, g.target, 0});
            }
        } else {
            out.gates.push_back(g);
        }
    }
    return out;
}

std::string basis_label(std::size_t wire, int qubit_count) {
    std::string label(static_cast<std::size_t>(qubit_count), '0');
    for (int q = 1; q <= qubit_count; ++q) {
        if (wire & qubit_bit(q, qubit_count)) label[static_cast<std::size_t>(q - 1)] = '1';
    }
    return label;
}

GraphTopology identity_layer(int qubit_count) {
    const std::size_t wires = std::size_t{1} << qubit_count;
    std::vector<Terminal> terminals;
    for (std::size_t w = 0; w < wires; ++w) {
        auto label = basis_label(w, qubit_count);
        terminals.push_back({label + "_in", static_cast<VertexId>(w), TerminalKind::input});
        terminals.push_back({label + "_out", static_cast<VertexId>(w), TerminalKind::output});
    }
    return GraphTopology(wires, {}, std::move(terminals));
}

GraphTopology gate_layer(const Gate &gate, int qubit_count) {
    validate_circuit({qubit_count, {gate}});
    const std::size_t wires = std::size_t{1} << qubit_count;
    auto in = [&](std::size_t w) { return basis_label(w, qubit_count) + "_in"; };
    auto out = [&](std::size_t w) { return basis_label(w, qubit_count) + "_out"; };

    switch (gate.type) {
        case GateType::hadamard: {
            GraphTopology layers = identity_layer(qubit_count);
            for (const auto &g : expand_macros({qubit_count, {gate}}).gates) {
                layers = glue_series(layers, gate_layer(g, qubit_count));
            }
            return layers;
        }
        case GateType::cnot: {
            // One edge per wire; wires with the control bit set swap their target bit.
            const std::size_t control = qubit_bit(gate.control, qubit_count);
            const std::size_t target = qubit_bit(gate.target, qubit_count);
            std::vector<Edge> edges;
            std::vector<Terminal> terminals;
            for (std::size_t w = 0; w < wires; ++w) {
                std::size_t destination = (w & control) ? (w ^ target) : w;
                edges.push_back({static_cast<VertexId>(w), static_cast<VertexId>(wires + destination)});
                terminals.push_back({in(w), static_cast<VertexId>(w), TerminalKind::input});
            }
            for (std::size_t w = 0; w < wires; ++w) {
                terminals.push_back({out(w), static_cast<VertexId>(wires + w), TerminalKind::output});
            }
            return GraphTopology(2 * wires, std::move(edges), std::move(terminals));
        }
        case GateType::ub: {
            const std::size_t bit = qubit_bit(gate.target, qubit_count);
            const GraphTopology phase = build_widget(WidgetKind::phase_shift());
            const GraphTopology padding = build_widget(WidgetKind::wire(phase_padding_length));
            GraphTopology layer;
            for (std::size_t w = 0; w < wires; ++w) {
                const GraphTopology &piece = (w & bit) ? phase : padding;
                layer = disjoint_union(layer, renamed(piece, {{"in", in(w)}, {"out", out(w)}}));
            }
            return layer;
        }
        case GateType::uc: {
            const std::size_t bit = qubit_bit(gate.target, qubit_count);
            const GraphTopology basis = build_widget(WidgetKind::basis_change());
            GraphTopology layer;
            for (std::size_t w = 0; w < wires; ++w) {
                if (w & bit) continue;
                const std::size_t partner = w | bit;
                layer = disjoint_union(layer, renamed(basis, {{"0_in", in(w)},
                                                              {"0_out", out(w)},
                                                              {"1_in", in(partner)},
                                                              {"1_out", out(partner)}}));
            }
            return layer;
        }
    }
    throw CircuitError("unknown gate type");
}

GraphTopology compile_circuit(const CircuitDescription &circuit) {
    validate_circuit(circuit);
    GraphTopology graph = identity_layer(circuit.qubit_count);
    for (const auto &gate : expand_macros(circuit).gates) {
        graph = glue_series(graph, gate_layer(gate, circuit.qubit_count));
    }
    return graph;
}

int widget_qubits(WidgetType type) {
    switch (type) {
        case WidgetType::cnot: return 2;
        case WidgetType::basis_change: return 1;
        default: return 0;
    }
}

GraphTopology widget_layer(WidgetKind kind, int qubit_count) {
    if (qubit_count == 0) {
        if (widget_qubits(kind.type) > 0) {
            throw CircuitError(std::string(widget_name(kind.type)) + " needs at least " +
                               std::to_string(widget_qubits(kind.type)) + " qubit(s)");
        }
        return build_widget(kind);
    }
    switch (kind.type) {
        case WidgetType::cnot:
            if (qubit_count != 2) throw CircuitError("the cnot widget acts on exactly 2 qubits");
            return build_widget(kind);
        case WidgetType::basis_change:
            return gate_layer(Gate::uc(qubit_count), qubit_count);
        case WidgetType::phase_shift:
            return gate_layer(Gate::ub(qubit_count), qubit_count);
        default: {
            const GraphTopology piece = build_widget(kind);
            GraphTopology layer;
            const std::size_t wires = std::size_t{1} << qubit_count;
            for (std::size_t w = 0; w < wires; ++w) {
                auto label = basis_label(w, qubit_count);
                layer = disjoint_union(layer, piece.rename_terminals(std::vector<std::pair<std::string, std::string>>{
                                                  {"in", label + "_in"}, {"out", label + "_out"}, {"drain", label + "_drain"}}));
            }
            return layer;
        }
    }
}

}  // namespace qwalk
