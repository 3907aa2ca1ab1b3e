#include "qwalk/widgets.hpp"

#include <array>
#include <charconv>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

using TK = TerminalKind;

GraphTopology cnot_widget() {
    // Inputs 0..3 and outputs 4..7 in basis order 00, 01, 10, 11.
    constexpr std::array<int, 4> target{0, 1, 3, 2};
    const std::array<const char *, 4> labels{"00", "01", "10", "11"};
    std::vector<Edge> edges;
    std::vector<Terminal> terminals;
    for (VertexId i = 0; i < 4; ++i) {
        edges.push_back({i, static_cast<VertexId>(4 + target[i])});
        terminals.push_back({std::string(labels[i]) + "_in", i, TK::input});
    }
    for (VertexId i = 0; i < 4; ++i) terminals.push_back({std::string(labels[i]) + "_out", 4 + i, TK::output});
    return GraphTopology(8, std::move(edges), std::move(terminals));
}

}  // namespace

GraphTopology build_widget(WidgetKind kind) {
    switch (kind.type) {
        case WidgetType::wire:
            if (kind.wire_length < 1) throw GraphError("wire length must be positive");
            return path_graph(static_cast<std::size_t>(kind.wire_length));
        case WidgetType::cnot:
            return cnot_widget();
        case WidgetType::phase_shift:
            return GraphTopology(7, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5}, {5, 6}, {3, 6}},
                                 {{"in", 0, TK::input}, {"out", 2, TK::output}});
        case WidgetType::basis_change:
            return GraphTopology(10, {{0, 1}, {1, 2}, {2, 3}, {4, 5}, {5, 6}, {6, 7}, {1, 8}, {8, 5}, {2, 9}, {9, 6}},
                                 {{"0_in", 0, TK::input},
                                  {"1_in", 4, TK::input},
                                  {"0_out", 3, TK::output},
                                  {"1_out", 7, TK::output}});
        case WidgetType::filter:
            return GraphTopology(7, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5}, {4, 6}},
                                 {{"in", 0, TK::input}, {"out", 2, TK::output}, {"drain", 3, TK::drain}});
        case WidgetType::separator:
            return GraphTopology(7, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 5}, {3, 6}, {4, 6}},
                                 {{"in", 0, TK::input}, {"out", 2, TK::output}});
    }
    throw GraphError("unknown widget type");
}

int core_reference_inset(WidgetType type) {
    switch (type) {
        case WidgetType::wire:
        case WidgetType::cnot:
            return 0;
        default:
            return 1;
    }
}

std::string_view widget_name(WidgetType type) {
    switch (type) {
        case WidgetType::wire:
            return "wire";
        case WidgetType::cnot:
            return "cnot";
        case WidgetType::phase_shift:
            return "phase";
        case WidgetType::basis_change:
            return "basis";
        case WidgetType::filter:
            return "filter";
        case WidgetType::separator:
            return "separator";
    }
    return "unknown";
}

std::optional<WidgetType> widget_from_name(std::string_view name) {
    for (auto type : {WidgetType::wire, WidgetType::cnot, WidgetType::phase_shift, WidgetType::basis_change,
                      WidgetType::filter, WidgetType::separator}) {
        if (widget_name(type) == name) return type;
    }
    return std::nullopt;
}

std::optional<WidgetKind> parse_widget_kind(std::string_view text) {
    auto colon = text.find(':');
    auto type = widget_from_name(text.substr(0, colon));
    if (!type) return std::nullopt;
    if (colon == std::string_view::npos) return WidgetKind{*type, 1};
    if (*type != WidgetType::wire) return std::nullopt;
    int length = 0;
    auto digits = text.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), length);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || length < 1) return std::nullopt;
    return WidgetKind::wire(length);
}

}  // namespace qwalk
