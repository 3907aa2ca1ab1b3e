#pragma once

#include <optional>
#include <string_view>

#include "qwalk/graph.hpp"

namespace qwalk {

enum class WidgetType { wire, cnot, phase_shift, basis_change, filter, separator };

struct WidgetKind {
    WidgetType type;
    int wire_length = 1;  ///< only meaningful for WidgetType::wire

    static WidgetKind wire(int length) { return {WidgetType::wire, length}; }
    static WidgetKind cnot() { return {WidgetType::cnot}; }
    static WidgetKind phase_shift() { return {WidgetType::phase_shift}; }
    static WidgetKind basis_change() { return {WidgetType::basis_change}; }
    static WidgetKind filter() { return {WidgetType::filter}; }
    static WidgetKind separator() { return {WidgetType::separator}; }
};

/// Fixed catalog topology with named terminals and deterministic numbering.
///
///  - wire(L):       path in - ... - out with L edges.
///  - cnot:          00,01,10,11 rails of one edge each; 10_in->11_out, 11_in->10_out.
///  - phase_shift:   in(0) - c(1) - out(2); c - d(3); 4-cycle d - e(4) - f(5) - g(6) - d.
///  - basis_change:  rails 0_in(0)-a1(1)-a2(2)-0_out(3) and 1_in(4)-b1(5)-b2(6)-1_out(7),
///                   rungs a1 - m1(8) - b1 and a2 - m2(9) - b2.
///  - filter:        in(0) - v0(1) - out(2); v0 - v1(3) with a drain lead on v1;
///                   claw v1 - w1(4), w1 - w2(5), w1 - w3(6).
///  - separator:     in(0) - v0(1) - out(2); v0 - v1(3) - v2(4) - v3(5); u(6) joined to v1, v2.
GraphTopology build_widget(WidgetKind kind);

/// Number of edges between each terminal and the vertex at which the closed-form
/// coefficients of the catalog widget measure their phase. Terminal-referenced
/// coefficients differ from those by e^{ik * inset} per terminal.
int core_reference_inset(WidgetType type);

std::string_view widget_name(WidgetType type);
std::optional<WidgetType> widget_from_name(std::string_view name);

/// "phase", "basis", ..., or "wire:L" for a wire of L edges ("wire" alone is L = 1).
std::optional<WidgetKind> parse_widget_kind(std::string_view text);

}  // namespace qwalk
