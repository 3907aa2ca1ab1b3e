#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/widgets.hpp"

namespace qwalk {

enum class GateType { cnot, ub, uc, hadamard };

/// Qubits are numbered from 1; qubit 1 is the leftmost character of a basis string.
struct Gate {
    GateType type;
    int target = 1;
    int control = 0;  ///< CNOT only

    static Gate cnot(int control, int target) { return {GateType::cnot, target, control}; }
    static Gate ub(int target) { return {GateType::ub, target, 0}; }
    static Gate uc(int target) { return {GateType::uc, target, 0}; }
    static Gate hadamard(int target) { return {GateType::hadamard, target, 0}; }

    bool operator==(const Gate &) const = default;
};

struct CircuitDescription {
    int qubit_count = 1;
    std::vector<Gate> gates;
};

/// One gate per line: `CNOT c t`, `UB q`, `UC q` or `H q`; `#` starts a comment.
/// Keywords are case-insensitive. Without an explicit qubit count the largest
/// index used is taken (at least 1).
CircuitDescription parse_circuit(std::string_view text, std::optional<int> qubit_count = std::nullopt);
std::string format_circuit(const CircuitDescription &circuit);

/// Throws CircuitError on out-of-range qubits or control == target.
void validate_circuit(const CircuitDescription &circuit);

/// Replaces every H(q) by UB, UB, UC, UB, UB on q.
CircuitDescription expand_macros(const CircuitDescription &circuit);

/// n-character bit string of a wire index; qubit 1 is the most significant bit.
std::string basis_label(std::size_t wire, int qubit_count);

/// Edges the phase-shift widget's bit-0 partner wire is padded with, matching
/// the delay of the phase-shift widget at k = -pi/4.
inline constexpr int phase_padding_length = 3;

/// 2^n bare wires: a single vertex per wire carrying both "<s>_in" and "<s>_out".
GraphTopology identity_layer(int qubit_count);

/// One layer acting on all 2^n wires, terminals "<s>_in" / "<s>_out".
/// A Hadamard becomes its five primitive layers glued in series.
GraphTopology gate_layer(const Gate &gate, int qubit_count);

/// Qubits a widget needs to act on its own channels: 2 for cnot, 1 for
/// basis_change, 0 for the single-channel widgets.
int widget_qubits(WidgetType type);

/// The widget as a layer on 2^n wires with terminals "<s>_in" / "<s>_out":
/// basis_change and phase_shift act on qubit n as in gate_layer, cnot needs
/// n = 2, and wire, filter and separator are copied onto every wire (drains
/// become "<s>_drain"). With n = 0 the bare widget is returned.
GraphTopology widget_layer(WidgetKind kind, int qubit_count);

/// Glues the layers of the macro-expanded circuit in order.
GraphTopology compile_circuit(const CircuitDescription &circuit);

}  // namespace qwalk
