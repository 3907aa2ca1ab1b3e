#include "qwalk/compose.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/error.hpp"

namespace qwalk {

ComplexMatrix ChannelBlock::scattering_matrix() const {
    const auto n = static_cast<Eigen::Index>(inputs.size());
    const auto m = static_cast<Eigen::Index>(outputs.size());
    ComplexMatrix s(n + m, n + m);
    s.topLeftCorner(n, n) = reflection;
    s.topRightCorner(n, m) = forward;
    s.bottomLeftCorner(m, n) = backward;
    s.bottomRightCorner(m, m) = back_reflection;
    return s;
}

RealVector ChannelBlock::loss() const {
    return RealVector::Ones(static_cast<Eigen::Index>(inputs.size() + outputs.size())) -
           scattering_matrix().rowwise().squaredNorm();
}

double ChannelBlock::unitarity_defect() const {
    ComplexMatrix s = scattering_matrix();
    return (s.adjoint() * s - ComplexMatrix::Identity(s.rows(), s.cols())).cwiseAbs().maxCoeff();
}

ChannelBlock extract_block(const GraphTopology &graph, Momentum k, const std::vector<std::string> &inputs,
                           const std::vector<std::string> &outputs, PhaseReference reference) {
    if (inputs.size() != outputs.size()) {
        throw GraphError("channel block needs as many outputs as inputs");
    }
    std::vector<std::string> channels = inputs;
    channels.insert(channels.end(), outputs.begin(), outputs.end());
    for (const auto &name : channels) {
        if (graph.terminal(name).kind == TerminalKind::drain) {
            throw GraphError("drain terminal '" + name + "' cannot be a channel");
        }
        if (std::count(channels.begin(), channels.end(), name) != 1) {
            throw GraphError("terminal '" + name + "' listed twice");
        }
    }
    for (const auto &t : graph.terminals()) {
        if (t.kind != TerminalKind::drain && std::find(channels.begin(), channels.end(), t.name) == channels.end()) {
            throw GraphError("terminal '" + t.name + "' is neither an input nor an output channel");
        }
    }

    SMatrix s = s_matrix(graph, k);
    s.entries *= std::exp(-imag_unit * (k.value() * reference.shift));
    auto block = [&](const std::vector<std::string> &rows, const std::vector<std::string> &cols) {
        ComplexMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c) {
                out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s(rows[r], cols[c]);
            }
        }
        return out;
    };
    ChannelBlock result;
    result.k = k.value();
    result.inputs = inputs;
    result.outputs = outputs;
    result.forward = block(inputs, outputs);
    result.reflection = block(inputs, inputs);
    result.backward = block(outputs, inputs);
    result.back_reflection = block(outputs, outputs);
    return result;
}

ChannelBlock extract_block(const GraphTopology &graph, Momentum k, PhaseReference reference) {
    auto by_label = [](std::vector<std::string> names) {
        std::stable_sort(names.begin(), names.end(),
                         [](const std::string &a, const std::string &b) { return channel_label(a) < channel_label(b); });
        return names;
    };
    return extract_block(graph, k, by_label(graph.terminal_names(TerminalKind::input)),
                         by_label(graph.terminal_names(TerminalKind::output)), reference);
}

double spectral_norm(const ComplexMatrix &m) {
    if (m.size() == 0) return 0.0;
    return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

double reflection_scale(const ChannelBlock &block) {
    return std::max(spectral_norm(block.reflection), spectral_norm(block.back_reflection));
}

ChannelBlock compose_blocks(const ChannelBlock &first, const ChannelBlock &second) {
    if (first.k != second.k) throw Error("cannot compose blocks at different momenta");
    if (first.channel_count() != second.channel_count()) {
        throw Error("cannot compose blocks with " + std::to_string(first.channel_count()) + " and " +
                    std::to_string(second.channel_count()) + " channels");
    }
    const auto n = static_cast<Eigen::Index>(first.channel_count());
    const ComplexMatrix identity = ComplexMatrix::Identity(n, n);

    const ComplexMatrix loop_forward = second.reflection * first.back_reflection;
    const double loop_norm = spectral_norm(loop_forward);
    if (loop_norm >= 1.0 - 1e-9) {
        throw NonConvergentComposition("multiple-reflection series diverges at k = " + std::to_string(first.k) +
                                       " (||R2 Rbar1|| = " + std::to_string(loop_norm) + ")");
    }
    const ComplexMatrix loop_backward = first.back_reflection * second.reflection;

    // X (1 - L)^{-1} Y is evaluated as X ((1 - L) \ Y).
    Eigen::PartialPivLU<ComplexMatrix> forward_lu(identity - loop_forward);
    Eigen::PartialPivLU<ComplexMatrix> backward_lu(identity - loop_backward);

    ChannelBlock result;
    result.k = first.k;
    result.inputs = first.inputs;
    result.outputs = second.outputs;
    result.forward = first.forward * forward_lu.solve(second.forward);
    result.reflection = first.reflection + first.forward * forward_lu.solve(second.reflection * first.backward);
    result.backward = second.backward * backward_lu.solve(first.backward);
    result.back_reflection =
        second.back_reflection + second.backward * backward_lu.solve(first.back_reflection * second.forward);
    return result;
}

}  // namespace qwalk
