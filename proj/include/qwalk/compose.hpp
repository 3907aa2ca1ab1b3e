#pragma once

#include <string>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/numeric.hpp"
#include "qwalk/scattering.hpp"

namespace qwalk {

/// A widget seen as a scatterer between an ordered list of input channels and
/// an ordered list of output channels, in row-vector convention:
///
///   forward[j][j']           = S(inputs[j],  outputs[j'])
///   reflection[j][j']        = S(inputs[j],  inputs[j'])
///   backward[j][j']          = S(outputs[j], inputs[j'])
///   back_reflection[j][j']   = S(outputs[j], outputs[j'])
///
/// Drain terminals are not channels; what they absorb shows up as loss.
struct ChannelBlock {
    double k = 0;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    ComplexMatrix forward;
    ComplexMatrix reflection;
    ComplexMatrix backward;
    ComplexMatrix back_reflection;

    std::size_t channel_count() const noexcept { return inputs.size(); }

    /// [[R, T], [Tbar, Rbar]] over (inputs, outputs).
    ComplexMatrix scattering_matrix() const;
    /// 1 - (row norm)^2 of the reassembled S-matrix for every channel, inputs first.
    RealVector loss() const;
    double unitarity_defect() const;
};

ChannelBlock extract_block(const GraphTopology &graph, Momentum k, const std::vector<std::string> &inputs,
                           const std::vector<std::string> &outputs, PhaseReference reference = {});

/// Inputs and outputs ordered by channel label so that "0_in" pairs with "0_out".
ChannelBlock extract_block(const GraphTopology &graph, Momentum k, PhaseReference reference = {});

/// Places b1 before b2 and sums all multiple reflections between them.
/// Throws NonConvergentComposition when ||R2 Rbar1|| >= 1 - 1e-9.
ChannelBlock compose_blocks(const ChannelBlock &first, const ChannelBlock &second);

/// Largest singular value.
double spectral_norm(const ComplexMatrix &m);

/// max(||R||, ||Rbar||)
double reflection_scale(const ChannelBlock &block);

}  // namespace qwalk
