#pragma once

#include <array>

#include "qwalk/graph.hpp"
#include "qwalk/numeric.hpp"
#include "qwalk/scattering.hpp"

namespace qwalk {

/// Subgraph hung off a single wire vertex. Its terminals are drain leads
/// carrying outgoing waves only.
struct Decoration {
    GraphTopology graph;
    VertexId attachment = 0;

    bool empty() const noexcept { return graph.vertex_count() == 0; }
};

/// What the filter widget hangs below its wire vertex: v1 (drain lead, attachment)
/// with the claw v1 - w1, w1 - w2, w1 - w3.
Decoration filter_decoration();

/// y(k) = psi(attachment) / psi(wire vertex) for a scattering state of energy 2 cos k.
Complex decoration_ratio(const Decoration &decoration, Momentum k);

/// Maps (psi_n, psi_{n-1}) to (psi_{n+1}, psi_n) across one decorated vertex.
struct TransferMatrix {
    Eigen::Matrix2cd entries;
    double k = 0;
    Complex y;

    Complex determinant() const { return entries.determinant(); }
    /// Magnitudes of the two eigenvalues, largest first.
    std::array<double, 2> eigenvalue_magnitudes() const;
};

TransferMatrix transfer_step(Complex y, Momentum k);

struct ChainResult {
    int m_d = 0;
    Complex a, b, c, d;  ///< entries of M^{m_d}
    Complex transmission;
    std::array<double, 2> eigenvalue_magnitudes{};
};

/// Transmission through m_d identical decorated vertices spaced one edge apart,
/// T = 2i e^{-ik m_d} sin k / (-a e^{-ik} - b + c + d e^{ik}).
///
/// The phase is referenced so that a direct solve of decorated_chain(m_d)
/// equals this value times e^{ik(m_d + 1)}.
ChainResult chain_transmission(Complex y, int m_d, Momentum k);
ChainResult chain_transmission(const Decoration &decoration, int m_d, Momentum k);

/// Path 0 - 1 - ... - (m_d + 1) with a copy of the decoration on vertices
/// 1..m_d; terminals "in" at 0, "out" at m_d + 1 and drains "<name>_<i>".
GraphTopology decorated_chain(const Decoration &decoration, int m_d);

}  // namespace qwalk
