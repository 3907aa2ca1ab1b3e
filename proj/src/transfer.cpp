#include "qwalk/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qwalk/error.hpp"

namespace qwalk {

Decoration filter_decoration() {
    GraphTopology graph(4, {{0, 1}, {1, 2}, {1, 3}}, {{"drain", 0, TerminalKind::drain}});
    return {std::move(graph), 0};
}

Complex decoration_ratio(const Decoration &decoration, Momentum k) {
    if (decoration.empty()) return 0.0;
    const auto n = static_cast<Eigen::Index>(decoration.graph.vertex_count());
    if (decoration.attachment >= decoration.graph.vertex_count()) {
        throw GraphError("decoration attachment vertex out of range");
    }
    ComplexMatrix m = decoration.graph.adjacency_matrix().cast<Complex>();
    m.diagonal().array() -= k.energy();
    const Complex lead_factor = std::exp(imag_unit * k.value());
    for (const auto &t : decoration.graph.terminals()) m(t.vertex, t.vertex) += lead_factor;

    ComplexVector rhs = ComplexVector::Zero(n);
    rhs(decoration.attachment) = -1.0;

    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    double rcond = lu.rcond();
    double condition = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (condition <= condition_threshold) return lu.solve(rhs)(decoration.attachment);

    // Trapped modes that never touch the attachment vertex (the filter claw at
    // k = -pi/2) make the system singular without affecting y.
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double cutoff = svd.singularValues()(0) / condition_threshold;
    svd.setThreshold(cutoff / svd.singularValues()(0));
    for (Eigen::Index i = 0; i < n; ++i) {
        if (svd.singularValues()(i) <= cutoff && std::abs(svd.matrixV()(decoration.attachment, i)) > 1e-8) {
            throw IllConditionedError(k.value(), condition);
        }
    }
    ComplexVector psi = svd.solve(rhs);
    if ((m * psi - rhs).cwiseAbs().maxCoeff() > 1e-8) throw IllConditionedError(k.value(), condition);
    return psi(decoration.attachment);
}

std::array<double, 2> TransferMatrix::eigenvalue_magnitudes() const {
    // lambda^2 - tr(M) lambda + det(M) = 0
    Complex tr = entries.trace();
    Complex root = std::sqrt(tr * tr - 4.0 * determinant());
    double first = std::abs(0.5 * (tr + root));
    double second = std::abs(0.5 * (tr - root));
    return {std::max(first, second), std::min(first, second)};
}

TransferMatrix transfer_step(Complex y, Momentum k) {
    TransferMatrix m;
    m.k = k.value();
    m.y = y;
    m.entries << k.energy() - y, -1.0, 1.0, 0.0;
    return m;
}

ChainResult chain_transmission(Complex y, int m_d, Momentum k) {
    if (m_d < 1) throw Error("chain length must be at least 1");
    TransferMatrix step = transfer_step(y, k);
    Eigen::Matrix2cd power = Eigen::Matrix2cd::Identity();
    for (int i = 0; i < m_d; ++i) power = power * step.entries;

    ChainResult result;
    result.m_d = m_d;
    result.a = power(0, 0);
    result.b = power(0, 1);
    result.c = power(1, 0);
    result.d = power(1, 1);
    const Complex e = std::exp(imag_unit * k.value());
    result.transmission = 2.0 * imag_unit * std::sin(k.value()) * std::pow(e, -m_d) /
                          (-result.a / e - result.b + result.c + result.d * e);
    result.eigenvalue_magnitudes = step.eigenvalue_magnitudes();
    return result;
}

ChainResult chain_transmission(const Decoration &decoration, int m_d, Momentum k) {
    return chain_transmission(decoration_ratio(decoration, k), m_d, k);
}

GraphTopology decorated_chain(const Decoration &decoration, int m_d) {
    if (m_d < 1) throw Error("chain length must be at least 1");
    const auto path_vertices = static_cast<std::size_t>(m_d) + 2;
    const std::size_t dec_size = decoration.graph.vertex_count();
    std::vector<Edge> edges;
    std::vector<Terminal> terminals{{"in", 0, TerminalKind::input}};
    for (VertexId v = 0; v + 1 < path_vertices; ++v) edges.push_back({v, v + 1});
    for (int i = 1; i <= m_d; ++i) {
        const auto offset = static_cast<VertexId>(path_vertices + (static_cast<std::size_t>(i) - 1) * dec_size);
        if (dec_size == 0) continue;
        edges.push_back({static_cast<VertexId>(i), offset + decoration.attachment});
        for (const auto &e : decoration.graph.edges()) edges.push_back({offset + e.u, offset + e.v});
        for (const auto &t : decoration.graph.terminals()) {
            terminals.push_back({t.name + "_" + std::to_string(i), offset + t.vertex, TerminalKind::drain});
        }
    }
    terminals.push_back({"out", static_cast<VertexId>(m_d + 1), TerminalKind::output});
    return GraphTopology(path_vertices + static_cast<std::size_t>(m_d) * dec_size, std::move(edges),
                         std::move(terminals));
}

}  // namespace qwalk
