#include "qwalk/bound_states.hpp"

#include <algorithm>
#include <cmath>

namespace qwalk {

namespace {

struct BoundaryCondition {
    RealMatrix adjacency;
    RealVector lead_count;

    explicit BoundaryCondition(const GraphTopology &graph)
        : adjacency(graph.adjacency_matrix()), lead_count(RealVector::Zero(static_cast<Eigen::Index>(graph.vertex_count()))) {
        for (const auto &t : graph.terminals()) lead_count(t.vertex) += 1.0;
    }

    /// A + zL - (z + 1/z) with z = sign * e^{-kappa}.
    RealMatrix matrix(double kappa, int sign) const {
        const double z = sign * std::exp(-kappa);
        RealMatrix q = adjacency;
        q.diagonal() += z * lead_count;
        q.diagonal().array() -= z + 1.0 / z;
        return q;
    }

    RealVector eigenvalues(double kappa, int sign) const {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(matrix(kappa, sign), Eigen::EigenvaluesOnly);
        return solver.eigenvalues();
    }
};

struct Crossing {
    double kappa;
    Eigen::Index index;
};

}  // namespace

double bound_state_condition(const GraphTopology &graph, double kappa, int sign) {
    if (graph.vertex_count() == 0) return std::numeric_limits<double>::infinity();
    return BoundaryCondition(graph).eigenvalues(kappa, sign).cwiseAbs().minCoeff();
}

std::vector<BoundState> find_bound_states(const GraphTopology &graph, const BoundStateSearch &search) {
    std::vector<BoundState> states;
    if (graph.vertex_count() == 0) return states;
    BoundaryCondition condition(graph);
    const double degree = std::max(2, graph.max_degree(true));
    const double kappa_max = std::acosh(degree / 2.0) + search.margin;
    const auto steps = static_cast<long>(std::ceil((kappa_max - search.kappa_min) / search.grid_step));

    for (int sign : {+1, -1}) {
        // The determinant is the product of these eigenvalues; tracking each
        // sorted eigenvalue also catches roots of even multiplicity.
        std::vector<Crossing> crossings;
        RealVector previous = condition.eigenvalues(search.kappa_min, sign);
        double previous_kappa = search.kappa_min;
        for (long m = 1; m <= steps; ++m) {
            double kappa = std::min(kappa_max, search.kappa_min + m * search.grid_step);
            RealVector current = condition.eigenvalues(kappa, sign);
            for (Eigen::Index i = 0; i < current.size(); ++i) {
                if (previous(i) == 0.0 || std::signbit(previous(i)) == std::signbit(current(i))) continue;
                double a = previous_kappa, b = kappa;
                bool a_negative = std::signbit(previous(i));
                while (b - a > search.tolerance) {
                    double mid = 0.5 * (a + b);
                    double value = condition.eigenvalues(mid, sign)(i);
                    if (value == 0.0) {
                        a = b = mid;
                        break;
                    }
                    if (std::signbit(value) == a_negative) {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                crossings.push_back({0.5 * (a + b), i});
            }
            previous = std::move(current);
            previous_kappa = kappa;
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing &x, const Crossing &y) { return x.kappa < y.kappa; });

        for (std::size_t first = 0; first < crossings.size();) {
            std::size_t last = first + 1;
            while (last < crossings.size() && crossings[last].kappa - crossings[first].kappa < 1e-9) ++last;
            const auto multiplicity = static_cast<Eigen::Index>(last - first);
            double kappa = 0;
            for (std::size_t c = first; c < last; ++c) kappa += crossings[c].kappa;
            kappa /= static_cast<double>(multiplicity);

            RealMatrix q = condition.matrix(kappa, sign);
            Eigen::SelfAdjointEigenSolver<RealMatrix> solver(q);
            std::vector<Eigen::Index> order(static_cast<std::size_t>(q.rows()));
            for (Eigen::Index i = 0; i < q.rows(); ++i) order[static_cast<std::size_t>(i)] = i;
            std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
                return std::abs(solver.eigenvalues()(x)) < std::abs(solver.eigenvalues()(y));
            });

            // Lead-extended inner product: a terminal vertex carries its lead
            // tails, sum_{x>=1} e^{-2 kappa x} = e^{-2kappa} / (1 - e^{-2kappa}) each.
            const double tail = std::exp(-2 * kappa) / (1 - std::exp(-2 * kappa));
            RealVector weight = RealVector::Ones(q.rows()) + tail * condition.lead_count;
            std::vector<RealVector> basis;
            for (Eigen::Index c = 0; c < multiplicity; ++c) {
                RealVector v = solver.eigenvectors().col(order[static_cast<std::size_t>(c)]);
                for (const auto &u : basis) v -= (u.array() * weight.array() * v.array()).sum() * u;
                v /= std::sqrt((v.array().square() * weight.array()).sum());
                basis.push_back(v);
            }
            for (auto &v : basis) {
                // Fix the sign so the largest component is positive.
                Eigen::Index arg_max;
                v.cwiseAbs().maxCoeff(&arg_max);
                if (v(arg_max) < 0) v = -v;
                BoundState state;
                state.kappa = kappa;
                state.sign = sign;
                state.energy = sign * 2.0 * std::cosh(kappa);
                state.interior = v;
                state.lead_amplitudes = RealVector(static_cast<Eigen::Index>(graph.terminals().size()));
                for (std::size_t j = 0; j < graph.terminals().size(); ++j) {
                    state.lead_amplitudes(static_cast<Eigen::Index>(j)) = v(graph.terminals()[j].vertex);
                }
                state.residual = (q * v).cwiseAbs().maxCoeff();
                states.push_back(std::move(state));
            }
            first = last;
        }
    }
    return states;
}

}  // namespace qwalk
