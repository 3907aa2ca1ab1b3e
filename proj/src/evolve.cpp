#include "qwalk/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Sparse>
#include <boost/math/special_functions/bessel.hpp>
#include <nlohmann/json.hpp>

#include "qwalk/bound_states.hpp"
#include "qwalk/error.hpp"
#include "qwalk/scattering.hpp"

namespace qwalk {

std::string_view to_string(EvolutionMethod method) {
    switch (method) {
        case EvolutionMethod::automatic: return "auto";
        case EvolutionMethod::dense: return "dense";
        case EvolutionMethod::chebyshev: return "chebyshev";
    }
    return "auto";
}

EvolutionMethod evolution_method_from_string(std::string_view text) {
    if (text == "auto") return EvolutionMethod::automatic;
    if (text == "dense") return EvolutionMethod::dense;
    if (text == "chebyshev") return EvolutionMethod::chebyshev;
    throw Error("unknown evolution method '" + std::string(text) + "' (expected auto, dense or chebyshev)");
}

std::vector<Complex> chebyshev_coefficients(double z) {
    const auto limit = static_cast<int>(std::ceil(std::numbers::e * z / 2.0)) + 40;
    std::vector<Complex> c;
    Complex phase = 1.0;  // (-i)^n
    for (int n = 0; n <= limit; ++n) {
        const double j = boost::math::cyl_bessel_j(n, z);
        c.push_back((n == 0 ? 1.0 : 2.0) * phase * j);
        if (n > z && std::abs(c.back()) < chebyshev_tail) break;
        phase *= -imag_unit;
    }
    return c;
}

DenseEvolution::DenseEvolution(const GraphTopology &graph) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(graph.adjacency_matrix());
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
}

ComplexVector DenseEvolution::operator()(const ComplexVector &psi, double t) const {
    ComplexVector modes = vectors_.transpose() * psi;
    for (Eigen::Index i = 0; i < modes.size(); ++i) modes(i) *= std::exp(-imag_unit * (energies_(i) * t));
    return vectors_ * modes;
}

namespace {

ComplexVector evolve_chebyshev(const GraphTopology &graph, const ComplexVector &psi, double t) {
    const auto n = static_cast<Eigen::Index>(graph.vertex_count());
    const double scale = std::max(1, graph.max_degree(false));
    std::vector<Eigen::Triplet<double>> entries;
    for (const auto &e : graph.edges()) {
        entries.emplace_back(e.u, e.v, 1.0 / scale);
        entries.emplace_back(e.v, e.u, 1.0 / scale);
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> h(n, n);
    h.setFromTriplets(entries.begin(), entries.end());

    const auto c = chebyshev_coefficients(scale * t);
    ComplexVector previous = psi;
    ComplexVector result = c[0] * psi;
    if (c.size() == 1) return result;
    ComplexVector current = h * psi;
    result += c[1] * current;
    for (std::size_t m = 2; m < c.size(); ++m) {
        ComplexVector next = 2.0 * (h * current) - previous;
        result += c[m] * next;
        previous = std::move(current);
        current = std::move(next);
    }
    return result;
}

}  // namespace

ComplexVector evolve_state(const GraphTopology &graph, const ComplexVector &psi, double t, EvolutionMethod method) {
    if (psi.size() != static_cast<Eigen::Index>(graph.vertex_count())) {
        throw Error("state has " + std::to_string(psi.size()) + " amplitudes for a graph of " +
                    std::to_string(graph.vertex_count()) + " vertices");
    }
    if (t < 0) throw Error("evolution time must be non-negative");
    if (t == 0 || graph.vertex_count() == 0) return psi;
    if (method == EvolutionMethod::automatic) {
        method = graph.vertex_count() <= dense_vertex_limit ? EvolutionMethod::dense : EvolutionMethod::chebyshev;
    }
    if (method == EvolutionMethod::dense) return DenseEvolution(graph)(psi, t);
    return evolve_chebyshev(graph, psi, t);
}

ComplexVector make_packet(const TruncatedGraph &graph, const PacketSpec &spec) {
    const auto &lead = graph.lead(spec.wire);
    const double sigma = spec.width;
    const double x0 = spec.center;
    if (!(sigma >= 2)) throw PacketPlacementError("packet width must be at least 2");
    Momentum k(spec.momentum);
    if (x0 - 3 * sigma < 1) {
        throw PacketPlacementError("packet centred at " + std::to_string(spec.center) + " with width " +
                                   std::to_string(sigma) + " overlaps the widgets at the end of '" + spec.wire + "'");
    }
    if (x0 < 5 * sigma || static_cast<double>(lead.length()) - x0 < 5 * sigma) {
        throw PacketPlacementError("packet centre must lie at least 5 widths from both ends of '" + spec.wire +
                                   "' (length " + std::to_string(lead.length()) + ")");
    }
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(graph.graph.vertex_count()));
    for (std::size_t x = 1; x <= lead.length(); ++x) {
        const double offset = static_cast<double>(x) - x0;
        psi(lead.vertices[x - 1]) = std::exp(-imag_unit * (k.value() * static_cast<double>(x))) *
                                    std::exp(-offset * offset / (4 * sigma * sigma));
    }
    return psi / psi.norm();
}

namespace {

Complex scattering_part(const GraphTopology &graph, const PropagatorQuery &q, int points) {
    const auto a = static_cast<Eigen::Index>(*graph.find_terminal(q.from));
    const auto b = static_cast<Eigen::Index>(*graph.find_terminal(q.to));
    const double distance = q.x + q.y;
    const double separation = q.y - q.x;
    Complex sum = 0.0;
    for (int i = 0; i < points; ++i) {
        const double k = -pi + (i + 0.5) * pi / points;
        const SMatrix s = s_matrix(graph, Momentum(k));
        Complex term = s.entries(a, b) * std::exp(imag_unit * (k * distance)) +
                       std::conj(s.entries(b, a)) * std::exp(-imag_unit * (k * distance));
        if (a == b) term += 2.0 * std::cos(k * separation);
        sum += term * std::exp(-imag_unit * (2.0 * q.t * std::cos(k)));
    }
    // dk / (2 pi) with dk = pi / points
    return sum / (2.0 * points);
}

}  // namespace

PropagatorEstimate reconstruct_propagator(const GraphTopology &graph, const PropagatorQuery &query) {
    if (!graph.find_terminal(query.from)) throw GraphError("no terminal named '" + query.from + "'");
    if (!graph.find_terminal(query.to)) throw GraphError("no terminal named '" + query.to + "'");
    if (query.x < 1 || query.y < 1) throw Error("lead positions must be at least 1");
    if (query.grid_size < 2) throw Error("quadrature needs at least 2 points");
    if (query.t < 0) throw Error("evolution time must be non-negative");

    PropagatorEstimate estimate;
    if (query.include_bound_states) {
        const auto a = static_cast<Eigen::Index>(*graph.find_terminal(query.from));
        const auto b = static_cast<Eigen::Index>(*graph.find_terminal(query.to));
        for (const auto &state : find_bound_states(graph)) {
            const double decay = state.sign * std::exp(-state.kappa);
            estimate.bound_part += std::exp(-imag_unit * (state.energy * query.t)) * state.lead_amplitudes(a) *
                                   state.lead_amplitudes(b) * std::pow(decay, query.x + query.y);
        }
    }
    estimate.value = scattering_part(graph, query, query.grid_size) + estimate.bound_part;
    estimate.refined = scattering_part(graph, query, 2 * query.grid_size) + estimate.bound_part;
    estimate.difference = std::abs(estimate.refined - estimate.value);
    estimate.converged = estimate.difference <= 1e-4;
    return estimate;
}

RunReport run_computer(const CompiledMachine &machine, const InputMode &input, EvolutionMethod method) {
    const auto &truncated = machine.truncated;
    const auto n = static_cast<Eigen::Index>(truncated.graph.vertex_count());
    RunReport report;
    report.t = machine.evolution_time;
    report.qubit_count = machine.circuit.qubit_count;
    report.gate_count = machine.circuit.gates.size();
    report.start_offset = machine.start_offset;
    report.filter_count = machine.filter_count;
    report.truncation_length = machine.truncation_length;
    report.total_effective_length = machine.total_effective_length;
    report.vertex_count = truncated.graph.vertex_count();
    if (method == EvolutionMethod::automatic) {
        method = truncated.graph.vertex_count() <= dense_vertex_limit ? EvolutionMethod::dense
                                                                      : EvolutionMethod::chebyshev;
    }
    report.method = std::string(to_string(method));

    ComplexVector psi;
    if (const auto *packet = std::get_if<PacketInput>(&input)) {
        report.mode = "packet";
        PacketSpec spec{machine.start_terminal, packet->center.value_or(machine.start_offset), packet->width,
                        packet->momentum};
        report.packet_width = spec.width;
        report.packet_momentum = spec.momentum;
        report.packet_center = spec.center;
        psi = make_packet(truncated, spec);
    } else {
        report.mode = "vertex";
        psi = ComplexVector::Zero(n);
        psi(truncated.vertex_at(machine.start_terminal, static_cast<std::size_t>(machine.start_offset))) = 1.0;
    }

    psi = evolve_state(truncated.graph, psi, machine.evolution_time, method);
    report.norm = psi.norm();
    report.vertex_probabilities.resize(static_cast<std::size_t>(n));
    for (Eigen::Index v = 0; v < n; ++v) report.vertex_probabilities[static_cast<std::size_t>(v)] = std::norm(psi(v));

    for (const auto &[label, ports] : machine.wire_labels) {
        double total = 0;
        for (VertexId v : truncated.lead(ports.output).vertices) total += report.vertex_probabilities[v];
        report.output_probability[label] = total;
        report.valid_probability += total;
    }
    if (report.valid_probability > 0) {
        for (const auto &[label, p] : report.output_probability) {
            report.conditional_distribution[label] = p / report.valid_probability;
        }
    }
    return report;
}

std::string report_to_json(const RunReport &report) {
    nlohmann::ordered_json doc;
    doc["mode"] = report.mode;
    doc["valid_probability"] = report.valid_probability;
    doc["conditional_distribution"] = report.conditional_distribution;
    doc["output_probability"] = report.output_probability;
    doc["norm"] = report.norm;
    auto &params = doc["parameters"];
    params["t"] = report.t;
    params["qubits"] = report.qubit_count;
    params["gates"] = report.gate_count;
    params["x"] = report.start_offset;
    params["filters"] = report.filter_count;
    params["truncation"] = report.truncation_length;
    params["effective_length"] = report.total_effective_length;
    params["vertices"] = report.vertex_count;
    params["method"] = report.method;
    if (report.packet_width) params["packet_width"] = *report.packet_width;
    if (report.packet_momentum) params["packet_momentum"] = *report.packet_momentum;
    if (report.packet_center) params["packet_center"] = *report.packet_center;
    return doc.dump(2) + "\n";
}

std::string distribution_table(const CompiledMachine &machine, const RunReport &report) {
    const auto &truncated = machine.truncated;
    std::vector<std::pair<const std::string *, std::size_t>> place(truncated.graph.vertex_count(), {nullptr, 0});
    for (const auto &lead : truncated.leads) {
        for (std::size_t x = 1; x <= lead.length(); ++x) place[lead.vertices[x - 1]] = {&lead.terminal, x};
    }
    std::ostringstream out;
    out.precision(17);
    out << "vertex\twire\tposition\tprobability\n";
    for (std::size_t v = 0; v < report.vertex_probabilities.size(); ++v) {
        out << v << '\t';
        if (place[v].first) {
            out << *place[v].first << '\t' << place[v].second;
        } else {
            out << "core\t-";
        }
        out << '\t' << report.vertex_probabilities[v] << '\n';
    }
    return out.str();
}

double total_variation(const std::map<std::string, double> &p, const std::map<std::string, double> &q) {
    double sum = 0;
    for (const auto &[label, value] : p) {
        auto it = q.find(label);
        sum += std::abs(value - (it == q.end() ? 0.0 : it->second));
    }
    for (const auto &[label, value] : q) {
        if (!p.contains(label)) sum += std::abs(value);
    }
    return 0.5 * sum;
}

}  // namespace qwalk
