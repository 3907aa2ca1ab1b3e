#include "qwalk/scattering.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <optional>

#include "qwalk/error.hpp"

namespace qwalk {

Momentum::Momentum(double k) : k_(k) {
    if (!admissible(k)) {
        throw BandError("momentum " + std::to_string(k) + " is outside the band (-pi, 0) or within " +
                        std::to_string(band_guard) + " of its edges");
    }
}

double Momentum::energy() const noexcept { return 2.0 * std::cos(k_); }

bool Momentum::admissible(double k) noexcept {
    return std::isfinite(k) && k < 0.0 && k > -pi && std::abs(std::sin(k)) > band_guard;
}

double ScatteringSolution::flux_defect() const {
    double total = std::norm(reflection);
    for (const auto &[name, t] : transmissions) total += std::norm(t);
    return total - 1.0;
}

std::size_t SMatrix::index(std::string_view terminal) const {
    auto it = std::find(terminals.begin(), terminals.end(), terminal);
    if (it == terminals.end()) throw GraphError("S-matrix has no terminal '" + std::string(terminal) + "'");
    return static_cast<std::size_t>(it - terminals.begin());
}

Complex SMatrix::operator()(std::string_view from, std::string_view to) const {
    return entries(index(from), index(to));
}

double SMatrix::unitarity_defect() const {
    auto n = entries.rows();
    return (entries.adjoint() * entries - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
}

double SMatrix::reciprocity_defect() const { return (entries - entries.transpose()).cwiseAbs().maxCoeff(); }

namespace {

/// (A - 2cos k + e^{ik} L) with L the diagonal lead count; the scattering state
/// entering on terminal j solves it with right-hand side 2i sin k e_{vertex(j)}.
class ScatteringSystem {
   public:
    ScatteringSystem(const GraphTopology &graph, Momentum k) : graph_(graph), k_(k) {
        const auto n = static_cast<Eigen::Index>(graph.vertex_count());
        ComplexMatrix m = graph.adjacency_matrix().cast<Complex>();
        m.diagonal().array() -= k.energy();
        const Complex lead_factor = std::exp(imag_unit * k.value());
        for (const auto &t : graph.terminals()) m(t.vertex, t.vertex) += lead_factor;
        if (n > 0) {
            lu_.compute(m);
            double rcond = lu_.rcond();
            double condition = rcond > 0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
            if (!(condition <= condition_threshold)) throw IllConditionedError(k.value(), condition);
        }
    }

    /// Columns are the interior amplitudes for each input terminal index.
    ComplexMatrix solve(const std::vector<std::size_t> &inputs) const {
        const auto n = static_cast<Eigen::Index>(graph_.vertex_count());
        ComplexMatrix rhs = ComplexMatrix::Zero(n, static_cast<Eigen::Index>(inputs.size()));
        const Complex source = 2.0 * imag_unit * std::sin(k_.value());
        for (std::size_t c = 0; c < inputs.size(); ++c) {
            rhs(graph_.terminals()[inputs[c]].vertex, static_cast<Eigen::Index>(c)) = source;
        }
        return lu_.solve(rhs);
    }

   private:
    const GraphTopology &graph_;
    Momentum k_;
    Eigen::PartialPivLU<ComplexMatrix> lu_;
};

Complex reference_factor(Momentum k, PhaseReference reference) {
    return std::exp(-imag_unit * (k.value() * reference.shift));
}

std::optional<Complex> transmission_if_admissible(const GraphTopology &graph, double k, std::string_view from,
                                                  std::string_view to, PhaseReference reference) {
    if (!Momentum::admissible(k)) return std::nullopt;
    return transmission(graph, Momentum(k), from, to, reference);
}

/// Samples T at k + m*step, m = -2..2, rejecting points with |T| below the floor.
std::array<Complex, 5> stencil_samples(const GraphTopology &graph, std::string_view from, std::string_view to,
                                       Momentum k, PhaseReference reference, double step) {
    std::array<Complex, 5> samples;
    for (int m = -2; m <= 2; ++m) {
        auto value = transmission_if_admissible(graph, k.value() + m * step, from, to, reference);
        if (!value || std::abs(*value) <= transmission_floor) {
            throw UndefinedEffectiveLength("effective length undefined for " + std::string(from) + " -> " +
                                           std::string(to) + " near k = " + std::to_string(k.value()) +
                                           ": transmission below floor");
        }
        samples[static_cast<std::size_t>(m + 2)] = *value;
    }
    return samples;
}

}  // namespace

ScatteringSolution solve_scattering(const GraphTopology &graph, Momentum k, std::string_view input) {
    auto input_index = graph.find_terminal(input);
    if (!input_index) throw GraphError("no terminal named '" + std::string(input) + "'");
    ScatteringSystem system(graph, k);
    ComplexVector psi = system.solve({*input_index}).col(0);

    ScatteringSolution solution;
    solution.k = k.value();
    solution.input = std::string(input);
    solution.energy = k.energy();
    for (std::size_t j = 0; j < graph.terminals().size(); ++j) {
        const auto &t = graph.terminals()[j];
        if (j == *input_index) {
            solution.reflection = psi(t.vertex) - 1.0;
        } else {
            solution.transmissions[t.name] = psi(t.vertex);
        }
    }
    solution.interior = std::move(psi);
    return solution;
}

SMatrix s_matrix(const GraphTopology &graph, Momentum k) {
    const auto n_terms = graph.terminals().size();
    std::vector<std::size_t> inputs(n_terms);
    for (std::size_t j = 0; j < n_terms; ++j) inputs[j] = j;
    SMatrix s;
    s.k = k.value();
    s.terminals = graph.terminal_names();
    s.entries = ComplexMatrix::Zero(static_cast<Eigen::Index>(n_terms), static_cast<Eigen::Index>(n_terms));
    if (n_terms == 0) return s;
    ScatteringSystem system(graph, k);
    ComplexMatrix psi = system.solve(inputs);
    for (std::size_t j = 0; j < n_terms; ++j) {
        for (std::size_t jp = 0; jp < n_terms; ++jp) {
            Complex value = psi(graph.terminals()[jp].vertex, static_cast<Eigen::Index>(j));
            if (j == jp) value -= 1.0;
            s.entries(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(jp)) = value;
        }
    }
    return s;
}

Complex transmission(const GraphTopology &graph, Momentum k, std::string_view from, std::string_view to,
                     PhaseReference reference) {
    auto from_index = graph.find_terminal(from);
    if (!from_index) throw GraphError("no terminal named '" + std::string(from) + "'");
    const auto &target = graph.terminal(to);
    ScatteringSystem system(graph, k);
    Complex value = system.solve({*from_index})(target.vertex, 0);
    if (from == to) value -= 1.0;
    return value * reference_factor(k, reference);
}

double scattering_residual(const GraphTopology &graph, const ScatteringSolution &solution) {
    const double k = solution.k;
    const double energy = 2.0 * std::cos(k);
    const Complex in_wave = std::exp(-imag_unit * k);
    const Complex out_wave = std::exp(imag_unit * k);
    const auto &psi = solution.interior;

    auto lead_amplitude = [&](const Terminal &t, int x) -> Complex {
        Complex s = psi(t.vertex) - (t.name == solution.input ? 1.0 : 0.0);
        Complex incoming = t.name == solution.input ? std::pow(in_wave, x) : 0.0;
        return incoming + s * std::pow(out_wave, x);
    };

    ComplexVector hpsi = ComplexVector::Zero(psi.size());
    for (const auto &e : graph.edges()) {
        hpsi(e.u) += psi(e.v);
        hpsi(e.v) += psi(e.u);
    }
    for (const auto &t : graph.terminals()) hpsi(t.vertex) += lead_amplitude(t, 1);
    double worst = psi.size() > 0 ? (hpsi - energy * psi).cwiseAbs().maxCoeff() : 0.0;
    for (const auto &t : graph.terminals()) {
        // First vertex on the lead: neighbours are x = 0 and x = 2.
        Complex r = lead_amplitude(t, 0) + lead_amplitude(t, 2) - energy * lead_amplitude(t, 1);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double effective_length(const GraphTopology &graph, std::string_view from, std::string_view to, Momentum k,
                        PhaseReference reference, double step) {
    auto t = stencil_samples(graph, from, to, k, reference, step);
    // Phase differences via ratios, so no branch cut is crossed.
    double d1 = std::arg(t[3] / t[1]);
    double d2 = std::arg(t[4] / t[0]);
    return (8.0 * d1 - d2) / (12.0 * step);
}

double phase_curvature(const GraphTopology &graph, std::string_view from, std::string_view to, Momentum k,
                       PhaseReference reference, double step) {
    auto t = stencil_samples(graph, from, to, k, reference, step);
    auto rel = [&](std::size_t i) { return std::arg(t[i] / t[2]); };
    return (-rel(4) + 16.0 * rel(3) + 16.0 * rel(1) - rel(0)) / (12.0 * step * step);
}

double group_velocity(double k) { return -2.0 * std::sin(k); }

double curvature(const GraphTopology &graph, std::string_view from, std::string_view to, Momentum k, double t) {
    return 2.0 * t * std::cos(k.value()) + phase_curvature(graph, from, to, k);
}

namespace {

std::optional<double> stationary_residual(const GraphTopology &graph, std::string_view from, std::string_view to,
                                          double x, double y, double t, double k) {
    if (!Momentum::admissible(k - 2 * first_derivative_step) || !Momentum::admissible(k + 2 * first_derivative_step)) {
        return std::nullopt;
    }
    try {
        return x + y + effective_length(graph, from, to, Momentum(k)) + 2.0 * t * std::sin(k);
    } catch (const UndefinedEffectiveLength &) {
        return std::nullopt;
    } catch (const IllConditionedError &) {
        return std::nullopt;
    }
}

StationaryPoint evaluate_point(const GraphTopology &graph, std::string_view from, std::string_view to, double x,
                               double y, double t, double k) {
    Momentum momentum(k);
    StationaryPoint point;
    point.k = k;
    point.curvature = curvature(graph, from, to, momentum, t);
    Complex tr = transmission(graph, momentum, from, to);
    double scale = std::sqrt(2.0 * pi * std::abs(point.curvature));
    point.amplitude = std::abs(tr) / scale;
    double phase = k * (x + y) - 2.0 * t * std::cos(k) + (point.curvature > 0 ? pi / 4 : -pi / 4);
    point.contribution = tr * std::exp(imag_unit * phase) / scale;
    return point;
}

std::vector<StationaryPoint> scan_roots(const GraphTopology &graph, std::string_view from, std::string_view to,
                                        double x, double y, double t, double k_lo, double k_hi, int samples,
                                        bool first_only) {
    std::vector<StationaryPoint> roots;
    std::optional<double> prev_value;
    double prev_k = 0;
    for (int i = 0; i <= samples; ++i) {
        double k = k_lo + (k_hi - k_lo) * i / samples;
        auto value = stationary_residual(graph, from, to, x, y, t, k);
        if (value && prev_value && (*value == 0.0 || std::signbit(*value) != std::signbit(*prev_value))) {
            double a = prev_k, b = k, fa = *prev_value;
            while (b - a > 1e-13) {
                double mid = 0.5 * (a + b);
                auto fm = stationary_residual(graph, from, to, x, y, t, mid);
                if (!fm) throw NoStationaryPoint("stationary condition undefined inside bracket near k = " +
                                                 std::to_string(mid));
                if (std::signbit(*fm) == std::signbit(fa)) {
                    a = mid;
                    fa = *fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(evaluate_point(graph, from, to, x, y, t, 0.5 * (a + b)));
            if (first_only) return roots;
        }
        if (value) {
            prev_value = value;
            prev_k = k;
        } else {
            prev_value.reset();
        }
    }
    return roots;
}

}  // namespace

StationaryPoint stationary_phase_predict(const GraphTopology &graph, std::string_view from, std::string_view to,
                                         double x, double y, double t) {
    auto roots = scan_roots(graph, from, to, x, y, t, -pi / 2 + 1e-6, -1e-4, 512, true);
    if (roots.empty()) {
        throw NoStationaryPoint("no stationary point on (-pi/2, 0) for x + y = " + std::to_string(x + y) +
                                ", t = " + std::to_string(t));
    }
    return roots.front();
}

std::vector<StationaryPoint> stationary_points(const GraphTopology &graph, std::string_view from,
                                               std::string_view to, double x, double y, double t) {
    return scan_roots(graph, from, to, x, y, t, -pi + 1e-4, -1e-4, 2048, false);
}

Complex reference_coefficient(WidgetType type, std::string_view channel, double k) {
    auto unsupported = [&]() -> Error {
        return Error("no closed form for channel '" + std::string(channel) + "' of widget '" +
                     std::string(widget_name(type)) + "'");
    };
    const Complex i = imag_unit;
    switch (type) {
        case WidgetType::phase_shift: {
            if (channel != "in:out" && channel != "out:in") throw unsupported();
            double s = std::sin(k);
            return 8.0 / (8.0 + i * std::cos(2 * k) / (s * s * s * std::cos(k)));
        }
        case WidgetType::basis_change: {
            auto colon = channel.find(':');
            if (colon == std::string_view::npos) throw unsupported();
            auto from = channel.substr(0, colon), to = channel.substr(colon + 1);
            auto parse = [&](std::string_view name) -> std::pair<char, bool> {
                if (name == "0_in") return {'0', true};
                if (name == "1_in") return {'1', true};
                if (name == "0_out") return {'0', false};
                if (name == "1_out") return {'1', false};
                throw unsupported();
            };
            auto [rail_from, in_from] = parse(from);
            auto [rail_to, in_to] = parse(to);
            Complex denom = 2.0 * std::cos(k) + i * (std::sin(3 * k) - std::sin(k));
            if (in_from == in_to) return -std::exp(i * k) * std::cos(2 * k) / denom;
            if (rail_from == rail_to) return std::exp(i * k) * (std::cos(k) + i * std::sin(3 * k)) / denom;
            return -1.0 / denom;
        }
        case WidgetType::separator: {
            if (channel != "in:out" && channel != "out:in") throw unsupported();
            double denom = std::sin(k) + 2 * std::sin(2 * k) + std::sin(3 * k) - std::sin(5 * k);
            return 1.0 / (1.0 + i * (std::cos(k) + std::cos(3 * k)) / denom);
        }
        case WidgetType::filter: {
            if (channel != "y") throw unsupported();
            return i * std::exp(2.0 * i * k) * std::cos(2 * k) / std::sin(k);
        }
        default:
            throw unsupported();
    }
}

GateConstants gate_constants() {
    const double r = 1.0 / std::sqrt(2.0);
    GateConstants g;
    g.phase_gate << 1, 0, 0, std::exp(imag_unit * (pi / 4));
    g.basis_gate << -r * imag_unit, -r, -r, -r * imag_unit;
    g.hadamard << r, r, r, -r;
    return g;
}

double global_phase_deviation(const ComplexMatrix &a, const ComplexMatrix &b) {
    Complex overlap = (a.conjugate().array() * b.array()).sum();
    Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex(1.0);
    return (phase * a - b).cwiseAbs().maxCoeff();
}

}  // namespace qwalk
