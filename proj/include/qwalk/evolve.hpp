#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/machine.hpp"
#include "qwalk/numeric.hpp"

namespace qwalk {

enum class EvolutionMethod { automatic, dense, chebyshev };

std::string_view to_string(EvolutionMethod method);
EvolutionMethod evolution_method_from_string(std::string_view text);

/// Graphs up to this many vertices are diagonalized when the method is automatic.
inline constexpr std::size_t dense_vertex_limit = 2000;
inline constexpr double chebyshev_tail = 1e-14;

/// e^{-iAt} psi for the adjacency matrix A of a finite graph (terminals ignored).
ComplexVector evolve_state(const GraphTopology &graph, const ComplexVector &psi, double t,
                           EvolutionMethod method = EvolutionMethod::automatic);

/// Expansion coefficients of e^{-izx} on [-1, 1]: c_0 = J_0(z), c_n = 2(-i)^n J_n(z),
/// cut where the tail drops below chebyshev_tail.
std::vector<Complex> chebyshev_coefficients(double z);

/// Repeated evolutions of one graph reuse the eigendecomposition.
class DenseEvolution {
   public:
    explicit DenseEvolution(const GraphTopology &graph);
    ComplexVector operator()(const ComplexVector &psi, double t) const;

   private:
    RealVector energies_;
    RealMatrix vectors_;
};

/// Gaussian packet on a lead moving toward its terminal:
/// psi(x) ~ e^{-ik x} exp(-(x - x0)^2 / (4 sigma^2)), x the distance from the terminal.
struct PacketSpec {
    std::string wire;
    int center = 0;
    double width = 25;
    double momentum = design_momentum;
};

ComplexVector make_packet(const TruncatedGraph &graph, const PacketSpec &spec);

struct PropagatorQuery {
    std::string from;
    int x = 1;
    std::string to;
    int y = 1;
    double t = 0;
    int grid_size = 2048;
    bool include_bound_states = true;
};

struct PropagatorEstimate {
    Complex value;       ///< at the requested grid size
    Complex refined;     ///< at twice the grid size
    double difference = 0;
    bool converged = true;  ///< difference <= 1e-4
    Complex bound_part;
};

/// <y, to| e^{-iHt} |x, from> on the graph with semi-infinite leads, from the
/// scattering states (midpoint rule on (-pi, 0)) plus the bound states.
PropagatorEstimate reconstruct_propagator(const GraphTopology &graph, const PropagatorQuery &query);

struct VertexInput {};
struct PacketInput {
    double width = 25;
    double momentum = design_momentum;
    std::optional<int> center;  ///< defaults to the machine's start offset
};
using InputMode = std::variant<VertexInput, PacketInput>;

struct RunReport {
    std::string mode;
    double valid_probability = 0;
    std::map<std::string, double> output_probability;
    std::map<std::string, double> conditional_distribution;
    std::vector<double> vertex_probabilities;
    double norm = 0;

    // parameters
    double t = 0;
    int qubit_count = 0;
    std::size_t gate_count = 0;
    int start_offset = 0;
    int filter_count = 0;
    std::size_t truncation_length = 0;
    double total_effective_length = 0;
    std::size_t vertex_count = 0;
    std::string method;
    std::optional<double> packet_width;
    std::optional<double> packet_momentum;
    std::optional<int> packet_center;
};

RunReport run_computer(const CompiledMachine &machine, const InputMode &input = VertexInput{},
                       EvolutionMethod method = EvolutionMethod::automatic);

/// Everything but the vertex probabilities, as JSON.
std::string report_to_json(const RunReport &report);

/// Tab-separated rows: vertex, wire, position, probability. Vertices not on a
/// lead have wire "core" and position "-".
std::string distribution_table(const CompiledMachine &machine, const RunReport &report);

/// Total-variation distance between two distributions over the same labels.
double total_variation(const std::map<std::string, double> &p, const std::map<std::string, double> &q);

}  // namespace qwalk
