#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/graph.hpp"
#include "qwalk/numeric.hpp"
#include "qwalk/widgets.hpp"

namespace qwalk {

/// Smallest |sin k| accepted; at k -> 0, -pi the lead solutions degenerate.
inline constexpr double band_guard = 1e-6;
/// Condition estimate above which a scattering solve is rejected.
inline constexpr double condition_threshold = 1e12;
/// Below this |T| the phase of T is not used for derivatives.
inline constexpr double transmission_floor = 1e-6;
inline constexpr double first_derivative_step = 1e-5;
inline constexpr double second_derivative_step = 1e-4;

/// Incoming momentum on the open band (-pi, 0). Incoming waves have negative
/// momentum; the energy of the scattering state is 2 cos k.
class Momentum {
   public:
    explicit Momentum(double k);
    double value() const noexcept { return k_; }
    double energy() const noexcept;
    static bool admissible(double k) noexcept;

   private:
    double k_;
};

/// Scattering state entering through one lead.
///
/// On lead j the amplitude is e^{-ikx} + R e^{ikx}; on every other lead j' it
/// is T_{j,j'} e^{ikx}; x = 0 is the terminal vertex.
struct ScatteringSolution {
    double k = 0;
    std::string input;
    Complex reflection;
    std::map<std::string, Complex> transmissions;
    ComplexVector interior;
    double energy = 0;

    /// |R|^2 + sum |T|^2 - 1.
    double flux_defect() const;
};

/// Rows are the incoming lead, columns the outgoing lead, in the order of
/// GraphTopology::terminals().
struct SMatrix {
    double k = 0;
    std::vector<std::string> terminals;
    ComplexMatrix entries;

    Complex operator()(std::string_view from, std::string_view to) const;
    std::size_t index(std::string_view terminal) const;
    double unitarity_defect() const;    ///< max |S^dagger S - I|
    double reciprocity_defect() const;  ///< max |S - S^T|
};

/// Moves the point where coefficient phases are measured `shift` edges into
/// the graph in total (sum over both leads): entries are multiplied by e^{-ik*shift}.
struct PhaseReference {
    int shift = 0;
    static PhaseReference core(WidgetType type) { return {2 * core_reference_inset(type)}; }
};

ScatteringSolution solve_scattering(const GraphTopology &graph, Momentum k, std::string_view input);
SMatrix s_matrix(const GraphTopology &graph, Momentum k);
Complex transmission(const GraphTopology &graph, Momentum k, std::string_view from, std::string_view to,
                     PhaseReference reference = {});

/// max |(H - 2 cos k) psi| over graph vertices and the first lead vertices of
/// the lead-extended ansatz.
double scattering_residual(const GraphTopology &graph, const ScatteringSolution &solution);

/// d/dk arg T_{from,to}(k) by a five-point central difference of phase ratios.
double effective_length(const GraphTopology &graph, std::string_view from, std::string_view to, Momentum k,
                        PhaseReference reference = {}, double step = first_derivative_step);

/// d^2/dk^2 arg T_{from,to}(k), five-point stencil.
double phase_curvature(const GraphTopology &graph, std::string_view from, std::string_view to, Momentum k,
                       PhaseReference reference = {}, double step = second_derivative_step);

/// v(k) = -2 sin k.
double group_velocity(double k);

/// c(k) = 2t cos k + d^2/dk^2 arg T_{from,to}(k).
double curvature(const GraphTopology &graph, std::string_view from, std::string_view to, Momentum k, double t);

struct StationaryPoint {
    double k = 0;
    double amplitude = 0;  ///< |T(k)| / sqrt(2 pi |c(k)|)
    double curvature = 0;
    Complex contribution;  ///< complex stationary-phase term, magnitude == amplitude
};

/// Root of x + y + l(k) = -2t sin k on the branch (-pi/2, 0) and the
/// stationary-phase estimate of |<y, to| e^{-iHt} |x, from>|.
StationaryPoint stationary_phase_predict(const GraphTopology &graph, std::string_view from, std::string_view to,
                                         double x, double y, double t);

/// Every root of the stationary condition in the band, in increasing k. For
/// bipartite graphs roots come in mirror pairs k, -pi - k whose terms interfere.
std::vector<StationaryPoint> stationary_points(const GraphTopology &graph, std::string_view from,
                                               std::string_view to, double x, double y, double t);

/// Closed-form coefficients of the catalog widgets in their core phase
/// reference. Channels are "from:to" terminal names of build_widget(type);
/// the filter decoration ratio is channel "y".
Complex reference_coefficient(WidgetType type, std::string_view channel, double k);

struct GateConstants {
    Eigen::Matrix2cd phase_gate;   ///< diag(1, e^{i pi/4})
    Eigen::Matrix2cd basis_gate;   ///< -(1/sqrt 2) [[i, 1], [1, i]]
    Eigen::Matrix2cd hadamard;
};

GateConstants gate_constants();

/// max_ij |e^{i phi} a_ij - b_ij| with phi chosen to align a with b.
double global_phase_deviation(const ComplexMatrix &a, const ComplexMatrix &b);

}  // namespace qwalk
