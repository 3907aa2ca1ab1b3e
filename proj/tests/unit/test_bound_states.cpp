#include <cmath>

#include "doctest.h"
#include "qwalk/bound_states.hpp"
#include "qwalk/widgets.hpp"

using namespace qwalk;

namespace {

GraphTopology star(int leads) {
    std::vector<Terminal> terminals;
    for (int j = 0; j < leads; ++j) {
        terminals.push_back({"t" + std::to_string(j), 0, j == 0 ? TerminalKind::input : TerminalKind::output});
    }
    return GraphTopology(1, {}, terminals);
}

/// max |(H - E) psi| on the graph vertices plus the first vertex of every lead.
double extended_residual(const GraphTopology &g, const BoundState &s) {
    const double z = s.sign * std::exp(-s.kappa);
    RealVector h = g.adjacency_matrix() * s.interior - s.energy * s.interior;
    for (std::size_t j = 0; j < g.terminals().size(); ++j) h(g.terminals()[j].vertex) += z * s.interior(g.terminals()[j].vertex);
    double worst = h.cwiseAbs().maxCoeff();
    for (std::size_t j = 0; j < g.terminals().size(); ++j) {
        double b = s.lead_amplitudes(static_cast<Eigen::Index>(j));
        // On the lead, psi(x) = B z^x: psi(0) + psi(2) - E psi(1) must vanish.
        worst = std::max(worst, std::abs(b + b * z * z - s.energy * b * z));
    }
    return worst;
}

double lead_norm(const GraphTopology &g, const BoundState &s) {
    const double q = std::exp(-2 * s.kappa);
    double total = s.interior.squaredNorm();
    for (std::size_t j = 0; j < g.terminals().size(); ++j) {
        total += std::pow(s.lead_amplitudes(static_cast<Eigen::Index>(j)), 2) * q / (1 - q);
    }
    return total;
}

}  // namespace

TEST_CASE("three leads on one vertex bind at kappa = ln 2 / 2") {
    auto g = star(3);
    auto states = find_bound_states(g);
    REQUIRE(states.size() == 2);
    for (const auto &s : states) {
        CHECK(std::abs(s.kappa - std::log(2.0) / 2) < 1e-10);
        CHECK(std::abs(std::abs(s.energy) - 3 / std::sqrt(2.0)) < 1e-10);
        CHECK(s.residual < 1e-10);
        CHECK(extended_residual(g, s) < 1e-10);
        CHECK(lead_norm(g, s) == doctest::Approx(1).epsilon(1e-12));
        for (Eigen::Index j = 0; j < 3; ++j) CHECK(s.lead_amplitudes(j) == doctest::Approx(0.5));
    }
    CHECK(states[0].sign != states[1].sign);
}

TEST_CASE("a straight line has no bound states") {
    CHECK(find_bound_states(star(2)).empty());
    CHECK(find_bound_states(build_widget(WidgetKind::wire(5))).empty());
}

TEST_CASE("widget bound states are eigenvectors and survive grid refinement") {
    for (auto kind : {WidgetKind::phase_shift(), WidgetKind::separator(), WidgetKind::filter(), WidgetKind::basis_change()}) {
        auto g = build_widget(kind);
        CAPTURE(widget_name(kind.type));
        auto coarse = find_bound_states(g);
        BoundStateSearch fine;
        fine.grid_step /= 2;
        auto refined = find_bound_states(g, fine);
        REQUIRE(coarse.size() == refined.size());
        for (std::size_t i = 0; i < coarse.size(); ++i) {
            CHECK(coarse[i].residual < 1e-8);
            CHECK(extended_residual(g, coarse[i]) < 1e-8);
            CHECK(lead_norm(g, coarse[i]) == doctest::Approx(1).epsilon(1e-10));
            CHECK(std::abs(coarse[i].kappa - refined[i].kappa) < 1e-10);
            CHECK(coarse[i].sign == refined[i].sign);
            CHECK(coarse[i].kappa <= std::acosh(3.0 / 2) + 0.1);
            CHECK(bound_state_condition(g, coarse[i].kappa, coarse[i].sign) < 1e-9);
        }
    }
}

TEST_CASE("phase shift binds a symmetric pair") {
    auto states = find_bound_states(build_widget(WidgetKind::phase_shift()));
    REQUIRE(states.size() == 2);
    CHECK(states[0].kappa == doctest::Approx(states[1].kappa).epsilon(1e-10));
    CHECK(states[0].energy == doctest::Approx(-states[1].energy).epsilon(1e-10));
}

TEST_CASE("separator bound states are not mirror pairs") {
    auto states = find_bound_states(build_widget(WidgetKind::separator()));
    REQUIRE(states.size() == 2);
    CHECK(std::abs(states[0].kappa - states[1].kappa) > 0.1);
}

TEST_CASE("the condition is far from zero away from a bound state") {
    CHECK(bound_state_condition(star(3), 0.2, +1) > 1e-3);
    CHECK(bound_state_condition(star(3), std::log(2.0) / 2, +1) < 1e-12);
}
