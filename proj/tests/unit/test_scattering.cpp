#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/error.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/widgets.hpp"

using namespace qwalk;

namespace {

const WidgetKind catalog[] = {WidgetKind::wire(1),         WidgetKind::wire(3),  WidgetKind::cnot(),
                              WidgetKind::phase_shift(),  WidgetKind::basis_change(), WidgetKind::filter(),
                              WidgetKind::separator()};

const double r2 = 1 / std::sqrt(2.0);

GraphTopology line() {
    return GraphTopology(1, {}, {{"in", 0, TerminalKind::input}, {"out", 0, TerminalKind::output}});
}

}  // namespace

TEST_CASE("momentum must lie inside the band") {
    CHECK_THROWS_AS(Momentum(0.1), BandError);
    CHECK_THROWS_AS(Momentum(-pi), BandError);
    CHECK_THROWS_AS(Momentum(-1e-8), BandError);
    CHECK(Momentum(-1).energy() == doctest::Approx(2 * std::cos(-1.0)));
}

TEST_CASE("a single edge transmits with phase e^{ik}") {
    auto w = build_widget(WidgetKind::wire(1));
    for (double k : oracle::band_midpoints(17)) {
        auto s = s_matrix(w, Momentum(k));
        Complex phase = std::exp(imag_unit * k);
        CHECK(std::abs(s("in", "in")) < 1e-12);
        CHECK(std::abs(s("in", "out") - phase) < 1e-12);
        CHECK(std::abs(s("out", "in") - phase) < 1e-12);
    }
}

TEST_CASE("phase shift is transparent at the design momentum") {
    auto ps = build_widget(WidgetKind::phase_shift());
    auto sol = solve_scattering(ps, Momentum(design_momentum), "in");
    CHECK(std::abs(sol.reflection) < 1e-12);
    Complex t = transmission(ps, Momentum(design_momentum), "in", "out", PhaseReference::core(WidgetType::phase_shift));
    CHECK(std::abs(t - 1.0) < 1e-12);
    CHECK(scattering_residual(ps, sol) < 1e-10);
    CHECK(std::abs(sol.flux_defect()) < 1e-10);
}

TEST_CASE("basis change splits the 0 rail evenly") {
    auto bc = build_widget(WidgetKind::basis_change());
    auto ref = PhaseReference::core(WidgetType::basis_change);
    Momentum k(design_momentum);
    CHECK(std::abs(transmission(bc, k, "0_in", "0_out", ref) - Complex(0, -r2)) < 1e-12);
    CHECK(std::abs(transmission(bc, k, "0_in", "1_out", ref) - Complex(-r2, 0)) < 1e-12);
    CHECK(std::abs(transmission(bc, k, "0_in", "0_in", ref)) < 1e-12);
    CHECK(std::abs(transmission(bc, k, "0_in", "1_in", ref)) < 1e-12);
}

TEST_CASE("separator is transparent at three momenta") {
    auto sep = build_widget(WidgetKind::separator());
    for (double k : {-pi / 4, -pi / 2, -3 * pi / 4}) {
        CHECK(std::abs(std::abs(transmission(sep, Momentum(k), "in", "out")) - 1) < 1e-10);
    }
}

TEST_CASE("closed forms agree with the solver") {
    for (double k : oracle::band_midpoints(96)) {
        Momentum m(k);
        auto ps = build_widget(WidgetKind::phase_shift());
        CHECK(std::abs(transmission(ps, m, "in", "out", PhaseReference::core(WidgetType::phase_shift)) -
                       reference_coefficient(WidgetType::phase_shift, "in:out", k)) < 1e-10);
        auto sep = build_widget(WidgetKind::separator());
        CHECK(std::abs(transmission(sep, m, "in", "out", PhaseReference::core(WidgetType::separator)) -
                       reference_coefficient(WidgetType::separator, "in:out", k)) < 1e-10);
        auto bc = build_widget(WidgetKind::basis_change());
        for (const char *from : {"0_in", "1_in", "0_out", "1_out"}) {
            for (const char *to : {"0_in", "1_in", "0_out", "1_out"}) {
                std::string channel = std::string(from) + ":" + to;
                CAPTURE(channel);
                CHECK(std::abs(transmission(bc, m, from, to, PhaseReference::core(WidgetType::basis_change)) -
                               reference_coefficient(WidgetType::basis_change, channel, k)) < 1e-10);
            }
        }
    }
    CHECK(std::abs(reference_coefficient(WidgetType::phase_shift, "in:out", -pi / 4) - 1.0) < 1e-15);
    CHECK(std::abs(reference_coefficient(WidgetType::filter, "y", -pi / 4)) < 1e-15);
    CHECK(std::abs(std::abs(reference_coefficient(WidgetType::separator, "in:out", -3 * pi / 4)) - 1) < 1e-12);
    CHECK_THROWS_AS(reference_coefficient(WidgetType::cnot, "in:out", -1), Error);
    CHECK_THROWS_AS(reference_coefficient(WidgetType::phase_shift, "in:in", -1), Error);
}

TEST_CASE("S is unitary and symmetric for every widget") {
    for (const auto &kind : catalog) {
        auto g = build_widget(kind);
        CAPTURE(widget_name(kind.type));
        for (double k : oracle::band_midpoints(60)) {
            auto s = s_matrix(g, Momentum(k));
            CHECK(s.unitarity_defect() < 1e-10);
            CHECK(s.reciprocity_defect() < 1e-10);
        }
    }
}

TEST_CASE("bipartite widgets have mirror-symmetric |S|, the separator does not") {
    double separator_witness = 0;
    for (double k : oracle::band_midpoints(60)) {
        for (const auto &kind : catalog) {
            auto g = build_widget(kind);
            RealMatrix a = s_matrix(g, Momentum(k)).entries.cwiseAbs();
            RealMatrix b = s_matrix(g, Momentum(-pi - k)).entries.cwiseAbs();
            double dev = (a - b).cwiseAbs().maxCoeff();
            if (kind.type == WidgetType::separator) {
                separator_witness = std::max(separator_witness, dev);
            } else {
                CAPTURE(widget_name(kind.type));
                CHECK(dev < 1e-10);
            }
        }
    }
    CHECK(separator_witness > 1e-3);
}

TEST_CASE("solver reports trapped modes as ill-conditioned") {
    CHECK_THROWS_AS(s_matrix(build_widget(WidgetKind::phase_shift()), Momentum(-pi / 2)), IllConditionedError);
    CHECK_THROWS_AS(solve_scattering(build_widget(WidgetKind::wire(1)), Momentum(-1), "nowhere"), GraphError);
}

TEST_CASE("effective lengths at the design momentum") {
    Momentum k(design_momentum);
    auto core = [](WidgetType t) { return PhaseReference::core(t); };
    CHECK(effective_length(build_widget(WidgetKind::phase_shift()), "in", "out", k, core(WidgetType::phase_shift)) ==
          doctest::Approx(1).epsilon(1e-5));
    auto bc = build_widget(WidgetKind::basis_change());
    CHECK(effective_length(bc, "0_in", "0_out", k, core(WidgetType::basis_change)) == doctest::Approx(2).epsilon(1e-5));
    CHECK(effective_length(bc, "0_in", "1_out", k, core(WidgetType::basis_change)) == doctest::Approx(2).epsilon(1e-5));
    CHECK(effective_length(build_widget(WidgetKind::filter()), "in", "out", k, core(WidgetType::filter)) ==
          doctest::Approx(2).epsilon(1e-5));
    auto sep = build_widget(WidgetKind::separator());
    CHECK(std::abs(effective_length(sep, "in", "out", k, core(WidgetType::separator)) - 4 * (3 - 2 * std::sqrt(2.0))) <
          1e-4);
    CHECK(std::abs(effective_length(sep, "in", "out", Momentum(-3 * pi / 4), core(WidgetType::separator)) -
                   4 * (3 + 2 * std::sqrt(2.0))) < 1e-4);
    for (int length : {1, 2, 7}) {
        for (double kk : {-2.7, -1.1, -0.4}) {
            CHECK(effective_length(build_widget(WidgetKind::wire(length)), "in", "out", Momentum(kk)) ==
                  doctest::Approx(length).epsilon(1e-8));
        }
    }
}

TEST_CASE("effective lengths add for reflectionless pieces") {
    Momentum k(design_momentum);
    const WidgetKind parts[] = {WidgetKind::phase_shift(), WidgetKind::separator(), WidgetKind::wire(3)};
    for (const auto &a : parts) {
        for (const auto &b : parts) {
            auto ga = build_widget(a), gb = build_widget(b);
            double sum = effective_length(ga, "in", "out", k) + effective_length(gb, "in", "out", k);
            CHECK(std::abs(effective_length(glue_series(ga, gb), "in", "out", k) - sum) < 1e-6);
        }
    }
}

TEST_CASE("effective length needs a transmitting channel") {
    GraphTopology cut(2, {}, {{"in", 0, TerminalKind::input}, {"out", 1, TerminalKind::output}});
    CHECK_THROWS_AS(effective_length(cut, "in", "out", Momentum(-1)), UndefinedEffectiveLength);
}

TEST_CASE("group velocity and wire curvature") {
    CHECK(group_velocity(-pi / 2) == doctest::Approx(2));
    CHECK(group_velocity(-pi / 4) == doctest::Approx(std::sqrt(2.0)));
    auto w = build_widget(WidgetKind::wire(4));
    for (double k : {-2.0, -0.9}) {
        CHECK(std::abs(curvature(w, "in", "out", Momentum(k), 50) - 100 * std::cos(k)) < 1e-5);
    }
}

TEST_CASE("gate constants compose to a Hadamard") {
    auto g = gate_constants();
    Eigen::Matrix2cd ub2 = g.phase_gate * g.phase_gate;
    CHECK(global_phase_deviation(ub2 * g.basis_gate * ub2, g.hadamard) < 1e-12);
    CHECK((g.basis_gate.adjoint() * g.basis_gate - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("stationary point on the line") {
    const double t = 300;
    const double n = std::sqrt(2.0) * t;
    auto p = stationary_phase_predict(line(), "in", "out", n / 2, n / 2, t);
    CHECK(p.k == doctest::Approx(-pi / 4).epsilon(1e-8));
    CHECK(p.amplitude == doctest::Approx(1 / std::sqrt(2 * pi * 2 * t * std::cos(pi / 4))).epsilon(1e-6));
    CHECK_THROWS_AS(stationary_phase_predict(line(), "in", "out", 500, 500, 100), NoStationaryPoint);
}

TEST_CASE("stationary phase tracks the line propagator") {
    for (double t : {200.0, 300.0, 500.0}) {
        for (int n : {100, 200, 350}) {
            auto primary = stationary_phase_predict(line(), "in", "out", n / 2.0, n / 2.0, t);
            Complex sum = 0;
            auto points = stationary_points(line(), "in", "out", n / 2.0, n / 2.0, t);
            CHECK(points.size() == 2);
            for (const auto &p : points) sum += p.contribution;
            Complex exact = oracle::line_propagator(n, t);
            CAPTURE(t);
            CAPTURE(n);
            CHECK(std::abs(sum - exact) < 0.15 * primary.amplitude);
        }
    }
}

TEST_CASE("stationary phase through ten phase shifts") {
    auto ps = build_widget(WidgetKind::phase_shift());
    GraphTopology chain = ps;
    for (int i = 1; i < 10; ++i) chain = glue_series(chain, ps);
    const double ell = effective_length(chain, "in", "out", Momentum(design_momentum));
    const int x = 500, y = 500;
    const double t = (x + y + ell) / std::sqrt(2.0);
    auto truncated = truncate_leads(chain, 2600);
    ComplexVector psi = ComplexVector::Zero(static_cast<Eigen::Index>(truncated.graph.vertex_count()));
    psi(truncated.vertex_at("in", x)) = 1;
    auto out = evolve_state(truncated.graph, psi, t);

    auto primary = stationary_phase_predict(chain, "in", "out", x, y, t);
    CHECK(primary.k == doctest::Approx(-pi / 4).epsilon(1e-3));
    Complex sum = 0;
    for (const auto &p : stationary_points(chain, "in", "out", x, y, t)) sum += p.contribution;
    CHECK(std::abs(sum - out(truncated.vertex_at("out", y))) < 0.2 * primary.amplitude);

    // Two mirror contributions of equal size: the measured envelope is twice the single-point amplitude.
    double peak = 0;
    for (int yy = 400; yy <= 600; ++yy) peak = std::max(peak, std::abs(out(truncated.vertex_at("out", yy))));
    CHECK(peak == doctest::Approx(2 * primary.amplitude).epsilon(0.2));
}
