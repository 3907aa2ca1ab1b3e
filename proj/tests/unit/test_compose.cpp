#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/circuit.hpp"
#include "qwalk/compose.hpp"
#include "qwalk/error.hpp"
#include "qwalk/widgets.hpp"

using namespace qwalk;

namespace {

double block_deviation(const ChannelBlock &a, const ChannelBlock &b) {
    return std::max({(a.forward - b.forward).cwiseAbs().maxCoeff(), (a.reflection - b.reflection).cwiseAbs().maxCoeff(),
                     (a.backward - b.backward).cwiseAbs().maxCoeff(),
                     (a.back_reflection - b.back_reflection).cwiseAbs().maxCoeff()});
}

ChannelBlock manual_block(double k, ComplexMatrix t, ComplexMatrix r) {
    ChannelBlock b;
    b.k = k;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        b.inputs.push_back(std::to_string(i) + "_in");
        b.outputs.push_back(std::to_string(i) + "_out");
    }
    b.forward = b.backward = t;
    b.reflection = b.back_reflection = r;
    return b;
}

}  // namespace

TEST_CASE("basis change block is U_c at the design momentum") {
    auto bc = build_widget(WidgetKind::basis_change());
    auto block = extract_block(bc, Momentum(design_momentum), PhaseReference::core(WidgetType::basis_change));
    CHECK(block.inputs == std::vector<std::string>{"0_in", "1_in"});
    CHECK(block.outputs == std::vector<std::string>{"0_out", "1_out"});
    CHECK((block.forward - gate_constants().basis_gate).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(block.reflection.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(block.unitarity_defect() < 1e-10);
}

TEST_CASE("padded phase-shift layer applies U_b") {
    auto layer = gate_layer(Gate::ub(1), 1);
    auto block = extract_block(layer, Momentum(design_momentum));
    Eigen::Matrix2cd expected = std::exp(Complex(0, -3 * pi / 4)) * gate_constants().phase_gate;
    CHECK((block.forward - expected).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(block.reflection.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("in/out symmetric widgets have equal forward and backward blocks") {
    for (auto kind : {WidgetKind::wire(2), WidgetKind::phase_shift(), WidgetKind::basis_change(), WidgetKind::filter(),
                      WidgetKind::separator()}) {
        auto g = build_widget(kind);
        for (double k : {-2.8, -1.9, -0.7}) {
            auto b = extract_block(g, Momentum(k));
            CHECK((b.forward - b.backward).cwiseAbs().maxCoeff() < 1e-12);
            CHECK((b.reflection - b.back_reflection).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("block reassembles a unitary S-matrix without drains") {
    for (auto kind : {WidgetKind::cnot(), WidgetKind::basis_change(), WidgetKind::separator()}) {
        auto b = extract_block(build_widget(kind), Momentum(-1.1));
        CHECK(b.unitarity_defect() < 1e-10);
        CHECK(b.loss().cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("filter drains show up as loss") {
    auto f = build_widget(WidgetKind::filter());
    CHECK(extract_block(f, Momentum(design_momentum)).loss().cwiseAbs().maxCoeff() < 1e-10);
    auto off = extract_block(f, Momentum(-1.2));
    CHECK(off.loss().minCoeff() > 1e-2);
    CHECK_THROWS_AS(extract_block(f, Momentum(-1.2), {"drain"}, {"out"}), GraphError);
    CHECK_THROWS_AS(extract_block(f, Momentum(-1.2), {"in"}, {}), GraphError);
}

TEST_CASE("composition without reflection multiplies transmissions") {
    Eigen::Matrix2cd t1, t2;
    t1 << 0.6, Complex(0, 0.8), Complex(0, 0.8), 0.6;
    t2 << 0, 1, 1, 0;
    auto c = compose_blocks(manual_block(-1, t1, Eigen::Matrix2cd::Zero()), manual_block(-1, t2, Eigen::Matrix2cd::Zero()));
    CHECK((c.forward - t1 * t2).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c.reflection.cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("two basis changes give iX") {
    auto ref = PhaseReference::core(WidgetType::basis_change);
    auto b = extract_block(build_widget(WidgetKind::basis_change()), Momentum(design_momentum), ref);
    auto c = compose_blocks(b, b);
    Eigen::Matrix2cd ix;
    ix << 0, imag_unit, imag_unit, 0;
    CHECK((c.forward - ix).cwiseAbs().maxCoeff() < 1e-10);

    auto bc = build_widget(WidgetKind::basis_change());
    auto glued = extract_block(glue_series(bc, bc), Momentum(design_momentum), PhaseReference{2 * ref.shift});
    CHECK((glued.forward - ix).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("composition matches gluing at generic momenta") {
    auto ps = build_widget(WidgetKind::phase_shift());
    auto sep = build_widget(WidgetKind::separator());
    auto f = build_widget(WidgetKind::filter());
    for (double k : oracle::band_midpoints(30)) {
        Momentum m(k);
        CHECK(block_deviation(compose_blocks(extract_block(ps, m), extract_block(sep, m)),
                              extract_block(glue_series(ps, sep), m)) < 1e-8);
        CHECK(block_deviation(compose_blocks(extract_block(f, m), extract_block(ps, m)),
                              extract_block(glue_series(f, ps), m)) < 1e-8);
        auto ub = gate_layer(Gate::ub(1), 1), bc = build_widget(WidgetKind::basis_change());
        CHECK(block_deviation(compose_blocks(extract_block(ub, m), extract_block(bc, m)),
                              extract_block(glue_series(ub, bc), m)) < 1e-8);
    }
}

TEST_CASE("norm bounds for a composed pair") {
    auto sep = build_widget(WidgetKind::separator());
    auto f = build_widget(WidgetKind::filter());
    for (double k : oracle::band_midpoints(40)) {
        Momentum m(k);
        auto b1 = extract_block(sep, m), b2 = extract_block(f, m);
        const double d1 = reflection_scale(b1), d2 = reflection_scale(b2);
        auto c = compose_blocks(b1, b2);
        CHECK(spectral_norm(c.reflection) <= d1 + (1 + d1 * d2) * d2 + 1e-9);
        CHECK(spectral_norm(c.forward - b1.forward * b2.forward) <= d1 * d2 * (1 + d1 * d2) + 1e-9);
    }
}

TEST_CASE("composition errors") {
    auto ps = build_widget(WidgetKind::phase_shift());
    CHECK_THROWS_AS(compose_blocks(extract_block(ps, Momentum(-1)), extract_block(ps, Momentum(-1.1))), Error);
    CHECK_THROWS_AS(compose_blocks(extract_block(ps, Momentum(-1)), extract_block(build_widget(WidgetKind::cnot()), Momentum(-1))),
                    Error);
    Eigen::Matrix<Complex, 1, 1> zero, one;
    zero << 0;
    one << 1;
    CHECK_THROWS_AS(compose_blocks(manual_block(-1, zero, one), manual_block(-1, zero, one)), NonConvergentComposition);
}

TEST_CASE("spectral norm") {
    Eigen::Matrix2cd m;
    m << 3, 0, 0, Complex(0, -4);
    CHECK(spectral_norm(m) == doctest::Approx(4));
    CHECK(spectral_norm(Eigen::Matrix2cd::Zero()) == 0);
}

TEST_CASE("gate chains reflect less as they grow near the design momentum") {
    // |k + pi/4| <= c / m^2 keeps the chain reflection below C / m.
    const double c = 0.25;
    auto ps = build_widget(WidgetKind::phase_shift());
    std::vector<double> scaled;
    for (int m : {2, 4, 8, 16}) {
        GraphTopology chain = ps;
        for (int i = 1; i < m; ++i) chain = glue_series(chain, ps);
        double worst = 0;
        for (double s : {-1.0, -0.5, 0.5, 1.0}) {
            worst = std::max(worst, spectral_norm(extract_block(chain, Momentum(-pi / 4 + s * c / (m * m))).reflection));
        }
        scaled.push_back(m * worst);
    }
    const double constant = scaled.front();
    for (double v : scaled) CHECK(v <= constant * (1 + 1e-9));
}
