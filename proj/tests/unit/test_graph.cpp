#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/error.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/widgets.hpp"

using namespace qwalk;

namespace {

const WidgetKind catalog[] = {WidgetKind::wire(1),         WidgetKind::cnot(),   WidgetKind::phase_shift(),
                              WidgetKind::basis_change(), WidgetKind::filter(), WidgetKind::separator()};

}  // namespace

TEST_CASE("catalog sizes") {
    struct Expected {
        WidgetKind kind;
        std::size_t vertices, edges, terminals;
    };
    const Expected table[] = {
        {WidgetKind::wire(1), 2, 1, 2},       {WidgetKind::wire(4), 5, 4, 2},
        {WidgetKind::cnot(), 8, 4, 8},        {WidgetKind::phase_shift(), 7, 7, 2},
        {WidgetKind::basis_change(), 10, 10, 4}, {WidgetKind::filter(), 7, 6, 3},
        {WidgetKind::separator(), 7, 7, 2},
    };
    for (const auto &row : table) {
        auto g = build_widget(row.kind);
        CAPTURE(widget_name(row.kind.type));
        CHECK(g.vertex_count() == row.vertices);
        CHECK(g.edges().size() == row.edges);
        CHECK(g.terminals().size() == row.terminals);
    }
}

TEST_CASE("catalog widgets have degree at most three and only the separator has an odd cycle") {
    for (const auto &kind : catalog) {
        auto g = build_widget(kind);
        CAPTURE(widget_name(kind.type));
        CHECK(g.max_degree(true) <= 3);
        CHECK(g.is_bipartite() == (kind.type != WidgetType::separator));
        auto a = g.adjacency_matrix();
        CHECK(a.isApprox(a.transpose()));
        CHECK((a.array() * (a.array() - 1)).abs().maxCoeff() == 0);
        CHECK(a.diagonal().isZero());
    }
}

TEST_CASE("construction rejects broken invariants") {
    CHECK_THROWS_AS(GraphTopology(2, {{1, 1}}), GraphError);
    CHECK_THROWS_AS(GraphTopology(2, {{0, 1}, {1, 0}}), GraphError);
    CHECK_THROWS_AS(GraphTopology(2, {{0, 2}}), GraphError);
    CHECK_THROWS_AS(GraphTopology(2, {{0, 1}}, {{"a", 5, TerminalKind::input}}), GraphError);
    CHECK_THROWS_AS(GraphTopology(2, {{0, 1}}, {{"a", 0, TerminalKind::input}, {"a", 1, TerminalKind::output}}),
                    GraphError);
    GraphTopology shared(1, {}, {{"a", 0, TerminalKind::input}, {"b", 0, TerminalKind::output}});
    CHECK(shared.degrees(true)[0] == 2);
    CHECK(shared.degrees(false)[0] == 0);
}

TEST_CASE("edges are normalized so equal graphs compare equal") {
    GraphTopology a(3, {{2, 1}, {0, 1}});
    GraphTopology b(3, {{0, 1}, {1, 2}});
    CHECK(a == b);
    CHECK(a.edges()[0] == Edge{0, 1});
}

TEST_CASE("two wires glue into a longer wire") {
    auto g = glue_series(build_widget(WidgetKind::wire(2)), build_widget(WidgetKind::wire(3)));
    CHECK(g.vertex_count() == 6);
    CHECK(g.edges().size() == 5);
    CHECK(oracle::isomorphic(g, build_widget(WidgetKind::wire(5))));
    for (double k : {-2.5, -1.0, -0.3}) {
        Complex t = transmission(g, Momentum(k), "in", "out");
        CHECK(std::abs(t - std::exp(imag_unit * (5 * k))) < 1e-12);
    }
}

TEST_CASE("two phase shifts transmit perfectly at the design momentum") {
    auto ps = build_widget(WidgetKind::phase_shift());
    auto g = glue_series(ps, ps);
    CHECK(std::abs(std::abs(transmission(g, Momentum(design_momentum), "in", "out")) - 1) < 1e-10);
}

TEST_CASE("glue rejects self-loops, multi-edges and bad pairings") {
    // An edge whose two endpoints are both terminals merged into one vertex.
    GraphTopology link(2, {{0, 1}}, {{"out_a", 0, TerminalKind::output}, {"out_b", 1, TerminalKind::output}});
    GraphTopology point(1, {}, {{"in_a", 0, TerminalKind::input}, {"in_b", 0, TerminalKind::input}});
    const TerminalPair loop[] = {{"out_a", "in_a"}, {"out_b", "in_b"}};
    CHECK_THROWS_AS(glue(link, point, loop), GraphError);

    GraphTopology rung(2, {{0, 1}}, {{"in_a", 0, TerminalKind::input}, {"in_b", 1, TerminalKind::input}});
    GraphTopology pair(2, {{0, 1}}, {{"out_a", 0, TerminalKind::output}, {"out_b", 1, TerminalKind::output}});
    const TerminalPair doubled[] = {{"out_a", "in_a"}, {"out_b", "in_b"}};
    CHECK_THROWS_AS(glue(pair, rung, doubled), GraphError);

    auto w = build_widget(WidgetKind::wire(1));
    const TerminalPair wrong_kind[] = {{"in", "in"}};
    CHECK_THROWS_AS(glue(w, w, wrong_kind), GraphError);
    const TerminalPair missing[] = {{"nope", "in"}};
    CHECK_THROWS_AS(glue(w, w, missing), GraphError);
    GraphTopology two_in(2, {}, {{"a", 0, TerminalKind::input}, {"b", 1, TerminalKind::input}});
    const TerminalPair reused[] = {{"out", "a"}, {"out", "b"}};
    CHECK_THROWS_AS(glue(w, two_in, reused), GraphError);
}

TEST_CASE("surviving terminals that clash get side prefixes") {
    auto f = build_widget(WidgetKind::filter());
    auto g = glue_series(f, f);
    CHECK(g.find_terminal("1.drain"));
    CHECK(g.find_terminal("2.drain"));
    CHECK(g.find_terminal("in"));
    CHECK(g.find_terminal("out"));
    CHECK(g.terminal_names(TerminalKind::drain).size() == 2);
}

TEST_CASE("channel labels") {
    CHECK(channel_label("0_in") == "0");
    CHECK(channel_label("101_out") == "101");
    CHECK(channel_label("in").empty());
    CHECK(channel_label("out").empty());
    CHECK(channel_label("drain") == "drain");
}

TEST_CASE("gluing chains of two-terminal widgets is associative up to isomorphism") {
    const WidgetKind two_terminal[] = {WidgetKind::wire(2), WidgetKind::phase_shift(), WidgetKind::separator(),
                                       WidgetKind::wire(1)};
    for (const auto &a : two_terminal) {
        for (const auto &b : two_terminal) {
            for (const auto &c : two_terminal) {
                auto ga = build_widget(a), gb = build_widget(b), gc = build_widget(c);
                auto left = glue_series(glue_series(ga, gb), gc);
                auto right = glue_series(ga, glue_series(gb, gc));
                CHECK(oracle::isomorphic(left, right));
            }
        }
    }
    CHECK_FALSE(oracle::isomorphic(build_widget(WidgetKind::phase_shift()), build_widget(WidgetKind::separator())));
}

TEST_CASE("serialization round trip") {
    for (const auto &kind : catalog) {
        auto g = build_widget(kind);
        CHECK(parse_graph(serialize_graph(g)) == g);
    }
    auto g = parse_graph(serialize_graph(build_widget(WidgetKind::wire(1))));
    CHECK(g.vertex_count() == 2);
    CHECK(g.edges().size() == 1);
    CHECK(g.terminals().size() == 2);
}

TEST_CASE("serialized wire document") {
    auto text = serialize_graph(build_widget(WidgetKind::wire(1)));
    CHECK(text.find("\"vertices\": 2") != std::string::npos);
    CHECK(text.find("\"kind\": \"input\"") != std::string::npos);
    CHECK(text.find("\"kind\": \"output\"") != std::string::npos);
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[0, 0]], "terminals": []})"), GraphError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [[1, 0]], "terminals": []})"), GraphError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "terminals": []})"), ParseError);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": 2, "edges": [], "terminals": [{"name": "a", "vertex": 0, "kind": "sideways"}]})"),
                    GraphError);
    try {
        parse_graph("{\n  \"vertices\": 2,\n  \"edges\": [[0, 1],,]\n}");
        FAIL("no error");
    } catch (const ParseError &e) {
        CHECK(e.line() == 3);
        CHECK(e.column() > 1);
    }
}
