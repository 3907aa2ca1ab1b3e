#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qwalk/bound_states.hpp"
#include "qwalk/circuit.hpp"
#include "qwalk/compose.hpp"
#include "qwalk/error.hpp"
#include "qwalk/evolve.hpp"
#include "qwalk/graph.hpp"
#include "qwalk/machine.hpp"
#include "qwalk/scattering.hpp"
#include "qwalk/transfer.hpp"
#include "qwalk/widgets.hpp"

namespace {

using namespace qwalk;

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Writes to the file, or to stdout when the path is empty or "-".
void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

std::string number(double value) {
    std::ostringstream out;
    out << std::setprecision(15) << value;
    return out.str();
}

WidgetKind widget_kind(const std::string &name) {
    auto kind = parse_widget_kind(name);
    if (!kind) throw Error("unknown widget '" + name + "' (wire[:L], cnot, phase, basis, filter, separator)");
    return *kind;
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

/// kmin + (kmax - kmin) i / points for i = 0..points.
std::vector<double> momentum_grid(double kmin, double kmax, int points) {
    if (points < 2) throw Error("--points must be at least 2");
    std::vector<double> grid;
    for (int i = 0; i <= points; ++i) grid.push_back(kmin + (kmax - kmin) * i / points);
    return grid;
}

void warn_skip(double k, const std::string &reason) {
    std::cerr << "warning: skipping k = " << number(k) << ": " << reason << "\n";
}

struct Channel {
    std::string from;
    std::string to;
    std::string label() const { return from + ":" + to; }
};

std::vector<Channel> parse_channels(const std::string &text) {
    std::vector<Channel> channels;
    for (const auto &item : split_list(text)) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("channel '" + item + "' is not of the form from:to");
        channels.push_back({item.substr(0, colon), item.substr(colon + 1)});
    }
    return channels;
}

std::vector<Channel> default_channels(const GraphTopology &graph) {
    std::vector<Channel> channels;
    auto inputs = graph.terminal_names(TerminalKind::input);
    std::vector<std::string> targets;
    for (const auto &t : graph.terminals()) {
        if (t.kind != TerminalKind::input) targets.push_back(t.name);
    }
    for (const auto &from : inputs) {
        for (const auto &to : targets) channels.push_back({from, to});
    }
    if (channels.empty()) {
        for (const auto &a : graph.terminals()) {
            for (const auto &b : graph.terminals()) {
                if (a.name != b.name) channels.push_back({a.name, b.name});
            }
        }
    }
    return channels;
}

std::string sweep_table(const GraphTopology &graph, const std::vector<Channel> &channels, PhaseReference reference,
                        const std::vector<double> &grid) {
    for (const auto &c : channels) {
        graph.terminal(c.from);
        graph.terminal(c.to);
    }
    std::ostringstream out;
    out << "k";
    for (const auto &c : channels) out << "\tre[" << c.label() << "]\tim[" << c.label() << "]\tabs2[" << c.label() << "]";
    out << "\n";
    for (double k : grid) {
        if (!Momentum::admissible(k)) {
            warn_skip(k, "outside the band guard");
            continue;
        }
        SMatrix s;
        try {
            s = s_matrix(graph, Momentum(k));
        } catch (const IllConditionedError &e) {
            warn_skip(k, e.what());
            continue;
        }
        const Complex factor = std::exp(-imag_unit * (k * reference.shift));
        out << number(k);
        for (const auto &c : channels) {
            Complex value = s(c.from, c.to) * factor;
            out << '\t' << number(value.real()) << '\t' << number(value.imag()) << '\t' << number(std::norm(value));
        }
        out << "\n";
    }
    return out.str();
}

std::string transfer_table(const Decoration &decoration, int m_d, const std::vector<double> &grid) {
    std::ostringstream out;
    out << "k\tre[y]\tim[y]\tlambda_max\tlambda_min\tabs[T]\tabs2[T]\n";
    for (double k : grid) {
        if (!Momentum::admissible(k)) {
            warn_skip(k, "outside the band guard");
            continue;
        }
        try {
            auto chain = chain_transmission(decoration, m_d, Momentum(k));
            Complex y = decoration_ratio(decoration, Momentum(k));
            out << number(k) << '\t' << number(y.real()) << '\t' << number(y.imag()) << '\t'
                << number(chain.eigenvalue_magnitudes[0]) << '\t' << number(chain.eigenvalue_magnitudes[1]) << '\t'
                << number(std::abs(chain.transmission)) << '\t' << number(std::norm(chain.transmission)) << "\n";
        } catch (const IllConditionedError &e) {
            warn_skip(k, e.what());
        }
    }
    return out.str();
}

struct SourceOptions {
    std::string widget;
    std::string graph;

    void add(CLI::App *cmd) {
        auto *w = cmd->add_option("--widget", widget, "Catalog widget: wire[:L], cnot, phase, basis, filter, separator");
        auto *g = cmd->add_option("--graph", graph, "Graph file (JSON)");
        w->excludes(g);
    }

    GraphTopology load() const {
        if (!widget.empty()) return build_widget(widget_kind(widget));
        if (!graph.empty()) return parse_graph(read_file(graph));
        throw Error("one of --widget or --graph is required");
    }
};

int cmd_sweep(const SourceOptions &source, const std::string &channel_text, double kmin, double kmax, int points,
              bool core, const std::string &output) {
    GraphTopology graph = source.load();
    PhaseReference reference;
    if (core) {
        if (source.widget.empty()) throw Error("--core needs --widget");
        reference = PhaseReference::core(widget_kind(source.widget).type);
    }
    auto channels = channel_text.empty() ? default_channels(graph) : parse_channels(channel_text);
    emit(output, sweep_table(graph, channels, reference, momentum_grid(kmin, kmax, points)));
    return 0;
}

Decoration load_decoration(const std::string &path, int attach) {
    if (path.empty()) return filter_decoration();
    if (attach < 0) throw Error("--attach is required with --decoration");
    return {parse_graph(read_file(path)), static_cast<VertexId>(attach)};
}

int cmd_transfer(int m_d, double kmin, double kmax, int points, const std::string &decoration, int attach,
                 const std::string &output) {
    if (m_d < 1) throw Error("--md must be at least 1");
    emit(output, transfer_table(load_decoration(decoration, attach), m_d, momentum_grid(kmin, kmax, points)));
    return 0;
}

int cmd_bound(const SourceOptions &source, double step, const std::string &output) {
    GraphTopology graph = source.load();
    BoundStateSearch search;
    search.grid_step = step;
    auto states = find_bound_states(graph, search);
    std::ostringstream out;
    out << "sign\tkappa\tenergy\tresidual";
    for (const auto &t : graph.terminals()) out << "\tB[" << t.name << "]";
    out << "\n";
    for (const auto &s : states) {
        out << (s.sign > 0 ? "+" : "-") << '\t' << number(s.kappa) << '\t' << number(s.energy) << '\t'
            << number(s.residual);
        for (Eigen::Index j = 0; j < s.lead_amplitudes.size(); ++j) out << '\t' << number(s.lead_amplitudes(j));
        out << "\n";
    }
    emit(output, out.str());
    return 0;
}

double block_deviation(const ChannelBlock &a, const ChannelBlock &b) {
    return std::max({(a.forward - b.forward).cwiseAbs().maxCoeff(), (a.reflection - b.reflection).cwiseAbs().maxCoeff(),
                     (a.backward - b.backward).cwiseAbs().maxCoeff(),
                     (a.back_reflection - b.back_reflection).cwiseAbs().maxCoeff()});
}

int cmd_compose_check(const std::string &widget_list, std::optional<double> k_value, int points, double tolerance,
                      const std::string &output) {
    std::vector<WidgetKind> kinds;
    for (const auto &name : split_list(widget_list)) kinds.push_back(widget_kind(name));
    if (kinds.size() < 2) throw Error("--widgets needs at least two widgets");
    int qubits = 0;
    for (const auto &kind : kinds) qubits = std::max(qubits, widget_qubits(kind.type));
    std::vector<GraphTopology> parts;
    for (const auto &kind : kinds) parts.push_back(widget_layer(kind, qubits));
    GraphTopology glued = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) glued = glue_series(glued, parts[i]);

    std::vector<double> grid;
    if (k_value) {
        grid.push_back(*k_value);
    } else {
        for (int i = 0; i < points; ++i) grid.push_back(-pi + (i + 0.5) * pi / points);
    }

    std::ostringstream out;
    out << "k\tdeviation\treflection_norm\treflection_slack\tproduct_slack\n";
    double worst = 0;
    for (double k : grid) {
        Momentum momentum(k);
        ChannelBlock composed = extract_block(parts.front(), momentum);
        std::optional<double> reflection_slack, product_slack;
        try {
            for (std::size_t i = 1; i < parts.size(); ++i) {
                ChannelBlock next = extract_block(parts[i], momentum);
                if (parts.size() == 2) {
                    const double d1 = reflection_scale(composed), d2 = reflection_scale(next);
                    ChannelBlock pair = compose_blocks(composed, next);
                    reflection_slack = d1 + (1 + d1 * d2) * d2 - spectral_norm(pair.reflection);
                    product_slack = d1 * d2 * (1 + d1 * d2) - spectral_norm(pair.forward - composed.forward * next.forward);
                    composed = pair;
                } else {
                    composed = compose_blocks(composed, next);
                }
            }
        } catch (const NonConvergentComposition &e) {
            warn_skip(k, e.what());
            continue;
        }
        const double deviation = block_deviation(composed, extract_block(glued, momentum));
        worst = std::max(worst, deviation);
        out << number(k) << '\t' << number(deviation) << '\t' << number(spectral_norm(composed.reflection)) << '\t'
            << (reflection_slack ? number(*reflection_slack) : "-") << '\t'
            << (product_slack ? number(*product_slack) : "-") << "\n";
    }
    out << "# max_deviation\t" << number(worst) << "\n";
    emit(output, out.str());
    if (worst > tolerance) {
        std::cerr << "error: composition deviates from the glued graph by " << number(worst) << " > "
                  << number(tolerance) << "\n";
        return 1;
    }
    return 0;
}

struct EvolveOptions {
    std::string graph;
    std::size_t truncation = 300;
    int vertex = -1;
    std::string lead;
    int x = 1;
    double t = 0;
    std::optional<double> width;
    double momentum = design_momentum;
    std::string method = "auto";
    std::string output;
};

int cmd_evolve(const EvolveOptions &o) {
    if (o.graph.empty()) throw Error("--graph is required");
    GraphTopology open = parse_graph(read_file(o.graph));
    TruncatedGraph finite = truncate_leads(open, o.truncation);
    const auto n = static_cast<Eigen::Index>(finite.graph.vertex_count());

    ComplexVector psi;
    if (o.width) {
        if (o.lead.empty()) throw Error("a packet needs --lead");
        psi = make_packet(finite, {o.lead, o.x, *o.width, o.momentum});
    } else {
        psi = ComplexVector::Zero(n);
        if (!o.lead.empty()) {
            psi(finite.vertex_at(o.lead, static_cast<std::size_t>(o.x))) = 1.0;
        } else {
            if (o.vertex < 0 || o.vertex >= n) throw Error("--vertex or --lead is required");
            psi(o.vertex) = 1.0;
        }
    }
    psi = evolve_state(finite.graph, psi, o.t, evolution_method_from_string(o.method));

    std::vector<std::pair<const std::string *, std::size_t>> place(static_cast<std::size_t>(n), {nullptr, 0});
    for (const auto &lead : finite.leads) {
        for (std::size_t x = 1; x <= lead.length(); ++x) place[lead.vertices[x - 1]] = {&lead.terminal, x};
    }
    std::ostringstream out;
    out << "vertex\twire\tposition\tre\tim\tprobability\n";
    for (Eigen::Index v = 0; v < n; ++v) {
        const auto &p = place[static_cast<std::size_t>(v)];
        out << v << '\t' << (p.first ? *p.first : std::string("core")) << '\t'
            << (p.first ? std::to_string(p.second) : std::string("-")) << '\t' << number(psi(v).real()) << '\t'
            << number(psi(v).imag()) << '\t' << number(std::norm(psi(v))) << "\n";
    }
    emit(o.output, out.str());
    return 0;
}

struct RunOptions {
    std::string circuit;
    std::optional<int> qubits;
    int x = 400;
    std::optional<int> filters;
    std::optional<std::size_t> truncation;
    bool allow_unsound = false;
    std::string mode = "vertex";
    double width = 25;
    double momentum = design_momentum;
    std::optional<int> center;
    std::string method = "auto";
    std::string report;
    std::string dump;
    std::string graph_out;
};

int cmd_run(const RunOptions &o) {
    if (o.circuit.empty()) throw Error("--circuit is required");
    CircuitDescription circuit = parse_circuit(read_file(o.circuit), o.qubits);
    AssemblyOptions assembly;
    assembly.start_offset = o.x;
    assembly.filter_count = o.filters;
    assembly.truncation = o.truncation;
    assembly.allow_unsound = o.allow_unsound;
    CompiledMachine machine = assemble_computer(circuit, assembly);
    if (machine.unsound) std::cerr << "warning: unsound truncation, results may see the lead ends\n";

    InputMode input = VertexInput{};
    if (o.mode == "packet") {
        input = PacketInput{o.width, o.momentum, o.center};
    } else if (o.mode != "vertex") {
        throw Error("unknown --mode '" + o.mode + "' (vertex or packet)");
    }
    RunReport report = run_computer(machine, input, evolution_method_from_string(o.method));
    emit(o.report, report_to_json(report));
    if (!o.dump.empty()) emit(o.dump, distribution_table(machine, report));
    if (!o.graph_out.empty()) emit(o.graph_out, serialize_graph(machine.open_graph));
    return 0;
}

int cmd_figures(const std::string &directory, int points, int m_d) {
    std::filesystem::create_directories(directory);
    const auto grid = momentum_grid(-pi, 0.0, points);
    auto path = [&](const char *name) { return (std::filesystem::path(directory) / name).string(); };
    auto widget_sweep = [&](WidgetKind kind, std::vector<Channel> channels) {
        return sweep_table(build_widget(kind), channels, PhaseReference::core(kind.type), grid);
    };
    emit(path("phase_shift.tsv"), widget_sweep(WidgetKind::phase_shift(), {{"in", "out"}}));
    emit(path("basis_change.tsv"), widget_sweep(WidgetKind::basis_change(), {{"0_in", "0_out"}, {"0_in", "1_out"}}));
    emit(path("filter.tsv"), widget_sweep(WidgetKind::filter(), {{"in", "out"}, {"in", "drain"}}));
    emit(path("separator.tsv"), widget_sweep(WidgetKind::separator(), {{"in", "out"}}));
    emit(path("transfer_eigenvalues.tsv"), transfer_table(filter_decoration(), m_d, grid));
    return 0;
}

/// Flat `key = value` lines become `--key=value` arguments placed before the
/// command-line ones, so explicit flags win.
std::vector<std::string> config_arguments(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read config file '" + path + "'");
    std::vector<std::string> args;
    for (const auto &item : CLI::ConfigINI().from_config(in)) {
        if (!item.parents.empty()) throw Error("config file '" + path + "' must be flat (no sections)");
        if (item.inputs.size() != 1) throw Error("config key '" + item.name + "' needs exactly one value");
        args.push_back("--" + item.name + "=" + item.inputs.front());
    }
    return args;
}

/// Arguments in CLI11's reversed order with any `--config FILE` expanded in place.
std::vector<std::string> expand_config(int argc, char **argv) {
    std::vector<std::string> args;
    std::vector<std::string> from_config;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) {
            from_config = config_arguments(argv[++i]);
        } else if (arg.rfind("--config=", 0) == 0) {
            from_config = config_arguments(arg.substr(9));
        } else {
            args.push_back(arg);
        }
    }
    if (!from_config.empty() && !args.empty()) {
        args.insert(args.begin() + 1, from_config.begin(), from_config.end());
    }
    std::reverse(args.begin(), args.end());
    return args;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum-walk circuit compiler and scattering analysis"};
    app.set_version_flag("--version", "qwalk 0.1.0");
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.footer("Every command also accepts --config FILE with flat `key = value` lines naming its long options.");

    double kmin = -pi, kmax = 0.0;
    int points = 500;
    std::string output;

    SourceOptions sweep_source;
    std::string channels;
    bool core = false;
    auto *sweep = app.add_subcommand("sweep", "Scattering coefficients over a momentum grid");
    sweep_source.add(sweep);
    sweep->add_option("--channels", channels, "Comma-separated from:to pairs (default: every input to every other terminal)");
    sweep->add_option("--kmin", kmin, "Lower end of the grid")->capture_default_str();
    sweep->add_option("--kmax", kmax, "Upper end of the grid")->capture_default_str();
    sweep->add_option("--points", points, "Grid intervals; points + 1 rows")->capture_default_str();
    sweep->add_flag("--core", core, "Measure phases at the widget core instead of its terminals");
    sweep->add_option("-o,--output", output, "Output file (default stdout)");

    int m_d = 10;
    std::string decoration;
    int attach = -1;
    auto *transfer = app.add_subcommand("transfer", "Filter-chain transmission and transfer-matrix eigenvalues");
    transfer->add_option("--md", m_d, "Number of decorated vertices")->capture_default_str();
    transfer->add_option("--kmin", kmin)->capture_default_str();
    transfer->add_option("--kmax", kmax)->capture_default_str();
    transfer->add_option("--points", points)->capture_default_str();
    transfer->add_option("--decoration", decoration, "Decoration graph file (default: the filter decoration)");
    transfer->add_option("--attach", attach, "Attachment vertex of the decoration");
    transfer->add_option("-o,--output", output);

    SourceOptions bound_source;
    double bound_step = BoundStateSearch{}.grid_step;
    auto *bound = app.add_subcommand("bound", "Bound states of a graph with leads");
    bound_source.add(bound);
    bound->add_option("--step", bound_step, "Scan step in kappa")->capture_default_str();
    bound->add_option("-o,--output", output);

    std::string widget_list;
    std::optional<double> k_value;
    int compose_points = 100;
    double tolerance = 1e-8;
    auto *compose = app.add_subcommand("compose-check", "Compare block composition with the glued graph");
    compose->add_option("--widgets", widget_list, "Comma-separated widgets composed left to right")->required();
    compose->add_option("--k", k_value, "Single momentum (default: a midpoint grid)");
    compose->add_option("--points", compose_points, "Grid size when --k is absent")->capture_default_str();
    compose->add_option("--tolerance", tolerance, "Exit with status 1 above this deviation")->capture_default_str();
    compose->add_option("-o,--output", output);

    EvolveOptions evolve_options;
    auto *evolve = app.add_subcommand("evolve", "Evolve a vertex or packet state on a truncated graph");
    evolve->add_option("--graph", evolve_options.graph, "Graph file; its terminals get leads")->required();
    evolve->add_option("--truncation", evolve_options.truncation, "Lead length")->capture_default_str();
    evolve->add_option("--vertex", evolve_options.vertex, "Start vertex id");
    evolve->add_option("--lead", evolve_options.lead, "Start on this lead");
    evolve->add_option("--x", evolve_options.x, "Position on the lead (packet centre with --width)")->capture_default_str();
    evolve->add_option("--t", evolve_options.t, "Evolution time")->required();
    evolve->add_option("--width", evolve_options.width, "Gaussian packet width");
    evolve->add_option("--momentum", evolve_options.momentum, "Packet momentum")->capture_default_str();
    evolve->add_option("--method", evolve_options.method, "auto, dense or chebyshev")->capture_default_str();
    evolve->add_option("-o,--output", evolve_options.output);

    RunOptions run_options;
    auto *run = app.add_subcommand("run", "Compile, assemble and run a circuit");
    run->add_option("--circuit", run_options.circuit, "Circuit file")->required();
    run->add_option("--qubits", run_options.qubits, "Qubit count (default: largest index used)");
    run->add_option("--x", run_options.x, "Start offset on the input wire")->capture_default_str();
    run->add_option("--md", run_options.filters, "Filter count (default 2 ceil(log2(m + 2)))");
    run->add_option("--truncation", run_options.truncation, "Lead length (default ceil(2(x + l)))");
    run->add_flag("--allow-unsound", run_options.allow_unsound, "Accept a truncation below 2(x + l)");
    run->add_option("--mode", run_options.mode, "vertex or packet")->capture_default_str();
    run->add_option("--width", run_options.width, "Packet width")->capture_default_str();
    run->add_option("--momentum", run_options.momentum, "Packet momentum")->capture_default_str();
    run->add_option("--center", run_options.center, "Packet centre (default: x)");
    run->add_option("--method", run_options.method, "auto, dense or chebyshev")->capture_default_str();
    run->add_option("--report", run_options.report, "Report file (default stdout)");
    run->add_option("--dump", run_options.dump, "Vertex distribution table");
    run->add_option("--graph-out", run_options.graph_out, "Write the machine graph with open leads");

    std::string figure_dir = "figures";
    int figure_points = 500;
    int figure_md = 10;
    auto *figures = app.add_subcommand("figures", "Write the widget and transfer-matrix datasets");
    figures->add_option("--out-dir", figure_dir, "Output directory")->capture_default_str();
    figures->add_option("--points", figure_points)->capture_default_str();
    figures->add_option("--md", figure_md, "Filter count for the transfer dataset")->capture_default_str();

    try {
        app.parse(expand_config(argc, argv));
    } catch (const CLI::ParseError &e) {
        return app.exit(e);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*sweep) return cmd_sweep(sweep_source, channels, kmin, kmax, points, core, output);
        if (*transfer) return cmd_transfer(m_d, kmin, kmax, points, decoration, attach, output);
        if (*bound) return cmd_bound(bound_source, bound_step, output);
        if (*compose) return cmd_compose_check(widget_list, k_value, compose_points, tolerance, output);
        if (*evolve) return cmd_evolve(evolve_options);
        if (*run) return cmd_run(run_options);
        if (*figures) return cmd_figures(figure_dir, figure_points, figure_md);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
