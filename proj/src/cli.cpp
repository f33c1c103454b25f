#include "basketcheck/cli.hpp"

#include "basketcheck/engine.hpp"
#include "basketcheck/pctl.hpp"
#include "basketcheck/prism.hpp"
#include "basketcheck/simulator.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace basketcheck {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ModelError("cannot read '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return buf;
}

// Probabilities keep a decimal point: 1 prints as "1.0".
std::string format_probability(double v) {
    std::string s = format_number(v);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string format_decimal17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::set<std::string> label_names(const Dtmc& dtmc) {
    std::set<std::string> names;
    for (const auto& [name, _] : dtmc.labels) names.insert(name);
    return names;
}

struct CommonOptions {
    std::string model_path;
    std::string engine;  // resolved against BASKETCHECK_ENGINE when empty
    double epsilon = 1e-6;
    std::size_t max_iterations = 1'000'000;
    bool relative = false;
    bool fix_deadlocks = false;
    bool merge_uniform = false;
    std::string format = "text";
    std::string output;

    SolveOptions solve_options() const {
        SolveOptions opts;
        auto method = solve_method_from_name(resolved_engine());
        opts.method = method ? *method : SolveMethod::Power;
        opts.epsilon = epsilon;
        opts.max_iterations = max_iterations;
        opts.convergence = relative ? ConvergenceNorm::Relative : ConvergenceNorm::Absolute;
        return opts;
    }

    std::string resolved_engine() const {
        if (!engine.empty()) return engine;
        if (const char* env = std::getenv("BASKETCHECK_ENGINE")) {
            std::string name(env);
            if (!name.empty()) {
                if (!solve_method_from_name(name)) {
                    throw ModelError("BASKETCHECK_ENGINE is set to unknown engine '" + name +
                                     "'");
                }
                return name;
            }
        }
        return "power";
    }

    Dtmc load_model() const {
        ModelAst ast = parse_model(read_file(model_path));
        BuildOptions build;
        build.fix_deadlocks = fix_deadlocks;
        build.merge_uniform = merge_uniform;
        return build_dtmc(ast, build);
    }

    void emit(const std::string& payload, std::ostream& fallback) const {
        if (output.empty()) {
            fallback << payload;
            return;
        }
        std::ofstream file(output, std::ios::binary);
        if (!file) {
            throw ModelError("cannot write '" + output + "'");
        }
        file << payload;
    }
};

void add_common_options(CLI::App* cmd, CommonOptions& opts, bool with_engine) {
    cmd->add_option("model", opts.model_path, "model file (.pm)")->required();
    if (with_engine) {
        cmd->add_option("--engine", opts.engine, "solver: exact, power, jacobi, gauss-seidel")
            ->check(CLI::IsMember({"exact", "power", "jacobi", "gauss-seidel"}));
        cmd->add_option("--epsilon", opts.epsilon, "iterative convergence threshold")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-iters", opts.max_iterations, "iteration limit")
            ->check(CLI::PositiveNumber);
        cmd->add_flag("--relative", opts.relative, "relative instead of absolute convergence");
    }
    cmd->add_flag("--fix-deadlocks", opts.fix_deadlocks,
                  "add self-loops to states with no enabled command");
    cmd->add_flag("--merge-uniform", opts.merge_uniform,
                  "non-standard: resolve overlapping guards by uniform choice");
    cmd->add_option("--output", opts.output, "write the report to a file instead of stdout");
}

// --- check ------------------------------------------------------------

std::string render_check_text(const std::vector<VerificationResult>& results) {
    std::ostringstream out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const VerificationResult& r = results[i];
        if (i) out << "\n";
        if (!r.is_query) {
            out << "Number of states satisfying " << to_string(r.property) << ": "
                << r.satisfying.count() << "\n";
            out << "Result: " << (*r.verdict ? "true" : "false") << " (" << r.context << ")\n";
        } else if (r.value) {
            out << "Result: " << format_probability(*r.value) << " (" << r.context << ")\n";
        } else {
            out << "Result: [" << format_probability(r.value_min) << ", "
                << format_probability(r.value_max) << "] (" << r.context << ")\n";
        }
    }
    return out.str();
}

json result_to_json(const VerificationResult& r) {
    json j;
    j["property"] = to_string(r.property);
    j["kind"] = r.is_query ? "query" : "bound";
    j["context"] = r.context;
    j["method"] = solve_method_name(r.method);
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
    j["evaluation_states"] = r.eval_states;
    if (!r.is_query) {
        j["verdict"] = *r.verdict;
        j["count"] = r.satisfying.count();
        j["satisfying"] = r.satisfying.indices();
    } else if (r.value) {
        j["value"] = *r.value;
        j["value_decimal"] = format_decimal17(*r.value);
        if (r.value_exact) {
            j["value_exact"] = rational_to_string(*r.value_exact);
        }
    } else {
        j["value_min"] = r.value_min;
        j["value_max"] = r.value_max;
        json values = json::array();
        for (const auto& [state, value] : r.filter_values) {
            values.push_back({{"state", state}, {"value", value}});
        }
        j["values"] = values;
    }
    return j;
}

std::string render_check_csv(const std::vector<VerificationResult>& results) {
    std::ostringstream out;
    out << "property,kind,result,count\n";
    for (const VerificationResult& r : results) {
        out << to_string(r.property) << "," << (r.is_query ? "query" : "bound") << ",";
        if (!r.is_query) {
            out << (*r.verdict ? "true" : "false") << "," << r.satisfying.count();
        } else if (r.value) {
            out << format_number(*r.value) << ",";
        } else {
            out << format_number(r.value_min) << ";" << format_number(r.value_max) << ",";
        }
        out << "\n";
    }
    return out.str();
}

int cmd_check(const CommonOptions& opts, const std::string& inline_prop,
              const std::string& props_path, std::ostream& out, std::ostream& err) {
    Dtmc dtmc = opts.load_model();

    std::vector<Property> properties;
    if (!props_path.empty()) {
        PropertiesFile file = parse_properties_file(read_file(props_path));
        if (!file.ok()) {
            for (const std::string& e : file.errors) {
                err << "error: " << props_path << ": " << e << "\n";
            }
            return 1;
        }
        properties = std::move(file.properties);
    } else {
        properties.push_back(parse_property(inline_prop));
    }

    std::set<std::string> labels = label_names(dtmc);
    std::vector<VerificationResult> results;
    results.reserve(properties.size());
    SolveOptions solve = opts.solve_options();
    for (const Property& p : properties) {
        results.push_back(check_property(dtmc, basketcheck::bind(p, dtmc.space, labels), solve));
    }

    if (opts.format == "json") {
        json j;
        j["model"] = opts.model_path;
        j["engine"] = opts.resolved_engine();
        j["epsilon"] = opts.epsilon;
        json arr = json::array();
        for (const VerificationResult& r : results) arr.push_back(result_to_json(r));
        j["results"] = arr;
        opts.emit(j.dump(2) + "\n", out);
    } else if (opts.format == "csv") {
        opts.emit(render_check_csv(results), out);
    } else {
        opts.emit(render_check_text(results), out);
    }
    return 0;
}

// --- goal extraction for curve/simulate --------------------------------

struct GoalSpec {
    StateSet goal;
    StateIndex from = 0;
    std::string goal_text;
};

GoalSpec resolve_goal(const Dtmc& dtmc, const std::string& text) {
    std::set<std::string> labels = label_names(dtmc);
    GoalSpec spec;

    ExprPtr formula;
    try {
        formula = parse_state_formula(text);
    } catch (const ParseError&) {
        formula = nullptr;
    }
    if (formula) {
        ExprPtr bound = bind_formula(formula, dtmc.space, labels);
        spec.goal = satisfaction_set(dtmc, bound);
        spec.from = dtmc.init_state;
        spec.goal_text = to_string(bound);
        return spec;
    }

    // Not a bare state formula; treat it as a property and take its target
    // (plus the filter state as the start, when present).
    Property property = basketcheck::bind(parse_property(text), dtmc.space, labels);
    spec.goal = satisfaction_set(dtmc, property.path.target);
    spec.goal_text = to_string(property.path.target);
    if (property.filter) {
        StateSet filter_set = satisfaction_set(dtmc, property.filter);
        if (filter_set.count() != 1) {
            throw ModelError("filter must match exactly one start state here, matches " +
                             std::to_string(filter_set.count()));
        }
        spec.from = filter_set.indices().front();
    } else {
        spec.from = dtmc.init_state;
    }
    return spec;
}

// --- curve --------------------------------------------------------------

std::string render_curve_svg(const std::vector<std::pair<std::size_t, double>>& points) {
    const double width = 640, height = 400;
    const double x0 = 50, x1 = width - 30, y0 = height - 50, y1 = 30;
    std::size_t k_max = points.empty() ? 0 : points.back().first;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    svg << "  <text x=\"" << x0 - 10 << "\" y=\"" << y0 + 15 << "\" font-size=\"12\">0</text>\n";
    svg << "  <text x=\"" << x1 - 10 << "\" y=\"" << y0 + 15 << "\" font-size=\"12\">" << k_max
        << "</text>\n";
    svg << "  <text x=\"" << x0 - 25 << "\" y=\"" << y1 + 5 << "\" font-size=\"12\">1</text>\n";
    svg << "  <text x=\"" << x0 - 40 << "\" y=\"" << (y0 + y1) / 2
        << "\" font-size=\"12\">P</text>\n";
    svg << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i) {
        double fx = k_max == 0 ? x0 : x0 + (x1 - x0) * static_cast<double>(points[i].first) /
                                            static_cast<double>(k_max);
        double fy = y0 - (y0 - y1) * points[i].second;
        if (i) svg << " ";
        svg << fx << "," << fy;
    }
    svg << "\"/>\n</svg>\n";
    return svg.str();
}

int cmd_curve(const CommonOptions& opts, const std::string& prop_text, std::size_t k_max,
              bool svg, std::ostream& out) {
    Dtmc dtmc = opts.load_model();
    GoalSpec spec = resolve_goal(dtmc, prop_text);
    auto points = curve(dtmc, spec.goal, spec.from, k_max);

    if (svg) {
        opts.emit(render_curve_svg(points), out);
        return 0;
    }
    if (opts.format == "json") {
        json j;
        j["model"] = opts.model_path;
        j["goal"] = spec.goal_text;
        j["from"] = spec.from;
        json arr = json::array();
        for (const auto& [k, p] : points) arr.push_back({{"step", k}, {"probability", p}});
        j["curve"] = arr;
        opts.emit(j.dump(2) + "\n", out);
        return 0;
    }
    std::ostringstream csv;
    csv << "step,probability\n";
    for (const auto& [k, p] : points) {
        csv << k << "," << format_number(p) << "\n";
    }
    opts.emit(csv.str(), out);
    return 0;
}

// --- simulate -----------------------------------------------------------

int cmd_simulate(const CommonOptions& opts, const std::string& prop_text, std::size_t samples,
                 std::size_t max_steps, std::uint64_t seed, std::ostream& out) {
    Dtmc dtmc = opts.load_model();
    GoalSpec spec = resolve_goal(dtmc, prop_text);
    ReachEstimate est = estimate_reach(dtmc, spec.goal, spec.from, samples, max_steps, seed);

    if (opts.format == "json") {
        json j;
        j["model"] = opts.model_path;
        j["goal"] = spec.goal_text;
        j["start"] = spec.from;
        j["samples"] = est.samples;
        j["hits"] = est.hits;
        j["censored"] = est.censored;
        j["estimate"] = est.estimate;
        j["ci_low"] = est.ci_low;
        j["ci_high"] = est.ci_high;
        j["seed"] = est.seed;
        j["max_steps"] = max_steps;
        opts.emit(j.dump(2) + "\n", out);
        return 0;
    }

    std::ostringstream text;
    text << "Goal: " << spec.goal_text << "\n";
    text << "Start: state " << spec.from << " (" << dtmc.space.describe_state(spec.from)
         << ")\n";
    text << "Samples: " << est.samples << "\n";
    text << "Hits: " << est.hits << "\n";
    text << "Estimate: " << format_probability(est.estimate) << "\n";
    text << "95% interval (Wilson): [" << format_probability(est.ci_low) << ", "
         << format_probability(est.ci_high) << "]\n";
    text << "Censored paths: " << est.censored << "\n";
    text << "Seed: " << est.seed << "\n";
    opts.emit(text.str(), out);
    return 0;
}

// --- graph / info -------------------------------------------------------

int cmd_graph(const CommonOptions& opts, std::ostream& out) {
    Dtmc dtmc = opts.load_model();
    opts.emit(to_dot(dtmc), out);
    return 0;
}

int cmd_info(const CommonOptions& opts, std::ostream& out) {
    Dtmc dtmc = opts.load_model();
    std::vector<std::string> problems = validate(dtmc);

    if (opts.format == "json") {
        json j;
        j["model"] = opts.model_path;
        j["states"] = dtmc.state_count();
        j["transitions"] = dtmc.transition_count();
        j["initial_state"] = dtmc.init_state;
        j["labels"] = json::array();
        for (const auto& [name, set] : dtmc.labels) {
            j["labels"].push_back({{"name", name}, {"states", set.indices()}});
        }
        j["valid"] = problems.empty();
        j["problems"] = problems;
        opts.emit(j.dump(2) + "\n", out);
        return 0;
    }

    std::ostringstream text;
    text << "model: " << opts.model_path << "\n";
    text << "states: " << dtmc.state_count() << "\n";
    text << "transitions: " << dtmc.transition_count() << "\n";
    text << "initial state: " << dtmc.init_state << " ("
         << dtmc.space.describe_state(dtmc.init_state) << ")\n";
    text << "labels: " << dtmc.labels.size() << "\n";
    if (problems.empty()) {
        text << "validation: ok\n";
    } else {
        text << "validation: FAILED\n";
        for (const std::string& p : problems) text << "  " << p << "\n";
    }
    opts.emit(text.str(), out);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"basketcheck: a small probabilistic model checker for DTMCs"};
    app.require_subcommand(1);

    CommonOptions check_opts, curve_opts, sim_opts, graph_opts, info_opts;
    std::string inline_prop, props_path, curve_prop, sim_prop;
    std::size_t k_max = 100;
    bool svg = false;
    std::size_t samples = 10'000;
    std::size_t max_steps = 10'000;
    std::uint64_t seed = 0;

    CLI::App* check = app.add_subcommand("check", "verify properties against a model");
    add_common_options(check, check_opts, true);
    check->add_option("--format", check_opts.format, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    auto* prop_group = check->add_option_group("properties");
    prop_group->add_option("--prop", inline_prop, "one property, inline");
    prop_group->add_option("--props", props_path, "property file (.pctl)");
    prop_group->require_option(1);

    CLI::App* curve_cmd = app.add_subcommand("curve", "bounded reachability as a CSV curve");
    add_common_options(curve_cmd, curve_opts, false);
    curve_cmd->add_option("--prop", curve_prop, "goal state formula, or a property whose "
                                                "target (and filter state) to use")
        ->required();
    curve_cmd->add_option("--k-max", k_max, "largest step bound (rows k=0..k-max)");
    curve_cmd->add_flag("--svg", svg, "emit a minimal SVG line chart instead of CSV");
    curve_cmd->add_option("--format", curve_opts.format, "csv (default) or json")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo reachability estimate");
    add_common_options(simulate, sim_opts, false);
    simulate->add_option("--prop", sim_prop, "goal state formula, or a property whose target "
                                             "(and filter state) to use")
        ->required();
    simulate->add_option("--samples", samples, "number of sampled paths")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--max-steps", max_steps, "per-path step limit");
    simulate->add_option("--seed", seed, "base seed for the replication streams");
    simulate->add_option("--format", sim_opts.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* graph = app.add_subcommand("graph", "export the chain as a DOT digraph");
    add_common_options(graph, graph_opts, false);

    CLI::App* info = app.add_subcommand("info", "model summary and validation status");
    add_common_options(info, info_opts, false);
    info->add_option("--format", info_opts.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (check->parsed()) {
            return cmd_check(check_opts, inline_prop, props_path, out, err);
        }
        if (curve_cmd->parsed()) {
            return cmd_curve(curve_opts, curve_prop, k_max, svg, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(sim_opts, sim_prop, samples, max_steps, seed, out);
        }
        if (graph->parsed()) {
            return cmd_graph(graph_opts, out);
        }
        if (info->parsed()) {
            return cmd_info(info_opts, out);
        }
        err << "error: no subcommand given\n";
        return 1;
    } catch (const SolveError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("basketcheck");
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace basketcheck
