#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ancestral.hpp"

namespace ancestral::cli {

/// A path that cannot be opened; mapped to exit code 2.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_unreadable = 2;

struct Common {
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string output;
    int max_parents = 5;
    int max_iterations = 1000;
    std::string regularizer = "fnml";
    int max_subset = 0;
    std::string units = "nats";
    int jobs = 1;
};

namespace detail {

inline std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot read '" + path + "'");
    return in;
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw FileError("cannot write '" + path + "'");
    return out;
}

inline CategoricalTable read_table(const std::string& path) {
    auto in = open_in(path);
    return load_table(in);
}

inline MixedGraph read_graph_file(const std::string& path) {
    auto in = open_in(path);
    return read_graph(in);
}

inline DiscreteNetwork read_network(const std::string& path) {
    auto in = open_in(path);
    return parse_network(in);
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    if (ancestral::detail::trim(s).empty()) return out;
    for (auto& p : ancestral::detail::split(s, ',')) out.push_back(p);
    return out;
}

inline double in_units(double nats, const Common& c) { return c.units == "bits" ? nats / std::log(2.0) : nats; }

inline std::string set_text(const MixedGraph& g, VertexSet s) {
    std::string out = "{";
    bool first = true;
    for (int v : s.members()) {
        out += (first ? "" : ",") + g.name(v);
        first = false;
    }
    return out + "}";
}

inline std::string path_text(const MixedGraph& g, const std::vector<int>& path) {
    std::string out = g.name(path.front());
    for (std::size_t i = 1; i < path.size(); ++i) {
        const int a = path[i - 1], b = path[i];
        out += " " + ancestral::detail::edge_token(*g.mark_at(a, b), *g.mark_at(b, a)) + " " + g.name(b);
    }
    return out;
}

inline SearchOptions search_options(const Common& c) {
    if (c.regularizer != "fnml" && c.regularizer != "bic")
        throw ContractError("learn supports --regularizer fnml or bic");
    SearchOptions o;
    o.max_parents = c.max_parents;
    o.max_iterations = c.max_iterations;
    o.penalty = c.regularizer == "bic" ? Penalty::bic : Penalty::fnml;
    o.jobs = c.jobs;
    return o;
}

inline std::vector<std::string> hidden_names(const DiscreteNetwork& net, const std::string& list, double fraction,
                                             bool fraction_given, std::uint64_t seed) {
    if (!list.empty() && fraction_given) throw ContractError("use either --hide or --hide-fraction, not both");
    if (fraction_given) {
        std::vector<std::string> out;
        for (int v : choose_hidden(net.dag(), fraction, split_seed(seed, 0))) out.push_back(net.names[v]);
        return out;
    }
    auto out = split_list(list);
    for (const auto& h : out)
        if (net.index_of(h) < 0) throw ContractError("unknown variable '" + h + "' in --hide");
    if (out.size() >= static_cast<std::size_t>(net.size())) throw ContractError("cannot hide every variable");
    return out;
}

inline VertexSet observed_set(const DiscreteNetwork& net, const std::vector<std::string>& hidden) {
    VertexSet s = VertexSet::range(net.size());
    for (const auto& h : hidden) s.erase(net.index_of(h));
    return s;
}

inline std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

inline nlohmann::json report_json(const SearchReport& r, const MixedGraph& g, const Common& c) {
    nlohmann::json j;
    j["seed"] = c.seed;
    j["termination"] = to_string(r.termination);
    j["iterations"] = r.iterations;
    j["units"] = c.units;
    nlohmann::json traj = nlohmann::json::array();
    for (double t : r.trajectory) traj.push_back(in_units(t, c));
    j["trajectory"] = traj;
    nlohmann::json removed = nlohmann::json::array();
    for (auto [a, b] : r.removed) removed.push_back({g.name(a), g.name(b)});
    j["removed_edges"] = removed;
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : r.edge_scores) {
        nlohmann::json x;
        x["x"] = g.name(e.a);
        x["y"] = g.name(e.b);
        x["orientation"] = to_string(e.current);
        for (int o = 0; o < 3; ++o) x[to_string(static_cast<Orientation>(o))] = in_units(e.scores[o], c);
        edges.push_back(x);
    }
    j["edge_scores"] = edges;
    j["repairs"] = r.repairs;
    j["warnings"] = r.warnings;
    return j;
}

}  // namespace detail

/// Runs one command line. Human-readable output goes to `out`, diagnostics to
/// `err`; structured results are written to files only.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Learning ancestral graphs from categorical data"};
    app.require_subcommand(1);
    Common c;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", c.seed, "random seed (drawn and echoed when absent)");
        sub->add_option("-o,--output", c.output, "output file");
        sub->add_option("--max-parents", c.max_parents, "largest candidate set searched exhaustively in step 1")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--max-iterations", c.max_iterations, "step 2 iteration limit")->check(CLI::NonNegativeNumber);
        sub->add_option("--regularizer", c.regularizer, "fnml or bic")
            ->check(CLI::IsMember({"fnml", "bic", "none"}));
        sub->add_option("--max-subset", c.max_subset, "largest ac-connected subset scored (0: all)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--units", c.units, "nats or bits")->check(CLI::IsMember({"nats", "bits"}));
        sub->add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    std::string data_path, graph_path, graph2_path, network_path, initial_path, report_path, truth_path;
    std::string x_name, y_name, given, criterion = "m", hide_list, sizes_text = "1000", fractions_text = "0";
    bool ledger = false, oracle_bn = false, pag = false, bootstrap = false, timing = false;
    double hide_fraction = 0.0;
    std::size_t n_samples = 1000;
    int replicates = 1, skeleton_order = 2;

    auto* learn = app.add_subcommand("learn", "learn an ancestral graph from a dataset");
    learn->add_option("data", data_path, "dataset (CSV with header)")->required();
    learn->add_option("--initial", initial_path, "starting graph instead of the built-in skeleton");
    learn->add_option("--report", report_path, "report file (default: <output>.report.json)");
    learn->add_option("--skeleton-order", skeleton_order, "largest conditioning set for skeleton pruning")
        ->check(CLI::NonNegativeNumber);
    add_common(learn);

    auto* score = app.add_subcommand("score", "global likelihood score of a graph");
    score->add_option("data", data_path)->required();
    score->add_option("graph", graph_path)->required();
    score->add_flag("--ledger", ledger, "list every ac-connected subset with its sign and information");
    score->add_flag("--oracle-bn", oracle_bn, "DAG conditional-entropy sum instead of the decomposition");
    add_common(score);

    auto* equiv = app.add_subcommand("equiv", "Markov equivalence of two graphs");
    equiv->add_option("graph1", graph_path)->required();
    equiv->add_option("graph2", graph2_path)->required();
    add_common(equiv);

    auto* sep = app.add_subcommand("separation", "separation query");
    sep->add_option("graph", graph_path)->required();
    sep->add_option("x", x_name)->required();
    sep->add_option("y", y_name)->required();
    sep->add_option("--given", given, "comma-separated conditioning set");
    sep->add_option("--criterion", criterion, "m, m-prime or ac")->check(CLI::IsMember({"m", "m-prime", "ac"}));
    add_common(sep);

    auto* simulate = app.add_subcommand("simulate", "sample a dataset from a network");
    simulate->add_option("network", network_path)->required();
    simulate->add_option("-n,--samples", n_samples, "sample size")->check(CLI::PositiveNumber);
    auto* sim_frac = simulate->add_option("--hide-fraction", hide_fraction, "fraction of variables to hide");
    simulate->add_option("--hide", hide_list, "comma-separated variables to hide");
    simulate->add_option("--truth", truth_path, "truth graph file (default: <output>.truth.graph)");
    add_common(simulate);

    auto* project = app.add_subcommand("project", "latent projection of a network's graph");
    project->add_option("network", network_path)->required();
    auto* proj_frac = project->add_option("--hide-fraction", hide_fraction);
    project->add_option("--hide", hide_list);
    project->add_flag("--pag", pag, "replace marks that vary across the equivalence class by circles");
    add_common(project);

    auto* bench = app.add_subcommand("benchmark", "sample, hide, learn and grade repeatedly");
    bench->add_option("network", network_path)->required();
    bench->add_option("-n,--samples", sizes_text, "comma-separated sample sizes");
    bench->add_option("--hide-fractions", fractions_text, "comma-separated hide fractions");
    bench->add_option("--replicates", replicates)->check(CLI::PositiveNumber);
    bench->add_flag("--bootstrap", bootstrap, "resample rows with replacement in every replicate");
    bench->add_flag("--timing", timing, "record wall-clock runtime per replicate");
    add_common(bench);

    std::vector<std::string> argv_store{"ancestral"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }

    // Seeds are always materialized and echoed.
    auto* active = app.get_subcommands().front();
    c.seed_given = active->count("--seed") > 0;
    if (!c.seed_given) c.seed = std::random_device{}() ^ (static_cast<std::uint64_t>(std::random_device{}()) << 32);

    try {
        if (active == learn) {
            const auto table = detail::read_table(data_path);
            auto options = detail::search_options(c);
            options.skeleton_order = skeleton_order;
            if (!initial_path.empty())
                options.initial = align_to_names(detail::read_graph_file(initial_path), table.names());
            const auto report = ancestral::learn(table, options);
            out << "seed: " << c.seed << '\n';
            out << "termination: " << to_string(report.termination) << " after " << report.iterations
                << " step-2 moves\n";
            for (const auto& w : report.warnings) err << "warning: " << w << '\n';
            for (const auto& r : report.repairs) out << "repaired " << r << '\n';
            if (c.output.empty()) {
                write_graph(out, report.graph);
            } else {
                auto f = detail::open_out(c.output);
                write_graph(f, report.graph);
                out << "graph: " << c.output << '\n';
            }
            const std::string rp = !report_path.empty() ? report_path : (c.output.empty() ? "" : c.output + ".report.json");
            if (!rp.empty()) {
                auto f = detail::open_out(rp);
                f << detail::report_json(report, report.graph, c).dump(2) << '\n';
                out << "report: " << rp << '\n';
            }
            return exit_ok;
        }

        if (active == score) {
            const auto table = detail::read_table(data_path);
            const auto g = align_to_names(detail::read_graph_file(graph_path), table.names());
            const Scorer scorer(table);
            out << "seed: " << c.seed << '\n';
            out << std::setprecision(15);
            if (oracle_bn) {
                out << "score: " << detail::in_units(scorer.dag_conditional_entropy_sum(g), c) << ' ' << c.units
                    << '\n';
                return exit_ok;
            }
            if (g.has_undirected())
                throw ContractError("the likelihood decomposition is defined for ancestral graphs with directed and "
                                    "bidirected edges only; orient undirected edges first");
            GlobalScoreOptions go;
            go.regularizer = c.regularizer == "bic" ? Regularizer::bic : Regularizer::none;
            go.max_subset = c.max_subset;
            go.keep_ledger = ledger || !c.output.empty();
            const auto s = scorer.global_score(g, go);
            out << "score: " << detail::in_units(s.value, c) << ' ' << c.units << '\n';
            out << "subsets: " << s.subset_count << '\n';
            if (ledger)
                for (const auto& e : s.ledger)
                    out << detail::set_text(g, e.subset) << ' ' << (e.sign > 0 ? '+' : '-') << ' '
                        << detail::in_units(e.information, c) << '\n';
            if (!c.output.empty()) {
                nlohmann::json j;
                j["seed"] = c.seed;
                j["score"] = detail::in_units(s.value, c);
                j["units"] = c.units;
                j["subsets"] = s.subset_count;
                nlohmann::json l = nlohmann::json::array();
                for (const auto& e : s.ledger) {
                    std::vector<std::string> names;
                    for (int v : e.subset.members()) names.push_back(g.name(v));
                    l.push_back({{"subset", names}, {"sign", e.sign}, {"information", detail::in_units(e.information, c)}});
                }
                j["ledger"] = l;
                auto f = detail::open_out(c.output);
                f << j.dump(2) << '\n';
            }
            return exit_ok;
        }

        if (active == equiv) {
            const auto a = detail::read_graph_file(graph_path);
            auto b = detail::read_graph_file(graph2_path);
            b = align_to_names(b, a.names());
            const auto diff = ac_family_difference(a, b);
            out << (diff.empty() ? "equivalent" : "not equivalent") << '\n';
            for (VertexSet s : diff) out << detail::set_text(a, s) << '\n';
            return exit_ok;
        }

        if (active == sep) {
            const auto g = detail::read_graph_file(graph_path);
            auto index = [&](const std::string& name) {
                const int v = g.index_of(name);
                if (v < 0) throw ContractError("unknown vertex '" + name + "'");
                return v;
            };
            SeparationQuery q{index(x_name), index(y_name), {}, Criterion::m};
            for (const auto& z : detail::split_list(given)) q.cond.insert(index(z));
            q.criterion = criterion == "m" ? Criterion::m : criterion == "m-prime" ? Criterion::m_prime : Criterion::ac;
            const auto path = connecting_path(g, q);
            if (!path) {
                out << "separated\n";
            } else {
                out << "connected\n";
                out << "path: " << detail::path_text(g, *path) << '\n';
            }
            return exit_ok;
        }

        if (active == simulate) {
            if (c.output.empty()) throw ContractError("simulate needs --output for the dataset");
            const auto net = detail::read_network(network_path);
            const auto hidden = detail::hidden_names(net, hide_list, hide_fraction, sim_frac->count() > 0, c.seed);
            const auto table = hide(sample(net, n_samples, split_seed(c.seed, 1)), hidden);
            const auto truth = latent_project(net.dag(), detail::observed_set(net, hidden));
            {
                auto f = detail::open_out(c.output);
                write_table(f, table);
            }
            const std::string tp = truth_path.empty() ? c.output + ".truth.graph" : truth_path;
            {
                auto f = detail::open_out(tp);
                write_graph(f, truth);
            }
            out << "seed: " << c.seed << '\n';
            out << "hidden: " << detail::join(hidden) << '\n';
            out << "data: " << c.output << " (" << table.n_samples() << " rows, " << table.n_vars() << " columns)\n";
            out << "truth: " << tp << '\n';
            return exit_ok;
        }

        if (active == project) {
            const auto net = detail::read_network(network_path);
            const auto hidden = detail::hidden_names(net, hide_list, hide_fraction, proj_frac->count() > 0, c.seed);
            MixedGraph g = latent_project(net.dag(), detail::observed_set(net, hidden));
            if (pag) g = pag_oracle(g);
            out << "seed: " << c.seed << '\n';
            out << "hidden: " << detail::join(hidden) << '\n';
            if (c.output.empty()) {
                write_graph(out, g);
            } else {
                auto f = detail::open_out(c.output);
                write_graph(f, g);
                out << "graph: " << c.output << '\n';
            }
            return exit_ok;
        }

        if (active == bench) {
            if (c.output.empty()) throw ContractError("benchmark needs --output for the results file");
            const auto net = detail::read_network(network_path);
            BenchmarkConfig config;
            for (const auto& s : detail::split_list(sizes_text)) {
                const long v = std::stol(s);
                if (v < 1) throw ContractError("sample sizes must be positive");
                config.sizes.push_back(static_cast<std::size_t>(v));
            }
            config.hide_fractions.clear();
            for (const auto& s : detail::split_list(fractions_text)) config.hide_fractions.push_back(std::stod(s));
            config.replicates = replicates;
            config.seed = c.seed;
            config.jobs = c.jobs;
            config.replicate.search = detail::search_options(c);
            config.replicate.bootstrap = bootstrap;
            config.replicate.timing = timing;
            const auto records = run_benchmark(net, config);
            {
                auto f = detail::open_out(c.output);
                write_records(f, records);
            }
            out << "seed: " << c.seed << '\n';
            out << std::fixed << std::setprecision(4);
            for (const auto& cell : summarize(records)) {
                auto fmt = [](const MeanInterval& m) {
                    std::ostringstream s;
                    s << std::fixed << std::setprecision(4);
                    if (!m.mean) return std::string("n/a");
                    s << *m.mean;
                    if (m.half_width) s << " +- " << *m.half_width;
                    return s.str();
                };
                out << "N=" << cell.n << " hide=" << cell.hide_fraction << " replicates=" << cell.replicates
                    << " failures=" << cell.failures << " precision=" << fmt(cell.precision)
                    << " recall=" << fmt(cell.recall) << '\n';
            }
            for (const auto& r : records)
                if (r.error) err << "replicate seed " << r.seed << " failed: " << *r.error << '\n';
            out << "results: " << c.output << '\n';
            return exit_ok;
        }
    } catch (const FileError& e) {
        err << "error: " << e.what() << '\n';
        return exit_unreadable;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_error;
    }
    return exit_error;
}

}  // namespace ancestral::cli
