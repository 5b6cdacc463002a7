#pragma once

#include <chrono>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/graph_io.hpp"
#include "ancestral/network.hpp"
#include "ancestral/projection.hpp"
#include "ancestral/rng.hpp"
#include "ancestral/search.hpp"

namespace ancestral {

enum class Verdict { true_positive, false_positive, misoriented, false_negative };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::true_positive: return "tp";
        case Verdict::false_positive: return "fp";
        case Verdict::misoriented: return "misoriented";
        case Verdict::false_negative: return "fn";
    }
    return "";
}

/// How the reference graph was built: the PAG of the projected MAG, or the
/// projected MAG itself graded without circles when it is too large.
enum class TruthMode { pag, projection };

inline const char* to_string(TruthMode m) { return m == TruthMode::pag ? "pag" : "projection"; }

struct EdgeVerdict {
    int a = 0;
    int b = 0;
    Verdict verdict = Verdict::true_positive;
};

/// A misoriented edge counts once in fp and once in fn.
struct BenchmarkResult {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::vector<EdgeVerdict> verdicts;
};

namespace detail {

inline bool mark_compatible(Mark predicted, Mark truth) { return truth == Mark::Circle || predicted == truth; }

}  // namespace detail

/// Compares predicted edges against a reference whose circle marks accept any
/// mark. Edges present in both with an incompatible mark are misoriented.
inline BenchmarkResult grade(const MixedGraph& predicted, const MixedGraph& truth) {
    if (predicted.names() != truth.names())
        throw ContractError("predicted and reference graphs must have the same vertices in the same order");
    BenchmarkResult r;
    for (int a = 0; a < truth.n(); ++a) {
        for (int b = a + 1; b < truth.n(); ++b) {
            const bool in_p = predicted.adjacent(a, b), in_t = truth.adjacent(a, b);
            if (!in_p && !in_t) continue;
            Verdict v;
            if (in_p && in_t) {
                const bool ok = detail::mark_compatible(*predicted.mark_at(a, b), *truth.mark_at(a, b)) &&
                                detail::mark_compatible(*predicted.mark_at(b, a), *truth.mark_at(b, a));
                v = ok ? Verdict::true_positive : Verdict::misoriented;
            } else {
                v = in_p ? Verdict::false_positive : Verdict::false_negative;
            }
            switch (v) {
                case Verdict::true_positive: ++r.tp; break;
                case Verdict::false_positive: ++r.fp; break;
                case Verdict::misoriented: ++r.fp, ++r.fn; break;
                case Verdict::false_negative: ++r.fn; break;
            }
            r.verdicts.push_back({a, b, v});
        }
    }
    if (r.tp + r.fp > 0) r.precision = static_cast<double>(r.tp) / (r.tp + r.fp);
    if (r.tp + r.fn > 0) r.recall = static_cast<double>(r.tp) / (r.tp + r.fn);
    return r;
}

namespace detail {

inline int component_count(const MixedGraph& g, VertexSet within) {
    int count = 0;
    VertexSet seen;
    for (int s : within.members()) {
        if (seen.contains(s)) continue;
        ++count;
        std::vector<int> stack{s};
        seen.insert(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int u : (g.adjacent_set(v) & within).members())
                if (!seen.contains(u)) {
                    seen.insert(u);
                    stack.push_back(u);
                }
        }
    }
    return count;
}

}  // namespace detail

/// round(fraction * n) variables drawn uniformly one at a time, skipping any
/// whose removal would split the remaining observed graph. When every
/// remaining variable would split it, the draw falls back to all of them.
/// Result in declaration order.
inline std::vector<int> choose_hidden(const MixedGraph& dag, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction < 1.0)) throw ContractError("hide fraction must lie in [0, 1)");
    const int n = dag.n();
    const int count = static_cast<int>(std::lround(fraction * n));
    if (count >= n) throw ContractError("hide fraction leaves no observed variable");
    Rng rng(seed);
    VertexSet observed = dag.vertices();
    for (int k = 0; k < count; ++k) {
        const int before = detail::component_count(dag, observed);
        std::vector<int> candidates;
        for (int v : observed.members())
            if (detail::component_count(dag, observed.without(v)) <= before) candidates.push_back(v);
        if (candidates.empty()) candidates = observed.members();
        observed.erase(candidates[rng.below(candidates.size())]);
    }
    return (dag.vertices() - observed).members();
}

/// Reference graph over the observed variables of `dag`.
inline std::pair<MixedGraph, TruthMode> reference_graph(const MixedGraph& dag, VertexSet observed,
                                                         int pag_edge_limit = 12) {
    MixedGraph mag = latent_project(dag, observed);
    if (mag.edge_count() <= pag_edge_limit) {
        PagOptions po;
        po.max_edges = pag_edge_limit;
        return {pag_oracle(mag, po), TruthMode::pag};
    }
    return {std::move(mag), TruthMode::projection};
}

struct ReplicateRecord {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double hide_fraction = 0.0;
    std::vector<std::string> hidden;
    int tp = 0;
    int fp = 0;
    int fn = 0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> runtime;
    TruthMode truth = TruthMode::pag;
    std::string termination;
    std::optional<std::string> error;

    friend bool operator==(const ReplicateRecord&, const ReplicateRecord&) = default;
};

struct ReplicateOptions {
    SearchOptions search;
    bool bootstrap = false;
    /// Record wall-clock seconds. Off by default so reruns are byte-identical.
    bool timing = false;
};

/// sample -> hide -> learn -> reference -> grade, with every random stream
/// derived from `seed`. Failures are captured in the record.
inline ReplicateRecord run_replicate(const DiscreteNetwork& net, std::size_t n, double hide_fraction,
                                     std::uint64_t seed, const ReplicateOptions& options = {}) {
    ReplicateRecord rec;
    rec.seed = seed;
    rec.n = n;
    rec.hide_fraction = hide_fraction;
    const auto start = std::chrono::steady_clock::now();
    try {
        const MixedGraph dag = net.dag();
        const auto hidden = choose_hidden(dag, hide_fraction, split_seed(seed, 0));
        for (int h : hidden) rec.hidden.push_back(net.names[h]);
        CategoricalTable data = hide(sample(net, n, split_seed(seed, 1)), rec.hidden);
        if (options.bootstrap) {
            Rng rng(split_seed(seed, 2));
            std::vector<std::size_t> picks(data.n_samples());
            for (auto& p : picks) p = rng.below(data.n_samples());
            data = data.rows(picks);
        }
        const auto report = learn(data, options.search);
        rec.termination = to_string(report.termination);
        const VertexSet observed = dag.vertices() - VertexSet::from(hidden);
        const auto [truth, mode] = reference_graph(dag, observed);
        rec.truth = mode;
        const auto result = grade(report.graph, truth);
        rec.tp = result.tp;
        rec.fp = result.fp;
        rec.fn = result.fn;
        rec.precision = result.precision;
        rec.recall = result.recall;
    } catch (const std::exception& e) {
        rec.error = e.what();
    }
    if (options.timing)
        rec.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

inline nlohmann::json to_json(const ReplicateRecord& r) {
    auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["seed"] = r.seed;
    j["n"] = r.n;
    j["hide_fraction"] = r.hide_fraction;
    j["hidden"] = r.hidden;
    j["tp"] = r.tp;
    j["fp"] = r.fp;
    j["fn"] = r.fn;
    j["precision"] = opt(r.precision);
    j["recall"] = opt(r.recall);
    j["runtime"] = opt(r.runtime);
    j["truth"] = to_string(r.truth);
    j["termination"] = r.termination;
    j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
    return j;
}

inline ReplicateRecord record_from_json(const nlohmann::json& j) {
    auto opt = [](const nlohmann::json& v) -> std::optional<double> {
        if (v.is_null()) return std::nullopt;
        return v.get<double>();
    };
    ReplicateRecord r;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n = j.at("n").get<std::size_t>();
    r.hide_fraction = j.at("hide_fraction").get<double>();
    r.hidden = j.at("hidden").get<std::vector<std::string>>();
    r.tp = j.at("tp").get<int>();
    r.fp = j.at("fp").get<int>();
    r.fn = j.at("fn").get<int>();
    r.precision = opt(j.at("precision"));
    r.recall = opt(j.at("recall"));
    r.runtime = opt(j.at("runtime"));
    const auto truth = j.at("truth").get<std::string>();
    if (truth != "pag" && truth != "projection") throw ParseError("unknown truth mode '" + truth + "'");
    r.truth = truth == "pag" ? TruthMode::pag : TruthMode::projection;
    r.termination = j.at("termination").get<std::string>();
    if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
    return r;
}

/// One JSON object per line.
inline void write_records(std::ostream& out, const std::vector<ReplicateRecord>& records) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
}

inline std::vector<ReplicateRecord> read_records(std::istream& in) {
    std::vector<ReplicateRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(line)));
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad record: ") + e.what(), line_no);
        }
    }
    return out;
}

struct BenchmarkConfig {
    std::vector<std::size_t> sizes;
    std::vector<double> hide_fractions{0.0};
    int replicates = 1;
    std::uint64_t seed = 0;
    ReplicateOptions replicate;
    int jobs = 1;
};

/// Every (size, fraction) cell with `replicates` runs each. Records come back
/// in cell-major, replicate-minor order regardless of `jobs`.
inline std::vector<ReplicateRecord> run_benchmark(const DiscreteNetwork& net, const BenchmarkConfig& config) {
    if (config.replicates < 1) throw ContractError("replicates must be at least 1");
    if (config.sizes.empty()) throw ContractError("at least one sample size is required");
    for (double f : config.hide_fractions)
        if (!(f >= 0.0 && f < 1.0)) throw ContractError("hide fractions must lie in [0, 1)");
    for (auto n : config.sizes)
        if (n < 1) throw ContractError("sample sizes must be positive");

    struct Task {
        std::size_t n;
        double fraction;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    std::uint64_t cell = 0;
    for (auto n : config.sizes)
        for (double f : config.hide_fractions) {
            for (int r = 0; r < config.replicates; ++r)
                tasks.push_back({n, f, split_seed(split_seed(config.seed, cell), static_cast<std::uint64_t>(r))});
            ++cell;
        }
    std::vector<ReplicateRecord> out(tasks.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < tasks.size(); i += stride)
            out[i] = run_replicate(net, tasks[i].n, tasks[i].fraction, tasks[i].seed, config.replicate);
    };
    const std::size_t threads = std::min<std::size_t>(std::max(config.jobs, 1), tasks.size());
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(work, k, threads);
        for (auto& t : pool) t.join();
    }
    return out;
}

struct MeanInterval {
    std::optional<double> mean;
    std::optional<double> half_width;  // 1.96 standard errors; needs two values
    int count = 0;
};

inline MeanInterval mean_interval(const std::vector<double>& values) {
    MeanInterval m;
    m.count = static_cast<int>(values.size());
    if (values.empty()) return m;
    CompensatedSum s;
    for (double v : values) s.add(v);
    const double mean = s.value() / values.size();
    m.mean = mean;
    if (values.size() >= 2) {
        CompensatedSum ss;
        for (double v : values) ss.add((v - mean) * (v - mean));
        const double sd = std::sqrt(ss.value() / (values.size() - 1));
        m.half_width = 1.96 * sd / std::sqrt(static_cast<double>(values.size()));
    }
    return m;
}

struct CellSummary {
    std::size_t n = 0;
    double hide_fraction = 0.0;
    int replicates = 0;
    int failures = 0;
    MeanInterval precision;
    MeanInterval recall;
};

/// Mean and 95% interval of precision and recall per (size, fraction) cell,
/// over replicates where the value is defined.
inline std::vector<CellSummary> summarize(const std::vector<ReplicateRecord>& records) {
    std::vector<CellSummary> cells;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> values;
    for (const auto& r : records) {
        std::size_t k = 0;
        while (k < cells.size() && !(cells[k].n == r.n && cells[k].hide_fraction == r.hide_fraction)) ++k;
        if (k == cells.size()) {
            cells.push_back({r.n, r.hide_fraction, 0, 0, {}, {}});
            values.emplace_back();
        }
        ++cells[k].replicates;
        if (r.error) ++cells[k].failures;
        if (r.precision) values[k].first.push_back(*r.precision);
        if (r.recall) values[k].second.push_back(*r.recall);
    }
    for (std::size_t k = 0; k < cells.size(); ++k) {
        cells[k].precision = mean_interval(values[k].first);
        cells[k].recall = mean_interval(values[k].second);
    }
    return cells;
}

}  // namespace ancestral
