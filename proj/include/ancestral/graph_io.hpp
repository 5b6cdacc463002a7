#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ancestral/errors.hpp"
#include "ancestral/graph.hpp"
#include "ancestral/table.hpp"

namespace ancestral {

namespace detail {

inline bool parse_edge_token(std::string tok, Mark& left, Mark& right) {
    if (tok == "->") tok = "-->";
    else if (tok == "<-") tok = "<--";
    else if (tok == "--") tok = "---";
    if (tok.size() != 3 || tok[1] != '-') return false;
    switch (tok[0]) {
        case '-': left = Mark::Tail; break;
        case '<': left = Mark::Arrow; break;
        case 'o': left = Mark::Circle; break;
        default: return false;
    }
    switch (tok[2]) {
        case '-': right = Mark::Tail; break;
        case '>': right = Mark::Arrow; break;
        case 'o': right = Mark::Circle; break;
        default: return false;
    }
    return true;
}

inline std::string edge_token(Mark left, Mark right) {
    if (left == Mark::Tail && right == Mark::Arrow) return "->";
    if (left == Mark::Arrow && right == Mark::Tail) return "<-";
    if (left == Mark::Tail && right == Mark::Tail) return "--";
    const char l = left == Mark::Tail ? '-' : left == Mark::Arrow ? '<' : 'o';
    const char r = right == Mark::Tail ? '-' : right == Mark::Arrow ? '>' : 'o';
    return std::string{l, '-', r};
}

}  // namespace detail

/// Reads the edge-list format:
///
///     vertices: A,B,C
///     A -> B
///     B <-> C
///
/// Edge tokens: `->` `<-` `<->` `--`, plus circle variants such as `o->` and
/// `o-o`. `#` starts a comment line. Without a `vertices:` line the vertex
/// universe is taken from the edges in order of appearance.
inline MixedGraph read_graph(std::istream& in) {
    struct RawEdge {
        std::string a, b;
        Mark left, right;
        std::size_t line;
    };
    std::vector<std::string> declared;
    bool have_decl = false;
    std::vector<RawEdge> raw;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.rfind("vertices:", 0) == 0) {
            if (have_decl || !raw.empty()) throw ParseError("the vertices line must come first", line_no);
            have_decl = true;
            const std::string rest = detail::trim(t.substr(9));
            if (!rest.empty()) declared = detail::split(rest, ',');
            for (const auto& v : declared)
                if (v.empty()) throw ParseError("empty vertex name", line_no);
            continue;
        }
        std::istringstream fields(t);
        std::string a, tok, b, extra;
        if (!(fields >> a >> tok >> b) || (fields >> extra))
            throw ParseError("expected '<vertex> <edge> <vertex>'", line_no);
        RawEdge e{a, b, Mark::Tail, Mark::Tail, line_no};
        if (!detail::parse_edge_token(tok, e.left, e.right)) throw ParseError("unknown edge token '" + tok + "'", line_no);
        raw.push_back(e);
    }
    std::vector<std::string> names = declared;
    if (!have_decl)
        for (const auto& e : raw)
            for (const auto& v : {e.a, e.b})
                if (std::find(names.begin(), names.end(), v) == names.end()) names.push_back(v);
    MixedGraph g = [&] {
        try {
            return MixedGraph(names);
        } catch (const ContractError& err) {
            throw ParseError(err.what(), 1);
        }
    }();
    for (const auto& e : raw) {
        const int a = g.index_of(e.a), b = g.index_of(e.b);
        if (a < 0) throw ParseError("undeclared vertex '" + e.a + "'", e.line);
        if (b < 0) throw ParseError("undeclared vertex '" + e.b + "'", e.line);
        if (a == b) throw ParseError("self-loop on '" + e.a + "'", e.line);
        if (g.adjacent(a, b)) throw ParseError("second edge between '" + e.a + "' and '" + e.b + "'", e.line);
        g.set_edge(a, b, e.left, e.right);
    }
    return g;
}

/// Writes the edge-list format; directed edges are written parent first.
inline void write_graph(std::ostream& out, const MixedGraph& g) {
    out << "vertices: ";
    for (int v = 0; v < g.n(); ++v) out << (v ? "," : "") << g.name(v);
    out << '\n';
    for (const auto& e : g.edges()) {
        if (e.at_a == Mark::Arrow && e.at_b == Mark::Tail)
            out << g.name(e.b) << " -> " << g.name(e.a) << '\n';
        else
            out << g.name(e.a) << ' ' << detail::edge_token(e.at_a, e.at_b) << ' ' << g.name(e.b) << '\n';
    }
}

inline std::string to_text(const MixedGraph& g) {
    std::ostringstream os;
    write_graph(os, g);
    return os.str();
}

inline MixedGraph graph_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_graph(is);
}

/// Reorders/validates a graph against a table's variable names.
inline MixedGraph align_to_names(const MixedGraph& g, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != g.n())
        throw ContractError("graph has " + std::to_string(g.n()) + " vertices, data has " + std::to_string(names.size()));
    MixedGraph out(names);
    for (const auto& e : g.edges()) {
        const int a = out.index_of(g.name(e.a)), b = out.index_of(g.name(e.b));
        if (a < 0 || b < 0) throw ContractError("graph vertex missing from data header");
        out.set_edge(a, b, e.at_a, e.at_b);
    }
    for (const auto& n : g.names())
        if (out.index_of(n) < 0) throw ContractError("graph vertex '" + n + "' missing from data header");
    return out;
}

}  // namespace ancestral
