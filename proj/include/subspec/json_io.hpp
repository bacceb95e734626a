#ifndef SUBSPEC_JSON_IO_HPP
#define SUBSPEC_JSON_IO_HPP

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "subspec/exact.hpp"
#include "subspec/graph.hpp"

namespace subspec {

using Json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t h) {
    static const char* d = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = d[h & 0xf];
        h >>= 4;
    }
    return s;
}

// Graph file payload: a finite graph, optionally Markov-weighted, or a
// reference to one of the lazy infinite built-ins.
struct GraphFile {
    std::optional<BipartiteGraph> graph;
    std::vector<double> weights;  // indexed like graph.even_labels(); empty if absent
    std::optional<double> lambda_inv;
    std::optional<Rational> lambda_inv_exact;
    std::string builtin;  // "a_inf" | "a_biinf" | "d_inf" | ""
};

namespace detail {
inline void require_keys(const Json& j, const std::vector<std::string>& required,
                         const std::vector<std::string>& optional, const char* what) {
    for (const auto& k : required)
        if (!j.contains(k))
            throw SchemaError(std::string(what) + ": missing required key \"" + k + "\"");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        bool known = false;
        for (const auto& r : required) known = known || r == k;
        for (const auto& o : optional) known = known || o == k;
        if (!known) throw SchemaError(std::string(what) + ": unknown key \"" + k + "\" rejected");
    }
}

inline Rational json_rational(const Json& v, const char* field) {
    if (v.is_number_integer()) return rational_of(v.get<long>());
    if (v.is_number_float()) {
        Rational q;
        mpq_set_d(q.get_mpq_t(), v.get<double>());
        return q;
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw SchemaError(std::string(field) + ": expected number or rational string");
}
}  // namespace detail

inline GraphFile parse_graph_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("graph file: top level must be an object");
    GraphFile out;
    if (j.contains("builtin")) {
        detail::require_keys(j, {"builtin", "lambda_inv"}, {}, "graph file (builtin form)");
        out.builtin = j.at("builtin").get<std::string>();
        if (out.builtin != "a_inf" && out.builtin != "a_biinf" && out.builtin != "d_inf")
            throw SchemaError("graph file: unknown builtin \"" + out.builtin + "\"");
        out.lambda_inv_exact = detail::json_rational(j.at("lambda_inv"), "lambda_inv");
        out.lambda_inv = to_double(*out.lambda_inv_exact);
        return out;
    }
    detail::require_keys(j, {"odd", "even", "edges"}, {"weights", "lambda_inv"}, "graph file");
    std::vector<std::string> odd, even;
    for (const auto& v : j.at("odd")) {
        if (!v.is_string()) throw SchemaError("odd: labels must be strings");
        odd.push_back(v.get<std::string>());
    }
    for (const auto& v : j.at("even")) {
        if (!v.is_string()) throw SchemaError("even: labels must be strings");
        even.push_back(v.get<std::string>());
    }
    std::vector<std::int64_t> mult(odd.size() * even.size(), 0);
    auto find = [](const std::vector<std::string>& side, const std::string& l, const char* which) {
        auto it = std::find(side.begin(), side.end(), l);
        if (it == side.end())
            throw SchemaError(std::string("edges: ") + which + " label \"" + l + "\" not declared");
        return static_cast<std::size_t>(it - side.begin());
    };
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw SchemaError("edges: each entry must be [odd_label, even_label, multiplicity]");
        std::size_t i = find(odd, e[0].get<std::string>(), "odd");
        std::size_t jj = find(even, e[1].get<std::string>(), "even");
        if (!e[2].is_number_integer() || e[2].get<std::int64_t>() <= 0)
            throw SchemaError("edges: multiplicity must be a positive integer");
        mult[i * even.size() + jj] += e[2].get<std::int64_t>();
        if (mult[i * even.size() + jj] > BipartiteGraph::kMaxMultiplicity)
            throw SchemaError("edges: multiplicity overflow (cap 2^31-1)");
    }
    try {
        out.graph.emplace(std::move(odd), std::move(even), std::move(mult));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("graph file: ") + e.what());
    }
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        if (!w.is_object()) throw SchemaError("weights: must map even labels to numbers");
        out.weights.assign(out.graph->even_count(), 0.0);
        std::vector<bool> seen(out.graph->even_count(), false);
        for (auto it = w.begin(); it != w.end(); ++it) {
            if (!out.graph->has_even(it.key()))
                throw SchemaError("weights: \"" + it.key() + "\" is not an even vertex");
            double val = to_double(detail::json_rational(it.value(), "weights"));
            if (!(val > 0)) throw SchemaError("weights: \"" + it.key() + "\" must be positive");
            std::size_t idx = out.graph->even_index(it.key());
            out.weights[idx] = val;
            seen[idx] = true;
        }
        for (std::size_t idx = 0; idx < seen.size(); ++idx)
            if (!seen[idx])
                throw SchemaError("weights: missing entry for even vertex \"" +
                                  out.graph->even_labels()[idx] + "\"");
    }
    if (j.contains("lambda_inv")) {
        out.lambda_inv_exact = detail::json_rational(j.at("lambda_inv"), "lambda_inv");
        out.lambda_inv = to_double(*out.lambda_inv_exact);
        if (!(*out.lambda_inv > 0)) throw SchemaError("lambda_inv: must be positive");
    }
    return out;
}

inline GraphFile parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open graph file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("graph file " + path + ": " + e.what());
    }
    return parse_graph_json(j);
}

inline Json graph_to_json(const BipartiteGraph& g, const std::vector<double>* weights = nullptr,
                          std::optional<double> lambda_inv = std::nullopt) {
    Json j;
    j["odd"] = g.odd_labels();
    j["even"] = g.even_labels();
    Json edges = Json::array();
    for (std::size_t i = 0; i < g.odd_count(); ++i)
        for (std::size_t jj = 0; jj < g.even_count(); ++jj)
            if (g.mult(i, jj) != 0)
                edges.push_back(Json::array({g.odd_labels()[i], g.even_labels()[jj], g.mult(i, jj)}));
    j["edges"] = std::move(edges);
    if (weights && !weights->empty()) {
        Json w = Json::object();
        for (std::size_t jj = 0; jj < g.even_count(); ++jj) w[g.even_labels()[jj]] = (*weights)[jj];
        j["weights"] = std::move(w);
    }
    if (lambda_inv) j["lambda_inv"] = *lambda_inv;
    return j;
}

inline std::string graph_fingerprint(const BipartiteGraph& g) {
    return hex64(fnv1a(graph_to_json(g).dump()));
}

inline std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return hex64(fnv1a(ss.str()));
}

inline std::string emit_dot(const BipartiteGraph& g) {
    std::ostringstream out;
    out << "graph G {\n";
    for (const auto& l : g.odd_labels()) out << "  \"o:" << l << "\" [shape=circle,label=\"" << l << "\"];\n";
    for (const auto& l : g.even_labels()) out << "  \"e:" << l << "\" [shape=square,label=\"" << l << "\"];\n";
    for (std::size_t i = 0; i < g.odd_count(); ++i)
        for (std::size_t j = 0; j < g.even_count(); ++j)
            for (std::int64_t k = 0; k < g.mult(i, j); ++k)
                out << "  \"o:" << g.odd_labels()[i] << "\" -- \"e:" << g.even_labels()[j] << "\";\n";
    out << "}\n";
    return out.str();
}

}  // namespace subspec

#endif
