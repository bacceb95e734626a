#ifndef SUBSPEC_SCENE_IO_HPP
#define SUBSPEC_SCENE_IO_HPP

#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "subspec/algebra.hpp"
#include "subspec/json_io.hpp"

namespace subspec {

// A concrete multimatrix inclusion scene: ambient algebra with trace weights
// plus named embedded subalgebras given by spanning matrices.
struct Scene {
    MultiMatrixAlgebra ambient;
    std::map<std::string, std::vector<Element>> spans;  // role -> spanning elements
    std::optional<Rational> lambda_inv;

    EmbeddedSubalgebra subalgebra(const std::string& role, double tol = 1e-10) const {
        auto it = spans.find(role);
        if (it == spans.end()) throw SchemaError("scene: no subalgebra with role \"" + role + "\"");
        return EmbeddedSubalgebra(ambient, it->second, tol);
    }
    bool has(const std::string& role) const { return spans.count(role) != 0; }
};

namespace detail {

inline Cplx parse_entry(const Json& v, const char* field) {
    if (v.is_number()) return Cplx(v.get<double>(), 0.0);
    if (v.is_string()) return Cplx(to_double(parse_rational(v.get<std::string>())), 0.0);
    if (v.is_array() && v.size() == 2) {
        auto part = [&](const Json& p) -> double {
            if (p.is_number()) return p.get<double>();
            if (p.is_string()) return to_double(parse_rational(p.get<std::string>()));
            throw SchemaError(std::string(field) + ": complex parts must be numbers or strings");
        };
        return Cplx(part(v[0]), part(v[1]));
    }
    throw SchemaError(std::string(field) + ": entry must be number, rational string, or [re, im]");
}

inline Element parse_element(const MultiMatrixAlgebra& amb, const Json& j, const char* field) {
    if (!j.is_array() || j.size() != amb.block_sizes.size())
        throw SchemaError(std::string(field) + ": element must list one matrix per block (" +
                          std::to_string(amb.block_sizes.size()) + " blocks)");
    Element x = Element::zero(amb);
    for (std::size_t b = 0; b < amb.block_sizes.size(); ++b) {
        const int n = amb.block_sizes[b];
        const Json& rows = j[b];
        if (!rows.is_array() || static_cast<int>(rows.size()) != n)
            throw SchemaError(std::string(field) + ": block " + std::to_string(b) + " must be " +
                              std::to_string(n) + "x" + std::to_string(n));
        for (int r = 0; r < n; ++r) {
            const Json& row = rows[r];
            if (!row.is_array() || static_cast<int>(row.size()) != n)
                throw SchemaError(std::string(field) + ": block " + std::to_string(b) +
                                  " row has wrong length");
            for (int c = 0; c < n; ++c) x.block(b)(r, c) = parse_entry(row[c], field);
        }
    }
    return x;
}

}  // namespace detail

inline Scene parse_scene_json(const Json& j) {
    if (!j.is_object()) throw SchemaError("scene: top level must be an object");
    detail::require_keys(j, {"blocks", "trace_weights", "subalgebras"}, {"lambda_inv"}, "scene");
    Scene sc;
    for (const auto& v : j.at("blocks")) {
        if (!v.is_number_integer() || v.get<int>() <= 0)
            throw SchemaError("blocks: block sizes must be positive integers");
        sc.ambient.block_sizes.push_back(v.get<int>());
    }
    for (const auto& v : j.at("trace_weights"))
        sc.ambient.trace_weights.push_back(detail::json_rational(v, "trace_weights"));
    try {
        sc.ambient.validate();
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("scene: ") + e.what());
    }
    const auto& subs = j.at("subalgebras");
    if (!subs.is_object()) throw SchemaError("subalgebras: must be an object of role -> matrices");
    for (auto it = subs.begin(); it != subs.end(); ++it) {
        const std::string& role = it.key();
        std::vector<Element> span;
        if (it.value().is_string() && it.value().get<std::string>() == "ambient") {
            span = ExpectationMap::ambient_basis(sc.ambient);
        } else {
            if (!it.value().is_array())
                throw SchemaError("subalgebras." + role + ": must be an array of elements");
            for (const auto& el : it.value())
                span.push_back(detail::parse_element(sc.ambient, el, ("subalgebras." + role).c_str()));
        }
        sc.spans[role] = std::move(span);
    }
    if (j.contains("lambda_inv"))
        sc.lambda_inv = detail::json_rational(j.at("lambda_inv"), "lambda_inv");
    return sc;
}

inline Scene parse_scene_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scene file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("scene file " + path + ": " + e.what());
    }
    return parse_scene_json(j);
}

}  // namespace subspec

#endif
