#ifndef SUBSPEC_ESPEC_HPP
#define SUBSPEC_ESPEC_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "subspec/graph.hpp"
#include "subspec/json_io.hpp"
#include "subspec/polynomial.hpp"
#include "subspec/spectral.hpp"

namespace subspec {

// Canonical form of a connected bipartite multigraph: rows <= cols, and the
// row-major flattening is the lexicographic minimum over all row/column
// permutations (and the side swap for square shapes).
struct CanonicalGraph {
    std::size_t rows = 0, cols = 0;
    std::vector<std::int64_t> mult;  // row-major rows x cols
    double norm_squared = 0.0;       // filled by classification

    bool operator<(const CanonicalGraph& o) const {
        return std::tie(rows, cols, mult) < std::tie(o.rows, o.cols, o.mult);
    }
    bool operator==(const CanonicalGraph& o) const {
        return rows == o.rows && cols == o.cols && mult == o.mult;
    }

    BipartiteGraph to_graph() const {
        std::vector<std::string> odd, even;
        for (std::size_t i = 0; i < rows; ++i) odd.push_back("i" + std::to_string(i));
        for (std::size_t j = 0; j < cols; ++j) even.push_back("j" + std::to_string(j));
        return BipartiteGraph(odd, even, mult);
    }

    std::string key() const {
        std::ostringstream ss;
        ss << rows << "x" << cols;
        for (auto m : mult) ss << ":" << m;
        return ss.str();
    }
    std::string hash() const { return hex64(fnv1a(key())); }
};

namespace detail {

inline std::vector<std::int64_t> lex_min_over_perms(std::size_t r, std::size_t c,
                                                    const std::vector<std::int64_t>& m) {
    std::vector<std::size_t> rowperm(r);
    std::iota(rowperm.begin(), rowperm.end(), std::size_t{0});
    std::vector<std::int64_t> best;
    std::vector<std::vector<std::int64_t>> cols(c, std::vector<std::int64_t>(r));
    do {
        for (std::size_t j = 0; j < c; ++j)
            for (std::size_t i = 0; i < r; ++i) cols[j][i] = m[rowperm[i] * c + j];
        std::sort(cols.begin(), cols.end());
        std::vector<std::int64_t> flat(r * c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) flat[i * c + j] = cols[j][i];
        if (best.empty() || flat < best) best = std::move(flat);
    } while (std::next_permutation(rowperm.begin(), rowperm.end()));
    return best;
}

}  // namespace detail

inline CanonicalGraph canonicalize(std::size_t rows, std::size_t cols,
                                   std::vector<std::int64_t> m) {
    if (rows > cols) {
        std::vector<std::int64_t> t(m.size());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = m[i * cols + j];
        std::swap(rows, cols);
        m = std::move(t);
    }
    CanonicalGraph out;
    out.rows = rows;
    out.cols = cols;
    out.mult = detail::lex_min_over_perms(rows, cols, m);
    if (rows == cols) {
        std::vector<std::int64_t> t(m.size());
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = m[i * cols + j];
        auto alt = detail::lex_min_over_perms(rows, cols, t);
        if (alt < out.mult) out.mult = std::move(alt);
    }
    return out;
}

inline CanonicalGraph canonicalize(const BipartiteGraph& g) {
    return canonicalize(g.odd_count(), g.even_count(), g.mult_flat());
}

struct EnumerationBounds {
    std::size_t max_vertices = 8;
    std::int64_t max_multiplicity = 1;
    std::int64_t max_edges = 64;
    std::size_t cap = 2000000;  // raw matrices examined before truncating
};

struct EnumerationResult {
    std::vector<CanonicalGraph> graphs;  // sorted, deduplicated
    bool truncated = false;
};

namespace detail {

inline bool connected_matrix(std::size_t r, std::size_t c, const std::vector<std::int64_t>& m) {
    UnionFind uf(r + c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            if (m[i * c + j] != 0) uf.unite(i, r + j);
    std::size_t root = uf.find(0);
    for (std::size_t v = 0; v < r + c; ++v)
        if (uf.find(v) != root) return false;
    return true;
}

// Enumerates connected shapes r x c with rows given as a lexicographically
// non-increasing sequence of row patterns (each orbit has such a member).
inline void enumerate_shape(std::size_t r, std::size_t c, const EnumerationBounds& b,
                            std::set<CanonicalGraph>& sink, std::size_t& examined,
                            bool& truncated) {
    const std::int64_t base = b.max_multiplicity + 1;
    std::int64_t npat = 1;
    for (std::size_t j = 0; j < c; ++j) {
        npat *= base;
        if (npat > 2000000) throw std::invalid_argument("enumerate: shape too large");
    }
    std::vector<std::vector<std::int64_t>> pattern(static_cast<std::size_t>(npat));
    std::vector<std::int64_t> rowsum(static_cast<std::size_t>(npat), 0);
    for (std::int64_t p = 0; p < npat; ++p) {
        std::vector<std::int64_t> row(c);
        std::int64_t x = p;
        for (std::size_t j = 0; j < c; ++j) {
            row[j] = x % base;
            x /= base;
        }
        std::int64_t s = 0;
        for (auto v : row) s += v;
        pattern[static_cast<std::size_t>(p)] = std::move(row);
        rowsum[static_cast<std::size_t>(p)] = s;
    }
    std::vector<std::int64_t> chosen(r);
    std::vector<std::int64_t> m(r * c);
    std::function<void(std::size_t, std::int64_t, std::int64_t)> rec =
        [&](std::size_t i, std::int64_t max_pat, std::int64_t edges_left) {
            if (truncated) return;
            if (i == r) {
                ++examined;
                if (examined > b.cap) {
                    truncated = true;
                    return;
                }
                for (std::size_t jj = 0; jj < c; ++jj) {
                    bool nz = false;
                    for (std::size_t ii = 0; ii < r; ++ii) nz = nz || m[ii * c + jj] != 0;
                    if (!nz) return;
                }
                if (!connected_matrix(r, c, m)) return;
                sink.insert(canonicalize(r, c, m));
                return;
            }
            for (std::int64_t p = max_pat; p >= 1; --p) {
                if (rowsum[static_cast<std::size_t>(p)] > edges_left) continue;
                const auto& row = pattern[static_cast<std::size_t>(p)];
                for (std::size_t j = 0; j < c; ++j) m[i * c + j] = row[j];
                rec(i + 1, p, edges_left - rowsum[static_cast<std::size_t>(p)]);
                if (truncated) return;
            }
        };
    rec(0, npat - 1, b.max_edges);
}

}  // namespace detail

// Every connected bipartite multigraph within the bounds, exactly once up to
// isomorphism. Shapes (vertex-count signatures) are processed concurrently.
inline EnumerationResult enumerate_graphs(const EnumerationBounds& b) {
    if (b.max_vertices < 2 || b.max_multiplicity < 1 || b.max_edges < 1)
        throw std::invalid_argument("enumerate: bounds must be >= 1 (and >= 2 vertices)");
    struct ShapeJob {
        std::size_t r, c;
    };
    std::vector<ShapeJob> jobs;
    for (std::size_t r = 1; r <= b.max_vertices / 2; ++r)
        for (std::size_t c = r; r + c <= b.max_vertices; ++c) jobs.push_back({r, c});
    std::vector<std::future<std::tuple<std::set<CanonicalGraph>, std::size_t, bool>>> futs;
    for (auto job : jobs)
        futs.push_back(std::async(std::launch::async, [job, &b]() {
            std::set<CanonicalGraph> sink;
            std::size_t examined = 0;
            bool truncated = false;
            detail::enumerate_shape(job.r, job.c, b, sink, examined, truncated);
            return std::make_tuple(std::move(sink), examined, truncated);
        }));
    EnumerationResult out;
    std::set<CanonicalGraph> merged;
    std::size_t total_examined = 0;
    for (auto& f : futs) {
        auto [sink, examined, truncated] = f.get();
        total_examined += examined;
        out.truncated = out.truncated || truncated || total_examined > b.cap;
        merged.insert(sink.begin(), sink.end());
    }
    out.graphs.assign(merged.begin(), merged.end());
    return out;
}

enum class NormClass { Coxeter, Affine, Window, HalfLine };

inline const char* norm_class_name(NormClass c) {
    switch (c) {
        case NormClass::Coxeter: return "Coxeter(<4)";
        case NormClass::Affine: return "Affine(=4)";
        case NormClass::Window: return "Window((4,2+sqrt5])";
        case NormClass::HalfLine: return "HalfLine(>2+sqrt5)";
    }
    return "?";
}

struct AtlasEntry {
    double norm_squared = 0.0;
    CanonicalGraph witness;  // minimal witness among collisions
    NormClass cls = NormClass::Coxeter;
};

// Exact position of the largest eigenvalue of Lambda^t Lambda relative to
// the boundaries 4 and 2+sqrt(5), by integer polynomial arithmetic.
inline NormClass classify_exact(const BipartiteGraph& g) {
    GraphComponent all;
    for (std::size_t i = 0; i < g.odd_count(); ++i) all.odd.push_back(i);
    for (std::size_t j = 0; j < g.even_count(); ++j) all.even.push_back(j);
    RatPoly p = to_rational(char_poly(gram_exact(g, all)));
    SturmChain chain(p);
    int above4 = chain.count_roots_above(Rational(4));
    bool at4 = eval(p, Rational(4)) == 0;
    if (above4 == 0) return at4 ? NormClass::Affine : NormClass::Coxeter;
    // Compare the largest root with 2+sqrt(5), the largest root of x^2-4x-1.
    RatPoly golden = {Rational(-1), Rational(-4), Rational(1)};
    RatPoly q = p;
    bool hits_golden = false;
    while (divides(golden, q)) {
        hits_golden = true;
        q = poly_div_exact(q, golden);
    }
    // Rational window (lo, hi) around 2+sqrt(5), shrunk until it separates
    // the largest root of q from the boundary.
    Rational lo(4236067977499789L, 1000000000000000L);  // < 2+sqrt5
    Rational hi(4236067977499790L, 1000000000000000L);  // > 2+sqrt5
    if (q.size() <= 1) return hits_golden ? NormClass::Window : NormClass::Coxeter;
    SturmChain qc(q);
    while (true) {
        int above_hi = qc.count_roots_above(hi);
        if (above_hi > 0) return NormClass::HalfLine;
        int above_lo = qc.count_roots_above(lo);
        if (above_lo == 0) {
            // Largest root of q is below the window; the verdict rests on
            // whether 2+sqrt5 itself is a root of p.
            if (hits_golden) return NormClass::Window;
            return above4 > 0 ? NormClass::Window : NormClass::Coxeter;
        }
        // A root of q sits inside (lo, hi): shrink the window around 2+sqrt5.
        Rational mid = (lo + hi) / 2;
        if (mid * mid - 4 * mid - 1 < 0) lo = mid;
        else hi = mid;
    }
}

// Classifies and deduplicates (by norm^2 within 1e-9) a list of canonical
// graphs into a sorted atlas.
inline std::vector<AtlasEntry> classify(std::vector<CanonicalGraph> graphs,
                                        double tol = kDefaultTol) {
    for (auto& cg : graphs) cg.norm_squared = norm_squared(cg.to_graph(), tol);
    std::sort(graphs.begin(), graphs.end(), [](const CanonicalGraph& a, const CanonicalGraph& b) {
        return a.norm_squared < b.norm_squared;
    });
    auto size_key = [](const CanonicalGraph& g) {
        std::int64_t edges = 0;
        for (auto m : g.mult) edges += m;
        return std::make_tuple(g.rows + g.cols, edges, g.rows, g.mult);
    };
    std::vector<AtlasEntry> atlas;
    std::size_t k = 0;
    while (k < graphs.size()) {
        std::size_t end = k + 1;
        while (end < graphs.size() &&
               graphs[end].norm_squared - graphs[end - 1].norm_squared <= 1e-9)
            ++end;
        std::size_t best = k;
        for (std::size_t i = k + 1; i < end; ++i)
            if (size_key(graphs[i]) < size_key(graphs[best])) best = i;
        AtlasEntry e;
        e.norm_squared = graphs[best].norm_squared;
        e.cls = classify_exact(graphs[best].to_graph());
        e.witness = graphs[best];
        atlas.push_back(std::move(e));
        k = end;
    }
    return atlas;
}

struct MembershipResult {
    bool found = false;
    std::optional<CanonicalGraph> witness;
    std::string note;  // density caveat when not found
};

inline MembershipResult membership_query(double alpha, double tol, const EnumerationBounds& b) {
    if (!(alpha > 0)) throw std::invalid_argument("membership_query: alpha must be positive");
    auto en = enumerate_graphs(b);
    MembershipResult out;
    std::optional<CanonicalGraph> best;
    for (auto& cg : en.graphs) {
        cg.norm_squared = norm_squared(cg.to_graph());
        if (std::abs(cg.norm_squared - alpha) <= tol) {
            if (!best || cg < *best) best = cg;
        }
    }
    if (best) {
        out.found = true;
        out.witness = best;
    } else {
        out.note =
            "no witness within bounds; E^2_0 is dense in E^2, so absence within a bounded scan "
            "is not a proof of non-membership";
        if (en.truncated) out.note += " (enumeration truncated at cap)";
    }
    return out;
}

// Append-only JSON-lines atlas persistence, keyed by canonical-form hash.
class AtlasStore {
public:
    explicit AtlasStore(std::string path) : path_(std::move(path)) { load(); }

    bool contains(const CanonicalGraph& g) const { return keys_.count(g.hash()) != 0; }

    void record(const CanonicalGraph& g, double norm2, NormClass cls) {
        if (contains(g)) return;
        nlohmann::ordered_json j;
        j["hash"] = g.hash();
        j["rows"] = g.rows;
        j["cols"] = g.cols;
        j["mult"] = g.mult;
        j["norm_squared"] = norm2;
        j["class"] = norm_class_name(cls);
        std::ofstream out(path_, std::ios::app);
        out << j.dump() << "\n";
        keys_.insert(g.hash());
        entries_.push_back(j);
    }

    std::size_t size() const { return keys_.size(); }
    const std::vector<nlohmann::ordered_json>& entries() const { return entries_; }

private:
    void load() {
        std::ifstream in(path_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto j = nlohmann::ordered_json::parse(line);
            keys_.insert(j.at("hash").get<std::string>());
            entries_.push_back(std::move(j));
        }
    }

    std::string path_;
    std::set<std::string> keys_;
    std::vector<nlohmann::ordered_json> entries_;
};

}  // namespace subspec

#endif
