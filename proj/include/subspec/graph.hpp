#ifndef SUBSPEC_GRAPH_HPP
#define SUBSPEC_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace subspec {

// Inclusion bipartite multigraph: odd vertices I (rows), even vertices J
// (columns), entry mult(i,j) = number of edges b_ij.
class BipartiteGraph {
public:
    static constexpr std::int64_t kMaxMultiplicity = 2147483647;  // 2^31 - 1

    BipartiteGraph(std::vector<std::string> odd_labels, std::vector<std::string> even_labels,
                   std::vector<std::int64_t> mult)
        : odd_(std::move(odd_labels)), even_(std::move(even_labels)), mult_(std::move(mult)) {
        if (odd_.empty() || even_.empty())
            throw std::invalid_argument("bipartite graph needs at least one vertex per side");
        if (mult_.size() != odd_.size() * even_.size())
            throw std::invalid_argument("multiplicity matrix has wrong size");
        check_labels(odd_);
        check_labels(even_);
        for (auto m : mult_) {
            if (m < 0) throw std::invalid_argument("negative multiplicity");
            if (m > kMaxMultiplicity) throw std::invalid_argument("multiplicity overflow (cap 2^31-1)");
        }
        for (std::size_t i = 0; i < odd_.size(); ++i) {
            bool nz = false;
            for (std::size_t j = 0; j < even_.size(); ++j) nz = nz || mult_[i * even_.size() + j] != 0;
            if (!nz) throw std::invalid_argument("isolated odd vertex: " + odd_[i]);
        }
        for (std::size_t j = 0; j < even_.size(); ++j) {
            bool nz = false;
            for (std::size_t i = 0; i < odd_.size(); ++i) nz = nz || mult_[i * even_.size() + j] != 0;
            if (!nz) throw std::invalid_argument("isolated even vertex: " + even_[j]);
        }
        for (std::size_t i = 0; i < odd_.size(); ++i) odd_index_[odd_[i]] = i;
        for (std::size_t j = 0; j < even_.size(); ++j) even_index_[even_[j]] = j;
    }

    std::size_t odd_count() const { return odd_.size(); }
    std::size_t even_count() const { return even_.size(); }
    const std::vector<std::string>& odd_labels() const { return odd_; }
    const std::vector<std::string>& even_labels() const { return even_; }

    std::int64_t mult(std::size_t i, std::size_t j) const { return mult_[i * even_.size() + j]; }
    const std::vector<std::int64_t>& mult_flat() const { return mult_; }

    std::size_t odd_index(const std::string& label) const {
        auto it = odd_index_.find(label);
        if (it == odd_index_.end()) throw std::invalid_argument("unknown odd vertex: " + label);
        return it->second;
    }
    std::size_t even_index(const std::string& label) const {
        auto it = even_index_.find(label);
        if (it == even_index_.end()) throw std::invalid_argument("unknown even vertex: " + label);
        return it->second;
    }
    bool has_even(const std::string& label) const { return even_index_.count(label) != 0; }

    // Even-side two-step connection strength Sigma_i b_ij b_ij'.
    std::int64_t strength(std::size_t j, std::size_t jp) const {
        __int128 s = 0;
        for (std::size_t i = 0; i < odd_.size(); ++i)
            s += static_cast<__int128>(mult(i, j)) * mult(i, jp);
        if (s > INT64_MAX) throw std::overflow_error("connection strength overflow");
        return static_cast<std::int64_t>(s);
    }

    bool operator==(const BipartiteGraph& o) const {
        return odd_ == o.odd_ && even_ == o.even_ && mult_ == o.mult_;
    }

private:
    static void check_labels(const std::vector<std::string>& labels) {
        std::set<std::string> seen;
        for (const auto& l : labels) {
            if (l.empty()) throw std::invalid_argument("empty vertex label");
            if (!seen.insert(l).second) throw std::invalid_argument("duplicate vertex label: " + l);
        }
    }

    std::vector<std::string> odd_, even_;
    std::vector<std::int64_t> mult_;
    std::map<std::string, std::size_t> odd_index_, even_index_;
};

struct VertexSet {
    std::vector<std::string> members;  // even-vertex labels, kept sorted & unique

    static VertexSet of(std::vector<std::string> labels) {
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        return {std::move(labels)};
    }
    bool contains(const std::string& l) const {
        return std::binary_search(members.begin(), members.end(), l);
    }
    std::size_t size() const { return members.size(); }
    bool empty() const { return members.empty(); }
};

inline BipartiteGraph transpose(const BipartiteGraph& g) {
    std::vector<std::int64_t> t(g.mult_flat().size());
    for (std::size_t i = 0; i < g.odd_count(); ++i)
        for (std::size_t j = 0; j < g.even_count(); ++j)
            t[j * g.odd_count() + i] = g.mult(i, j);
    return BipartiteGraph(g.even_labels(), g.odd_labels(), std::move(t));
}

namespace detail {
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

private:
    std::vector<std::size_t> parent_;
};
}  // namespace detail

struct GraphComponent {
    std::vector<std::size_t> odd, even;  // indices into the parent graph
};

inline std::vector<GraphComponent> components(const BipartiteGraph& g) {
    const std::size_t nI = g.odd_count(), nJ = g.even_count();
    detail::UnionFind uf(nI + nJ);
    for (std::size_t i = 0; i < nI; ++i)
        for (std::size_t j = 0; j < nJ; ++j)
            if (g.mult(i, j) != 0) uf.unite(i, nI + j);
    std::map<std::size_t, GraphComponent> comps;
    for (std::size_t i = 0; i < nI; ++i) comps[uf.find(i)].odd.push_back(i);
    for (std::size_t j = 0; j < nJ; ++j) comps[uf.find(nI + j)].even.push_back(j);
    std::vector<GraphComponent> out;
    for (auto& [root, comp] : comps) out.push_back(std::move(comp));
    return out;
}

inline bool is_connected(const BipartiteGraph& g) { return components(g).size() == 1; }

// Boundary of an even-vertex set F: all even vertices outside F joined to F
// by a length-two path through an odd vertex.
inline VertexSet boundary(const BipartiteGraph& g, const VertexSet& F) {
    if (F.empty()) throw std::invalid_argument("boundary: empty vertex set");
    std::vector<bool> in_F(g.even_count(), false);
    for (const auto& l : F.members) in_F[g.even_index(l)] = true;
    std::vector<bool> odd_hit(g.odd_count(), false);
    for (std::size_t i = 0; i < g.odd_count(); ++i)
        for (std::size_t j = 0; j < g.even_count(); ++j)
            if (in_F[j] && g.mult(i, j) != 0) odd_hit[i] = true;
    std::vector<std::string> out;
    for (std::size_t j = 0; j < g.even_count(); ++j) {
        if (in_F[j]) continue;
        for (std::size_t i = 0; i < g.odd_count(); ++i)
            if (odd_hit[i] && g.mult(i, j) != 0) {
                out.push_back(g.even_labels()[j]);
                break;
            }
    }
    return VertexSet::of(std::move(out));
}

// Handy named constructors used across tests and the enumerator.

// Path graph A_n on n vertices v1..vn, odd side = odd positions.
inline BipartiteGraph coxeter_a(int n) {
    if (n < 2) throw std::invalid_argument("A_n needs n >= 2 for a bipartite edge");
    std::vector<std::string> odd, even;
    for (int v = 1; v <= n; ++v) (v % 2 == 1 ? odd : even).push_back("v" + std::to_string(v));
    std::vector<std::int64_t> mult(odd.size() * even.size(), 0);
    auto idx = [&](const std::string& l, const std::vector<std::string>& side) {
        return static_cast<std::size_t>(std::find(side.begin(), side.end(), l) - side.begin());
    };
    for (int v = 1; v < n; ++v) {
        std::string a = "v" + std::to_string(v), b = "v" + std::to_string(v + 1);
        std::size_t i = idx(v % 2 == 1 ? a : b, odd);
        std::size_t j = idx(v % 2 == 1 ? b : a, even);
        mult[i * even.size() + j] = 1;
    }
    return BipartiteGraph(odd, even, mult);
}

// Tree on a path v1..v_{n-1} with one extra vertex u attached to v3.
// n = 6,7,8 give E6, E7, E8; n = 9 the affine E8; n = 10 the graph E10.
inline BipartiteGraph e_series(int n) {
    if (n < 6) throw std::invalid_argument("E_n series needs n >= 6");
    struct Edge { int a, b; };
    std::vector<Edge> edges;
    for (int v = 1; v < n - 1; ++v) edges.push_back({v, v + 1});
    edges.push_back({3, n});  // u = vertex n hangs off v3
    // 2-color by parity of distance from v1; u sits at distance 3.
    auto color = [&](int v) { return v == n ? 1 : (v - 1) % 2; };
    std::vector<std::string> odd, even;
    for (int v = 1; v <= n; ++v)
        (color(v) == 1 ? odd : even).push_back("v" + std::to_string(v));
    std::vector<std::int64_t> mult(odd.size() * even.size(), 0);
    auto pos = [&](int v) {
        const auto& side = color(v) == 1 ? odd : even;
        return static_cast<std::size_t>(
            std::find(side.begin(), side.end(), "v" + std::to_string(v)) - side.begin());
    };
    for (auto [a, b] : edges) {
        int o = color(a) == 1 ? a : b, e = color(a) == 1 ? b : a;
        mult[pos(o) * even.size() + pos(e)] = 1;
    }
    return BipartiteGraph(odd, even, mult);
}

// D_n: path v1..v_{n-1} with extra vertex u attached to v2 (n >= 4).
inline BipartiteGraph coxeter_d(int n) {
    if (n < 4) throw std::invalid_argument("D_n needs n >= 4");
    std::vector<std::pair<int, int>> edges;
    for (int v = 1; v < n - 1; ++v) edges.emplace_back(v, v + 1);
    edges.emplace_back(2, n);  // u = vertex n
    auto color = [&](int v) { return v == n ? 0 : (v - 1) % 2; };
    std::vector<std::string> odd, even;
    for (int v = 1; v <= n; ++v) (color(v) == 1 ? odd : even).push_back("v" + std::to_string(v));
    std::vector<std::int64_t> mult(odd.size() * even.size(), 0);
    auto pos = [&](int v) {
        const auto& side = color(v) == 1 ? odd : even;
        return static_cast<std::size_t>(
            std::find(side.begin(), side.end(), "v" + std::to_string(v)) - side.begin());
    };
    for (auto [a, b] : edges) {
        int o = color(a) == 1 ? a : b, e = color(a) == 1 ? b : a;
        mult[pos(o) * even.size() + pos(e)] = 1;
    }
    return BipartiteGraph(odd, even, mult);
}

}  // namespace subspec

#endif
