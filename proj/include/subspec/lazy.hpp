#ifndef SUBSPEC_LAZY_HPP
#define SUBSPEC_LAZY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "subspec/exact.hpp"
#include "subspec/graph.hpp"

namespace subspec {

// Lazily generated infinite weighted graph, presented on its even vertices:
// the neighbor oracle returns two-step connection strengths (self included),
// the weight oracle a strictly positive Markov weight.  Both oracles must be
// deterministic; the Markov relation is checked on every queried vertex.
class LazyWeightedGraph {
public:
    using Vertex = std::int64_t;
    using StrengthMap = std::map<Vertex, std::int64_t>;

    LazyWeightedGraph(std::string name, Vertex basepoint, Rational lambda_inv,
                      std::function<StrengthMap(Vertex)> strengths,
                      std::function<Rational(Vertex)> weight, double markov_tol = 1e-9)
        : name_(std::move(name)),
          basepoint_(basepoint),
          lambda_inv_(std::move(lambda_inv)),
          strengths_fn_(std::move(strengths)),
          weight_fn_(std::move(weight)),
          tol_(markov_tol),
          cache_(std::make_shared<Cache>()) {}

    const std::string& name() const { return name_; }
    Vertex basepoint() const { return basepoint_; }
    const Rational& lambda_inv() const { return lambda_inv_; }
    double lambda_inv_d() const { return to_double(lambda_inv_); }

    Rational weight(Vertex v) const {
        auto it = cache_->weights.find(v);
        if (it != cache_->weights.end()) return it->second;
        Rational w = weight_fn_(v);
        if (!(w > 0))
            throw std::domain_error(name_ + ": weight oracle returned nonpositive value at vertex " +
                                    std::to_string(v));
        cache_->weights.emplace(v, w);
        return w;
    }

    StrengthMap strengths(Vertex v) const {
        auto it = cache_->strengths.find(v);
        if (it != cache_->strengths.end()) return it->second;
        StrengthMap s = strengths_fn_(v);
        for (const auto& [u, k] : s) {
            if (k < 0) throw std::domain_error(name_ + ": negative connection strength");
            if (u != v) {
                StrengthMap back = strengths_fn_(u);
                auto bit = back.find(v);
                if (bit == back.end() || bit->second != k)
                    throw std::domain_error(name_ + ": neighbor oracle is not symmetric at " +
                                            std::to_string(v) + "," + std::to_string(u));
            }
        }
        cache_->strengths.emplace(v, s);
        check_markov(v, s);
        return s;
    }

    // Vertices within strength-graph distance `radius` of the basepoint,
    // in BFS order.
    std::vector<Vertex> ball(std::size_t radius) const {
        std::vector<Vertex> order{basepoint_};
        std::set<Vertex> seen{basepoint_};
        std::size_t frontier_begin = 0;
        for (std::size_t r = 0; r < radius; ++r) {
            std::size_t frontier_end = order.size();
            for (std::size_t k = frontier_begin; k < frontier_end; ++k)
                for (const auto& [u, s] : strengths(order[k]))
                    if (s != 0 && seen.insert(u).second) order.push_back(u);
            if (order.size() == frontier_end) break;
            frontier_begin = frontier_end;
        }
        return order;
    }

private:
    struct Cache {
        std::map<Vertex, Rational> weights;
        std::map<Vertex, StrengthMap> strengths;
        std::set<Vertex> markov_checked;
    };

    void check_markov(Vertex v, const StrengthMap& s) const {
        if (!cache_->markov_checked.insert(v).second) return;
        Rational acc(0);
        for (const auto& [u, k] : s) acc += Rational(static_cast<long>(k)) * weight(u);
        Rational diff = acc - lambda_inv_ * weight(v);
        double rel = std::abs(to_double(diff)) / std::abs(to_double(lambda_inv_ * weight(v)));
        if (rel > tol_)
            throw std::domain_error(name_ + ": Markov relation fails at vertex " +
                                    std::to_string(v) + " (relative residual " +
                                    std::to_string(rel) + ")");
    }

    std::string name_;
    Vertex basepoint_;
    Rational lambda_inv_;
    std::function<StrengthMap(Vertex)> strengths_fn_;
    std::function<Rational(Vertex)> weight_fn_;
    double tol_;
    std::shared_ptr<Cache> cache_;
};

namespace detail {

// Memoized three-term weight recurrences. Weight positivity is enforced at
// the access site in LazyWeightedGraph.
class HalfLineWeights {
public:
    explicit HalfLineWeights(Rational lambda_inv) : li_(std::move(lambda_inv)) { w_ = {Rational(1)}; }
    Rational operator()(std::int64_t k) {
        if (k < 0) throw std::domain_error("a_inf: negative vertex");
        while (static_cast<std::int64_t>(w_.size()) <= k) {
            std::size_t n = w_.size();
            Rational next;
            if (n == 1) next = (li_ - 1) * w_[0];
            else next = (li_ - 2) * w_[n - 1] - w_[n - 2];
            w_.push_back(next);
        }
        return w_[static_cast<std::size_t>(k)];
    }

private:
    Rational li_;
    std::vector<Rational> w_;
};

class FullLineWeights {
public:
    explicit FullLineWeights(Rational lambda_inv) : li_(std::move(lambda_inv)) {
        w_ = {Rational(1)};
        lo_ = 0;
    }
    Rational operator()(std::int64_t k) {
        // Symmetric recurrence t_{k+1} = (li-2) t_k - t_{k-1} seeded by the
        // geometric ratio r with r + 1/r + 2 = li (r >= 1 branch).
        while (hi() < k) grow_hi();
        while (lo_ > k) grow_lo();
        return w_[static_cast<std::size_t>(k - lo_)];
    }

private:
    std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(w_.size()) - 1; }
    void grow_hi() {
        if (w_.size() == 1) {
            w_.push_back(ratio_times(w_[0]));
            return;
        }
        w_.push_back((li_ - 2) * w_[w_.size() - 1] - w_[w_.size() - 2]);
    }
    void grow_lo() {
        if (w_.size() == 1) {
            w_.insert(w_.begin(), ratio_div(w_[0]));
            --lo_;
            return;
        }
        w_.insert(w_.begin(), (li_ - 2) * w_[0] - w_[1]);
        --lo_;
    }
    // r = ((li-2) + sqrt((li-2)^2 - 4))/2; exact when the discriminant is a
    // rational square (covers li = 4 and the t(1-t) = lambda family used in
    // the locally trivial couplings), else a double approximation.
    Rational ratio() {
        Rational d = (li_ - 2) * (li_ - 2) - 4;
        if (d < 0) throw std::domain_error("a_biinf: lambda_inv below 4 has no positive weights");
        if (auto s = exact_sqrt(d)) return ((li_ - 2) + *s) / 2;
        Rational approx;
        mpq_set_d(approx.get_mpq_t(), (to_double(li_) - 2 + std::sqrt(to_double(d))) / 2);
        return approx;
    }
    Rational ratio_times(const Rational& w) { return w * ratio(); }
    Rational ratio_div(const Rational& w) { return w / ratio(); }

    Rational li_;
    std::vector<Rational> w_;
    std::int64_t lo_ = 0;
};

}  // namespace detail

// Half line 0-1-2-..., even vertices indexed k = 0,1,2,... (vertex 2k).
inline LazyWeightedGraph lazy_a_inf(Rational lambda_inv, double markov_tol = 1e-9) {
    auto weights = std::make_shared<detail::HalfLineWeights>(lambda_inv);
    return LazyWeightedGraph(
        "A_inf", 0, lambda_inv,
        [](std::int64_t k) -> LazyWeightedGraph::StrengthMap {
            if (k < 0) throw std::domain_error("a_inf: negative vertex");
            if (k == 0) return {{0, 1}, {1, 1}};
            return {{k - 1, 1}, {k, 2}, {k + 1, 1}};
        },
        [weights](std::int64_t k) { return (*weights)(k); }, markov_tol);
}

// Two-sided line, even vertices indexed by all integers.
inline LazyWeightedGraph lazy_a_biinf(Rational lambda_inv, double markov_tol = 1e-9) {
    auto weights = std::make_shared<detail::FullLineWeights>(lambda_inv);
    return LazyWeightedGraph(
        "A_biinf", 0, lambda_inv,
        [](std::int64_t k) -> LazyWeightedGraph::StrengthMap {
            return {{k - 1, 1}, {k, 2}, {k + 1, 1}};
        },
        [weights](std::int64_t k) { return (*weights)(k); }, markov_tol);
}

// D_inf: two horns a (vertex 0) and b (vertex -1) joined through a common
// odd vertex to a half line; remaining even vertices are 1, 2, 3, ...
inline LazyWeightedGraph lazy_d_inf(Rational lambda_inv, double markov_tol = 1e-9) {
    struct Weights {
        Rational li;
        std::vector<Rational> tail;  // tail[0] = t(vertex 1)
        Rational at(std::int64_t v) {
            if (v == 0 || v == -1) return Rational(1);
            while (static_cast<std::int64_t>(tail.size()) < v) {
                std::size_t n = tail.size();
                Rational next;
                if (n == 0) next = li - 2;                      // from the horn relation
                else if (n == 1) next = (li - 2) * tail[0] - 2;  // junction sees both horns
                else next = (li - 2) * tail[n - 1] - tail[n - 2];
                tail.push_back(next);
            }
            return tail[static_cast<std::size_t>(v - 1)];
        }
    };
    auto weights = std::make_shared<Weights>();
    weights->li = lambda_inv;
    return LazyWeightedGraph(
        "D_inf", 0, lambda_inv,
        [](std::int64_t v) -> LazyWeightedGraph::StrengthMap {
            if (v == 0) return {{0, 1}, {-1, 1}, {1, 1}};
            if (v == -1) return {{-1, 1}, {0, 1}, {1, 1}};
            if (v == 1) return {{0, 1}, {-1, 1}, {1, 2}, {2, 1}};
            if (v < -1) throw std::domain_error("d_inf: no such vertex");
            return {{v - 1, 1}, {v, 2}, {v + 1, 1}};
        },
        [weights](std::int64_t v) { return weights->at(v); }, markov_tol);
}

inline LazyWeightedGraph lazy_builtin(const std::string& name, Rational lambda_inv,
                                      double markov_tol = 1e-9) {
    if (name == "a_inf") return lazy_a_inf(std::move(lambda_inv), markov_tol);
    if (name == "a_biinf") return lazy_a_biinf(std::move(lambda_inv), markov_tol);
    if (name == "d_inf") return lazy_d_inf(std::move(lambda_inv), markov_tol);
    throw std::invalid_argument("unknown lazy builtin: " + name);
}

// Boundary of a finite even-vertex set in a lazy graph.
inline std::vector<LazyWeightedGraph::Vertex> lazy_boundary(
    const LazyWeightedGraph& g, const std::vector<LazyWeightedGraph::Vertex>& F) {
    if (F.empty()) throw std::invalid_argument("boundary: empty vertex set");
    std::set<LazyWeightedGraph::Vertex> in(F.begin(), F.end());
    std::set<LazyWeightedGraph::Vertex> out;
    for (auto v : F)
        for (const auto& [u, s] : g.strengths(v))
            if (s != 0 && !in.count(u)) out.insert(u);
    return {out.begin(), out.end()};
}

// Finite bipartite path truncations of the line graphs, with interior masks
// (a vertex is interior when its full neighbor set lies in the truncation).
struct BipartiteTruncation {
    BipartiteGraph graph;
    std::vector<bool> even_interior;  // indexed like graph.even_labels()
    std::vector<bool> odd_interior;
};

// Path on integer vertices lo..hi (inclusive); even side = even integers.
// `two_sided` marks both ends as cuts; otherwise only the hi end is a cut
// (the truncation of the half line starting at lo = 0).
inline BipartiteTruncation line_truncation(std::int64_t lo, std::int64_t hi, bool two_sided) {
    if (hi - lo + 1 < 2) throw std::invalid_argument("line_truncation: need at least two vertices");
    std::vector<std::string> odd, even;
    std::vector<std::int64_t> odd_ids, even_ids;
    for (std::int64_t v = lo; v <= hi; ++v) {
        bool is_even = ((v % 2) + 2) % 2 == 0;
        (is_even ? even : odd).push_back(std::to_string(v));
        (is_even ? even_ids : odd_ids).push_back(v);
    }
    std::vector<std::int64_t> mult(odd.size() * even.size(), 0);
    auto index_of = [](const std::vector<std::int64_t>& ids, std::int64_t v) {
        return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), v) - ids.begin());
    };
    for (std::int64_t v = lo; v < hi; ++v) {
        std::int64_t a = v, b = v + 1;
        bool a_even = ((a % 2) + 2) % 2 == 0;
        std::int64_t o = a_even ? b : a, e = a_even ? a : b;
        mult[index_of(odd_ids, o) * even.size() + index_of(even_ids, e)] = 1;
    }
    BipartiteTruncation out{BipartiteGraph(odd, even, mult), {}, {}};
    out.even_interior.resize(even_ids.size());
    out.odd_interior.resize(odd_ids.size());
    for (std::size_t j = 0; j < even_ids.size(); ++j) {
        std::int64_t v = even_ids[j];
        bool ok_hi = v + 2 <= hi;
        bool ok_lo = two_sided ? (v - 2 >= lo) : (v - 2 >= 0 || v == 0);
        out.even_interior[j] = ok_hi && ok_lo;
    }
    for (std::size_t i = 0; i < odd_ids.size(); ++i) {
        std::int64_t v = odd_ids[i];
        bool ok_hi = v + 1 <= hi;
        bool ok_lo = two_sided ? (v - 1 >= lo) : true;
        out.odd_interior[i] = ok_hi && ok_lo;
    }
    return out;
}

}  // namespace subspec

#endif
