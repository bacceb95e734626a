#ifndef SUBSPEC_FOLNER_HPP
#define SUBSPEC_FOLNER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "subspec/exact.hpp"
#include "subspec/graph.hpp"
#include "subspec/lazy.hpp"
#include "subspec/spectral.hpp"

namespace subspec {

struct FolnerCertificate {
    std::vector<std::int64_t> F;         // even vertices, sorted
    std::vector<std::int64_t> boundary;  // recomputed dF, sorted
    double epsilon = 0.0;
    double boundary_norm = 0.0;  // ||t restricted to dF||_2
    double bulk_norm = 0.0;      // ||t restricted to F||_2
    double ratio = 0.0;
    bool pass = false;  // strict inequality boundary_norm < epsilon * bulk_norm
};

struct SearchOutcome {
    bool found = false;
    std::optional<FolnerCertificate> certificate;
    std::size_t frontier_size = 0;  // vertices examined
    double best_ratio = std::numeric_limits<double>::infinity();
};

namespace detail {

inline double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::abs(a - b)));
}

// Grows an even-vertex set one vertex at a time, maintaining the boundary
// and log-space squared norms (bulk only ever grows, so no cancellation;
// the boundary sum is recomputed from the boundary set, which stays small
// on the line-like graphs this search targets).
class IncrementalFolnerSet {
public:
    explicit IncrementalFolnerSet(const LazyWeightedGraph& g) : g_(g) {}

    void add(std::int64_t v) {
        if (!F_.insert(v).second) return;
        log_bulk2_ = logaddexp(log_bulk2_, 2.0 * log_of(g_.weight(v)));
        bdry_.erase(v);
        for (const auto& [u, s] : g_.strengths(v))
            if (s != 0 && u != v && !F_.count(u)) bdry_.insert(u);
    }

    double log_ratio2() const {
        double lb = -std::numeric_limits<double>::infinity();
        for (auto u : bdry_) lb = logaddexp(lb, 2.0 * log_of(g_.weight(u)));
        return lb - log_bulk2_;
    }

    double ratio() const { return std::exp(0.5 * log_ratio2()); }

    // Exact certificate for the current set (fresh rational summation).
    FolnerCertificate certificate(double eps) const {
        FolnerCertificate c;
        c.F.assign(F_.begin(), F_.end());
        c.boundary.assign(bdry_.begin(), bdry_.end());
        c.epsilon = eps;
        Rational bulk2(0), bdry2(0);
        for (auto v : F_) bulk2 += g_.weight(v) * g_.weight(v);
        for (auto u : bdry_) bdry2 += g_.weight(u) * g_.weight(u);
        c.bulk_norm = std::sqrt(to_double(bulk2));
        c.boundary_norm = bdry2 == 0 ? 0.0 : std::sqrt(to_double(bdry2));
        c.ratio = bdry2 == 0 ? 0.0 : std::sqrt(to_double(bdry2 / bulk2));
        Rational e;
        mpq_set_d(e.get_mpq_t(), eps);
        c.pass = bdry2 < e * e * bulk2;
        return c;
    }

    std::size_t size() const { return F_.size(); }

private:
    const LazyWeightedGraph& g_;
    std::set<std::int64_t> F_, bdry_;
    double log_bulk2_ = -std::numeric_limits<double>::infinity();
};

struct SparseRow {
    std::vector<std::pair<std::size_t, double>> entries;
};

// Power iteration on a sparse symmetric nonnegative matrix with a bounded
// iteration budget; used only on truncations, where an approximate top
// vector is all the level-set scan needs (certificates are re-validated
// exactly).
inline std::pair<double, std::vector<double>> sparse_power_iteration(
    const std::vector<SparseRow>& rows, double tol, std::size_t max_iters) {
    const std::size_t n = rows.size();
    std::vector<double> x(n, 1.0), y(n);
    double rho = 0.0;
    for (std::size_t it = 0; it < max_iters; ++it) {
        double nx = 0.0;
        for (double v : x) nx += v * v;
        nx = std::sqrt(nx);
        for (auto& v : x) v /= nx;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (auto [j, a] : rows[i].entries) s += a * x[j];
            y[i] = s;
        }
        rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += x[i] * y[i];
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(y[i] - rho * x[i]));
        x = y;
        if (res <= tol * std::max(1.0, rho)) break;
    }
    double nx = 0.0;
    for (double v : x) nx += v * v;
    nx = std::sqrt(nx);
    for (auto& v : x) v /= nx;
    return {rho, x};
}

}  // namespace detail

// Evaluates condition (4.2.1) for an explicit finite F: exact norms, strict
// inequality against epsilon.
inline FolnerCertificate certificate_check(const LazyWeightedGraph& g,
                                           const std::vector<std::int64_t>& F, double eps) {
    if (F.empty()) throw std::invalid_argument("certificate_check: F must be nonempty");
    detail::IncrementalFolnerSet inc(g);
    for (auto v : F) inc.add(v);
    return inc.certificate(eps);
}

// Finite-graph version: F is a set of even labels of a Markov weighted graph.
inline FolnerCertificate certificate_check(const MarkovWeightedGraph& m, const VertexSet& F,
                                           double eps) {
    if (F.empty()) throw std::invalid_argument("certificate_check: F must be nonempty");
    VertexSet dF = boundary(m.graph, F);
    FolnerCertificate c;
    c.epsilon = eps;
    double bulk2 = 0.0, bdry2 = 0.0;
    for (const auto& l : F.members) {
        std::size_t j = m.graph.even_index(l);
        bulk2 += m.weights[j] * m.weights[j];
        c.F.push_back(static_cast<std::int64_t>(j));
    }
    for (const auto& l : dF.members) {
        std::size_t j = m.graph.even_index(l);
        bdry2 += m.weights[j] * m.weights[j];
        c.boundary.push_back(static_cast<std::int64_t>(j));
    }
    std::sort(c.F.begin(), c.F.end());
    std::sort(c.boundary.begin(), c.boundary.end());
    c.boundary_norm = std::sqrt(bdry2);
    c.bulk_norm = std::sqrt(bulk2);
    c.ratio = c.boundary_norm / c.bulk_norm;
    c.pass = c.boundary_norm < eps * c.bulk_norm;
    return c;
}

// Scans BFS balls around the basepoint (grown one layer at a time),
// returning the first certificate or Exhausted with the best ratio seen.
inline SearchOutcome interval_search(const LazyWeightedGraph& g, double eps,
                                     std::size_t max_size) {
    detail::IncrementalFolnerSet inc(g);
    SearchOutcome out;
    std::set<std::int64_t> seen{g.basepoint()};
    std::vector<std::int64_t> layer{g.basepoint()};
    const double log_eps2 = 2.0 * std::log(eps);
    while (!layer.empty() && inc.size() + layer.size() <= max_size) {
        for (auto v : layer) inc.add(v);
        double lr = inc.log_ratio2();
        out.best_ratio = std::min(out.best_ratio, std::exp(0.5 * lr));
        if (lr < log_eps2 + 1e-9) {
            auto cert = inc.certificate(eps);
            if (cert.pass) {
                out.found = true;
                out.certificate = cert;
                out.frontier_size = inc.size();
                return out;
            }
        }
        std::vector<std::int64_t> next;
        for (auto v : layer)
            for (const auto& [u, s] : g.strengths(v))
                if (s != 0 && seen.insert(u).second) next.push_back(u);
        layer = std::move(next);
    }
    out.frontier_size = inc.size();
    return out;
}

// The constructive search from the amenability theorem's proof: truncate by
// radius doubling, take an approximate Perron vector b0 of the truncated
// even-connection matrix, set b = T^{-1} b0 and scan its level sets,
// keeping the best ratio (ties: smallest |F|). delta = (lambda^4 eps^2)^4
// would gate the truncation norm; all level sets are scanned regardless.
inline SearchOutcome spectral_cut_search(const LazyWeightedGraph& g, double eps,
                                         std::size_t max_size = 10000) {
    Rational e;
    mpq_set_d(e.get_mpq_t(), eps);
    SearchOutcome out;
    const double log_eps2 = 2.0 * std::log(eps);
    std::size_t last_size = 0;
    for (std::size_t radius = 16;; radius *= 2) {
        auto ball = g.ball(radius);
        if (ball.size() > max_size) ball.resize(max_size);
        if (ball.size() == last_size) {
            out.frontier_size = last_size;
            return out;
        }
        last_size = ball.size();
        const std::size_t n = ball.size();
        std::map<std::int64_t, std::size_t> index;
        for (std::size_t k = 0; k < n; ++k) index[ball[k]] = k;
        std::vector<detail::SparseRow> rows(n);
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& [u, s] : g.strengths(ball[k])) {
                auto it = index.find(u);
                if (it != index.end() && s != 0)
                    rows[k].entries.emplace_back(it->second, static_cast<double>(s));
            }
        auto [rho, b0] = detail::sparse_power_iteration(rows, 1e-8, std::min<std::size_t>(5 * n, 12000));
        std::vector<double> b(n);
        for (std::size_t k = 0; k < n; ++k) b[k] = b0[k] / to_double(g.weight(ball[k]));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t c) { return b[a] > b[c]; });
        detail::IncrementalFolnerSet inc(g);
        double radius_best = std::numeric_limits<double>::infinity();
        std::size_t best_prefix = 0;
        for (std::size_t k = 0; k < n; ++k) {
            inc.add(ball[order[k]]);
            double r = std::exp(0.5 * inc.log_ratio2());
            if (r < radius_best) {
                radius_best = r;
                best_prefix = k + 1;
            }
        }
        out.best_ratio = std::min(out.best_ratio, radius_best);
        if (2.0 * std::log(radius_best) < log_eps2 + 1e-9) {
            detail::IncrementalFolnerSet confirm(g);
            for (std::size_t k = 0; k < best_prefix; ++k) confirm.add(ball[order[k]]);
            auto cert = confirm.certificate(eps);
            if (cert.pass) {
                out.found = true;
                out.certificate = cert;
                out.frontier_size = n;
                return out;
            }
        }
        if (n >= max_size) {
            out.frontier_size = n;
            return out;
        }
    }
}

// Finite-graph spectral cut: scan level sets of the Perron vector of
// Lambda^t Lambda; the full even set always yields ratio 0.
inline SearchOutcome spectral_cut_search(const MarkovWeightedGraph& m, double eps,
                                         double tol = kDefaultTol) {
    auto mk = verify_markov(m.graph, m.weights, m.lambda_inv, 1e-6);
    if (!mk.pass)
        throw std::invalid_argument("spectral_cut_search: weights are not Markov (residual " +
                                    std::to_string(mk.residual) + ")");
    GraphComponent all;
    for (std::size_t i = 0; i < m.graph.odd_count(); ++i) all.odd.push_back(i);
    for (std::size_t j = 0; j < m.graph.even_count(); ++j) all.even.push_back(j);
    auto pr = perron(gram_on_component(m.graph, all), tol);
    std::vector<double> b(m.graph.even_count());
    for (std::size_t j = 0; j < b.size(); ++j) b[j] = pr.vector[j] / m.weights[j];
    std::vector<std::size_t> order(m.graph.even_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t c) { return b[a] > b[c]; });
    SearchOutcome out;
    FolnerCertificate best;
    bool have_best = false;
    std::vector<std::string> prefix;
    for (std::size_t k = 0; k < order.size(); ++k) {
        prefix.push_back(m.graph.even_labels()[order[k]]);
        auto cert = certificate_check(m, VertexSet::of(prefix), eps);
        if (!have_best || cert.ratio < best.ratio) {
            best = cert;
            have_best = true;
        }
    }
    out.frontier_size = m.graph.even_count();
    out.best_ratio = best.ratio;
    out.certificate = best;
    out.found = best.pass;
    return out;
}

// Certified lower bound lambda_inv * ||t_F|| / ||t_{F u dF}|| <= ||Lambda||^2.
inline double norm_bound_from_certificate(double lambda_inv, const FolnerCertificate& cert) {
    double bulk2 = cert.bulk_norm * cert.bulk_norm;
    double bdry2 = cert.boundary_norm * cert.boundary_norm;
    return lambda_inv * cert.bulk_norm / std::sqrt(bulk2 + bdry2);
}

inline double norm_bound_from_certificate(const LazyWeightedGraph& g,
                                          const FolnerCertificate& cert) {
    return norm_bound_from_certificate(g.lambda_inv_d(), cert);
}

}  // namespace subspec

#endif
