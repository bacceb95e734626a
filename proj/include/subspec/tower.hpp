#ifndef SUBSPEC_TOWER_HPP
#define SUBSPEC_TOWER_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "subspec/exact.hpp"
#include "subspec/graph.hpp"
#include "subspec/spectral.hpp"

namespace subspec {

// One graph-level basic construction step: the graph is transposed (new even
// vertices are the old odd ones) and the new even weights are lambda *
// Lambda(t), kept un-normalized so towers compose.
template <class Scalar>
inline MarkovWeighted<Scalar> basic_construction_step(const MarkovWeighted<Scalar>& m) {
    const BipartiteGraph& g = m.graph;
    std::vector<Scalar> s(g.odd_count(), Scalar(0));
    for (std::size_t i = 0; i < g.odd_count(); ++i)
        for (std::size_t j = 0; j < g.even_count(); ++j)
            s[i] += Scalar(static_cast<long>(g.mult(i, j))) * m.weights[j];
    for (auto& v : s) v = v / m.lambda_inv;  // lambda * Lambda(t)
    return MarkovWeighted<Scalar>{transpose(g), std::move(s), m.lambda_inv, 0};
}

template <class Scalar>
inline MarkovWeighted<Scalar> renormalized(MarkovWeighted<Scalar> m, std::size_t basepoint) {
    Scalar b = m.weights.at(basepoint);
    for (auto& w : m.weights) w = w / b;
    m.basepoint = basepoint;
    return m;
}

template <class Scalar>
struct TowerLevel {
    bool even_side = true;               // level parity: even levels live on J
    std::vector<BigInt> dims;            // path counts from the basepoint
    std::vector<Scalar> traces;          // minimal-projection traces
    BigInt total_dim;                    // sum of squared path counts
};

template <class Scalar>
struct BratteliTower {
    MarkovWeighted<Scalar> base;
    std::vector<TowerLevel<Scalar>> levels;  // levels 0..depth
};

// Bratteli tower of the Jones sequence attached to a pointed Markov weighted
// graph: dimension vectors by path counting from the basepoint (inclusion
// matrices alternate Lambda, Lambda^t), traces lambda^n t on even levels and
// lambda^{n+1} s (s = Lambda t) on odd levels, so that dims . traces = 1.
template <class Scalar>
inline BratteliTower<Scalar> build_tower(const MarkovWeighted<Scalar>& m, int depth,
                                         double tol = kDefaultTol, bool check_markov = true) {
    if (depth < 1) throw std::invalid_argument("build_tower: depth >= 1 required");
    const BipartiteGraph& g = m.graph;
    if (m.weights.size() != g.even_count())
        throw std::invalid_argument("build_tower: weight vector has wrong length");
    {
        Scalar one(1);
        double dev = std::abs(to_double(m.weights.at(m.basepoint) - one));
        if (dev > tol)
            throw std::invalid_argument("build_tower: basepoint weight must be 1 (pointed graph)");
    }
    // Truncations of infinite graphs fail the Markov relation at the cut row
    // only; callers that know this pass check_markov = false.
    if (check_markov) verify_markov_or_throw(m, tol);
    BratteliTower<Scalar> tower{m, {}};
    std::vector<Scalar> s(g.odd_count(), Scalar(0));
    for (std::size_t i = 0; i < g.odd_count(); ++i)
        for (std::size_t j = 0; j < g.even_count(); ++j)
            s[i] += Scalar(static_cast<long>(g.mult(i, j))) * m.weights[j];
    Scalar lambda_pow(1);  // lambda^n for the current even pair of levels
    std::vector<BigInt> even_dims(g.even_count(), BigInt(0)), odd_dims;
    even_dims[m.basepoint] = 1;
    for (int level = 0; level <= depth; ++level) {
        TowerLevel<Scalar> lv;
        lv.even_side = level % 2 == 0;
        if (lv.even_side) {
            if (level > 0) {
                even_dims.assign(g.even_count(), BigInt(0));
                for (std::size_t j = 0; j < g.even_count(); ++j)
                    for (std::size_t i = 0; i < g.odd_count(); ++i)
                        even_dims[j] += BigInt(static_cast<long>(g.mult(i, j))) * odd_dims[i];
                lambda_pow = lambda_pow / m.lambda_inv;  // advance lambda^n
            }
            lv.dims = even_dims;
            lv.traces.resize(g.even_count());
            for (std::size_t j = 0; j < g.even_count(); ++j)
                lv.traces[j] = lambda_pow * m.weights[j];
        } else {
            odd_dims.assign(g.odd_count(), BigInt(0));
            for (std::size_t i = 0; i < g.odd_count(); ++i)
                for (std::size_t j = 0; j < g.even_count(); ++j)
                    odd_dims[i] += BigInt(static_cast<long>(g.mult(i, j))) * even_dims[j];
            lv.dims = odd_dims;
            lv.traces.resize(g.odd_count());
            for (std::size_t i = 0; i < g.odd_count(); ++i)
                lv.traces[i] = lambda_pow / m.lambda_inv * s[i];
        }
        lv.total_dim = 0;
        for (const auto& d : lv.dims) lv.total_dim += d * d;
        tower.levels.push_back(std::move(lv));
    }
    return tower;
}

template <class Scalar>
inline void verify_markov_or_throw(const MarkovWeighted<Scalar>& m, double tol) {
    auto rep = verify_markov(m.graph, m.weights, m.lambda_inv, tol);
    if (!rep.pass)
        throw std::invalid_argument("Markov relation fails (relative residual " +
                                    std::to_string(rep.residual) + ")");
}

// Trace-state defect max_n |dims_n . traces_n - 1|; identically zero for
// exact rational towers.
template <class Scalar>
inline double trace_state_defect(const BratteliTower<Scalar>& tw) {
    double worst = 0.0;
    for (const auto& lv : tw.levels) {
        Scalar acc(0);
        for (std::size_t k = 0; k < lv.dims.size(); ++k)
            acc += Scalar(Rational(lv.dims[k]).get_d()) * lv.traces[k];
        worst = std::max(worst, std::abs(to_double(acc) - 1.0));
    }
    return worst;
}

inline double trace_state_defect(const BratteliTower<Rational>& tw) {
    double worst = 0.0;
    for (const auto& lv : tw.levels) {
        Rational acc(0);
        for (std::size_t k = 0; k < lv.dims.size(); ++k) acc += Rational(lv.dims[k]) * lv.traces[k];
        acc -= 1;
        worst = std::max(worst, std::abs(to_double(acc)));
    }
    return worst;
}

struct GrowthRateReport {
    double estimate = 0.0;       // (dim_n / dim_{n-2})^{1/2} at the deepest pair
    double norm_squared = 0.0;   // ||Lambda||^2 of the level-0 graph
};

template <class Scalar>
inline GrowthRateReport growth_rate(const BratteliTower<Scalar>& tw, double tol = kDefaultTol) {
    if (tw.levels.size() < 6)
        throw std::invalid_argument("growth_rate: need at least 6 levels");
    const auto& deep = tw.levels[tw.levels.size() - 1].total_dim;
    const auto& prev = tw.levels[tw.levels.size() - 3].total_dim;
    GrowthRateReport rep;
    rep.estimate = std::sqrt(Rational(deep).get_d() / Rational(prev).get_d());
    rep.norm_squared = norm_squared(tw.base.graph, tol);
    return rep;
}

struct CouplingReport {
    double residual_dN = 0.0;
    double residual_eigen = 0.0;
    bool pass = false;
    std::vector<bool> even_interior, odd_interior;  // the mask actually used
};

// Checks d_N = Lambda(d_M) and Lambda^t Lambda(d_M) = index d_M. For
// truncations of infinite graphs, pass interior masks: residuals are taken
// over interior vertices only and the mask is echoed in the report.
inline CouplingReport coupling_check(const BipartiteGraph& g, const std::vector<double>& d_M,
                                     const std::vector<double>& d_N, double index,
                                     double tol = 1e-8,
                                     std::vector<bool> even_interior = {},
                                     std::vector<bool> odd_interior = {}) {
    if (d_M.size() != g.even_count() || d_N.size() != g.odd_count())
        throw std::invalid_argument("coupling_check: dimension mismatch");
    for (double v : d_M)
        if (!(v > 0)) throw std::invalid_argument("coupling_check: d_M must be positive");
    for (double v : d_N)
        if (!(v > 0)) throw std::invalid_argument("coupling_check: d_N must be positive");
    if (even_interior.empty()) even_interior.assign(g.even_count(), true);
    if (odd_interior.empty()) odd_interior.assign(g.odd_count(), true);
    if (even_interior.size() != g.even_count() || odd_interior.size() != g.odd_count())
        throw std::invalid_argument("coupling_check: interior mask has wrong length");
    double max_dN = 0.0, max_dM = 0.0;
    for (double v : d_N) max_dN = std::max(max_dN, std::abs(v));
    for (double v : d_M) max_dM = std::max(max_dM, std::abs(v));
    CouplingReport rep;
    for (std::size_t i = 0; i < g.odd_count(); ++i) {
        if (!odd_interior[i]) continue;
        double acc = 0.0;
        for (std::size_t j = 0; j < g.even_count(); ++j) acc += g.mult(i, j) * d_M[j];
        rep.residual_dN = std::max(rep.residual_dN, std::abs(acc - d_N[i]) / max_dN);
    }
    for (std::size_t j = 0; j < g.even_count(); ++j) {
        if (!even_interior[j]) continue;
        double acc = 0.0;
        for (std::size_t jp = 0; jp < g.even_count(); ++jp) acc += g.strength(j, jp) * d_M[jp];
        rep.residual_eigen = std::max(rep.residual_eigen, std::abs(acc - index * d_M[j]) / max_dM);
    }
    rep.pass = rep.residual_dN <= tol && rep.residual_eigen <= tol;
    rep.even_interior = std::move(even_interior);
    rep.odd_interior = std::move(odd_interior);
    return rep;
}

struct StandardWeights {
    std::vector<double> v;  // even side (K), v_* = 1 at the basepoint
    std::vector<double> u;  // odd side (L), u = Gamma^t(v)
    double lambda_inv = 0.0;
    double sqrt_index = 0.0;  // [M:N]^{1/2}, reported alongside u (see 2.3)
};

// Standard weight vectors of a connected graph viewed as the standard graph
// Gamma (even set K carries v). Computes v = Perron vector of Gamma Gamma^t
// normalized at the basepoint, u = Gamma^t(v), lambda_inv = ||Gamma||^2.
inline StandardWeights standard_weights(const BipartiteGraph& gamma, const std::string& basepoint,
                                        double tol = kDefaultTol) {
    auto m = markov_weight(gamma, basepoint, tol);
    StandardWeights out;
    out.v = m.weights;
    out.lambda_inv = m.lambda_inv;
    out.sqrt_index = std::sqrt(m.lambda_inv);
    out.u.assign(gamma.odd_count(), 0.0);
    for (std::size_t i = 0; i < gamma.odd_count(); ++i)
        for (std::size_t j = 0; j < gamma.even_count(); ++j)
            out.u[i] += gamma.mult(i, j) * m.weights[j];
    return out;
}

}  // namespace subspec

#endif
