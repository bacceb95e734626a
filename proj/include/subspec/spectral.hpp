#ifndef SUBSPEC_SPECTRAL_HPP
#define SUBSPEC_SPECTRAL_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "subspec/graph.hpp"
#include "subspec/polynomial.hpp"

namespace subspec {

inline constexpr double kDefaultTol = 1e-10;
inline constexpr std::size_t kPowerIterationCap = 1000000;

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReducibleMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PerronResult {
    double eigenvalue = 0.0;
    std::vector<double> vector;  // strictly positive, first entry 1
    double residual_inf = 0.0;
    std::size_t iterations = 0;
};

using SymMatrix = std::vector<std::vector<double>>;

namespace detail {

inline void check_symmetric_nonneg(const SymMatrix& A) {
    const std::size_t n = A.size();
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("perron: matrix not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (A[i][j] < 0) throw std::invalid_argument("perron: negative entry");
            if (A[i][j] != A[j][i]) throw std::invalid_argument("perron: matrix not symmetric");
        }
}

inline std::vector<std::vector<std::size_t>> support_components(const SymMatrix& A) {
    const std::size_t n = A.size();
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (A[i][j] != 0) uf.unite(i, j);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> out;
    for (auto& [r, v] : groups) out.push_back(std::move(v));
    return out;
}

}  // namespace detail

// Dominant eigenpair of a symmetric nonnegative irreducible matrix by power
// iteration with a Rayleigh-quotient convergence test. Deterministic all-ones
// start by default; an explicit seed randomizes the (strictly positive) start.
inline PerronResult perron(const SymMatrix& A, double tol = kDefaultTol,
                           std::optional<std::uint64_t> seed = std::nullopt) {
    detail::check_symmetric_nonneg(A);
    const std::size_t n = A.size();
    auto comps = detail::support_components(A);
    if (comps.size() > 1) {
        std::ostringstream msg;
        msg << "perron: reducible matrix with " << comps.size() << " components:";
        for (const auto& c : comps) {
            msg << " {";
            for (std::size_t k = 0; k < c.size(); ++k) msg << (k ? "," : "") << c[k];
            msg << "}";
        }
        throw ReducibleMatrixError(msg.str());
    }
    std::vector<double> x(n, 1.0);
    if (seed) {
        std::mt19937_64 rng(*seed);
        std::uniform_real_distribution<double> u(0.5, 1.5);
        for (auto& v : x) v = u(rng);
    }
    // Shift keeps the spectrum nonnegative so the Perron direction dominates
    // in magnitude even when -lambda_max is an eigenvalue of A.
    double shift = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double rowsum = 0.0;
        for (std::size_t j = 0; j < n; ++j) rowsum += A[i][j];
        shift = std::max(shift, rowsum);
    }
    std::vector<double> y(n);
    double rho = 0.0;
    std::size_t it = 0;
    for (; it < kPowerIterationCap; ++it) {
        double nx = 0.0;
        for (double v : x) nx += v * v;
        nx = std::sqrt(nx);
        for (auto& v : x) v /= nx;
        for (std::size_t i = 0; i < n; ++i) {
            double s = shift * x[i];
            for (std::size_t j = 0; j < n; ++j) s += A[i][j] * x[j];
            y[i] = s;
        }
        rho = 0.0;
        for (std::size_t i = 0; i < n; ++i) rho += x[i] * y[i];  // Rayleigh quotient of A+shift
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(y[i] - rho * x[i]));
        x = y;
        if (res <= tol * std::max(1.0, rho)) break;
    }
    if (it >= kPowerIterationCap)
        throw ConvergenceError("perron: power iteration did not converge within 10^6 iterations");
    PerronResult out;
    out.iterations = it + 1;
    out.eigenvalue = rho - shift;
    double x0 = x[0];
    if (!(x0 > 0)) throw ConvergenceError("perron: vector lost positivity");
    out.vector.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.vector[i] = x[i] / x0;
        if (!(out.vector[i] > 0)) throw ConvergenceError("perron: vector lost positivity");
    }
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += A[i][j] * out.vector[j];
        res = std::max(res, std::abs(s - out.eigenvalue * out.vector[i]));
    }
    out.residual_inf = res;
    return out;
}

// Gram matrix Lambda^t Lambda restricted to one connected component.
inline SymMatrix gram_on_component(const BipartiteGraph& g, const GraphComponent& comp) {
    SymMatrix G(comp.even.size(), std::vector<double>(comp.even.size(), 0.0));
    for (std::size_t a = 0; a < comp.even.size(); ++a)
        for (std::size_t b = 0; b < comp.even.size(); ++b)
            G[a][b] = static_cast<double>(g.strength(comp.even[a], comp.even[b]));
    return G;
}

inline std::vector<std::vector<BigInt>> gram_exact(const BipartiteGraph& g,
                                                   const GraphComponent& comp) {
    std::vector<std::vector<BigInt>> G(comp.even.size(), std::vector<BigInt>(comp.even.size()));
    for (std::size_t a = 0; a < comp.even.size(); ++a)
        for (std::size_t b = 0; b < comp.even.size(); ++b)
            G[a][b] = BigInt(static_cast<long>(g.strength(comp.even[a], comp.even[b])));
    return G;
}

struct NormReport {
    double norm_squared = 0.0;
    bool reducible = false;
    std::size_t component_count = 1;
    bool certified = false;  // exact char-poly cross-check ran
    IntPoly certificate_poly;  // char poly of the certified component's gram matrix
};

inline constexpr std::size_t kExactCrossCheckMaxSide = 12;

// Largest eigenvalue of Lambda^t Lambda. Reducible inputs are handled per
// component (max over components, flagged in the report). Components of side
// <= 12 are cross-checked against the exact characteristic polynomial.
inline NormReport norm_squared_report(const BipartiteGraph& g, double tol = kDefaultTol) {
    NormReport rep;
    auto comps = components(g);
    rep.component_count = comps.size();
    rep.reducible = comps.size() > 1;
    double best = 0.0;
    for (const auto& comp : comps) {
        auto G = gram_on_component(g, comp);
        double lam = perron(G, tol).eigenvalue;
        if (comp.even.size() <= kExactCrossCheckMaxSide) {
            auto p = to_rational(char_poly(gram_exact(g, comp)));
            Rational lo(-1), hi(1);
            for (std::size_t i = 0; i < G.size(); ++i) {
                Rational rowsum(0);
                for (std::size_t j = 0; j < G.size(); ++j)
                    rowsum += Rational(static_cast<long>(G[i][j]));
                if (rowsum + 1 > hi) hi = rowsum + 1;
            }
            Rational width;
            mpq_set_d(width.get_mpq_t(), std::max(tol / 4, 1e-14));
            auto iso = isolate_largest_root(p, lo, hi, width);
            double mid = to_double((iso.lo + iso.hi) / 2);
            if (std::abs(mid - lam) > std::max(tol, 1e-9))
                throw ConvergenceError("norm_squared: power iteration disagrees with exact root");
            lam = mid;
            if (comp.even.size() >= rep.certificate_poly.size()) {
                rep.certificate_poly = char_poly(gram_exact(g, comp));
            }
            rep.certified = true;
        }
        best = std::max(best, lam);
    }
    rep.norm_squared = best;
    return rep;
}

inline double norm_squared(const BipartiteGraph& g, double tol = kDefaultTol) {
    return norm_squared_report(g, tol).norm_squared;
}

// A Markov weighted bipartite graph (Lambda, t, lambda) with the weight
// vector indexed by even vertices.
template <class Scalar>
struct MarkovWeighted {
    BipartiteGraph graph;
    std::vector<Scalar> weights;  // on even vertices
    Scalar lambda_inv{};
    std::size_t basepoint = 0;  // even index
};

using MarkovWeightedGraph = MarkovWeighted<double>;
using ExactMarkovWeightedGraph = MarkovWeighted<Rational>;

struct MarkovResidualReport {
    double residual = 0.0;  // ||L^tL t - lambda_inv t||_inf / ||t||_inf
    bool pass = false;
    double tol = 0.0;
};

template <class Scalar>
inline MarkovResidualReport verify_markov(const BipartiteGraph& g, const std::vector<Scalar>& t,
                                          const Scalar& lambda_inv, double tol = kDefaultTol) {
    if (t.size() != g.even_count())
        throw std::invalid_argument("verify_markov: weight vector has wrong length");
    for (const auto& w : t)
        if (!(w > 0)) throw std::invalid_argument("verify_markov: weights must be strictly positive");
    double max_res = 0.0, max_t = 0.0;
    for (std::size_t j = 0; j < g.even_count(); ++j) {
        Scalar acc{};
        for (std::size_t jp = 0; jp < g.even_count(); ++jp)
            acc += Scalar(static_cast<long>(g.strength(j, jp))) * t[jp];
        Scalar diff = acc - lambda_inv * t[j];
        max_res = std::max(max_res, std::abs(to_double(diff)));
        max_t = std::max(max_t, std::abs(to_double(t[j])));
    }
    MarkovResidualReport rep;
    rep.residual = max_res / max_t;
    rep.tol = tol;
    rep.pass = rep.residual <= tol;
    return rep;
}

// Pointed Markov weighting of a connected graph: lambda_inv = ||Lambda||^2,
// t = Perron vector of Lambda^t Lambda normalized at the basepoint.
inline MarkovWeightedGraph markov_weight(const BipartiteGraph& g, const std::string& basepoint,
                                         double tol = kDefaultTol) {
    if (!is_connected(g))
        throw ReducibleMatrixError("markov_weight: graph is disconnected");
    GraphComponent all;
    for (std::size_t i = 0; i < g.odd_count(); ++i) all.odd.push_back(i);
    for (std::size_t j = 0; j < g.even_count(); ++j) all.even.push_back(j);
    auto pr = perron(gram_on_component(g, all), tol);
    double lam = norm_squared(g, tol);
    std::size_t bp = g.even_index(basepoint);
    MarkovWeightedGraph m{g, {}, lam, bp};
    m.weights.resize(g.even_count());
    for (std::size_t j = 0; j < g.even_count(); ++j) m.weights[j] = pr.vector[j] / pr.vector[bp];
    return m;
}

enum class SpectrumTag { CoxeterValue, Four, Continuum, NotInSpectrum };

struct SpectrumVerdict {
    SpectrumTag tag = SpectrumTag::NotInSpectrum;
    std::optional<int> witness_n;  // set for CoxeterValue
    double nearest_value = 0.0;
};

inline double coxeter_value(int n) {
    double c = std::cos(M_PI / n);
    return 4.0 * c * c;
}

// Membership in {4cos^2(pi/n) | n >= 3} union [4, infinity).
inline SpectrumVerdict jones_spectrum_member(double alpha, double tol = 1e-9) {
    if (!(alpha > 0)) throw std::invalid_argument("jones_spectrum_member: alpha must be positive");
    SpectrumVerdict v;
    if (std::abs(alpha - 4.0) <= tol) {
        v.tag = SpectrumTag::Four;
        v.nearest_value = 4.0;
        return v;
    }
    if (alpha > 4.0) {
        v.tag = SpectrumTag::Continuum;
        v.nearest_value = alpha;
        return v;
    }
    // 4cos^2(pi/n) is strictly increasing in n; bracket the real solution.
    double n_star = M_PI / std::acos(std::sqrt(alpha) / 2.0);
    int lo = std::max(3, static_cast<int>(std::floor(n_star)));
    int best_n = lo;
    double best_gap = std::abs(alpha - coxeter_value(lo));
    for (int n = lo - 1; n <= lo + 2; ++n) {
        if (n < 3) continue;
        double gap = std::abs(alpha - coxeter_value(n));
        if (gap < best_gap) {
            best_gap = gap;
            best_n = n;
        }
    }
    v.nearest_value = coxeter_value(best_n);
    if (best_gap <= tol) {
        v.tag = SpectrumTag::CoxeterValue;
        v.witness_n = best_n;
    } else {
        v.tag = SpectrumTag::NotInSpectrum;
    }
    return v;
}

}  // namespace subspec

#endif
