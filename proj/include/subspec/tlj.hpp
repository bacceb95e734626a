#ifndef SUBSPEC_TLJ_HPP
#define SUBSPEC_TLJ_HPP

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "subspec/exact.hpp"
#include "subspec/polynomial.hpp"

namespace subspec {

// P_{-1} = P_0 = 1, P_{n+1}(t) = P_n(t) - t P_{n-1}(t).
struct JonesPolynomial {
    int n = 0;  // >= -1
    IntPoly coeffs;  // coeffs[k] = coefficient of t^k
};

inline JonesPolynomial jones_poly(int n) {
    if (n < -1) throw std::invalid_argument("jones_poly: n >= -1 required");
    IntPoly prev{BigInt(1)}, cur{BigInt(1)};  // P_{-1}, P_0
    if (n == -1) return {n, prev};
    for (int k = 0; k < n; ++k) {
        IntPoly next = cur;
        next.resize(std::max(next.size(), prev.size() + 1), BigInt(0));
        for (std::size_t i = 0; i < prev.size(); ++i) next[i + 1] -= prev[i];
        while (!next.empty() && next.back() == 0) next.pop_back();
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {n, cur};
}

inline Rational evaluate(const JonesPolynomial& p, const Rational& lambda) {
    return eval(p.coeffs, lambda);
}
inline double evaluate(const JonesPolynomial& p, double lambda) { return eval(p.coeffs, lambda); }

// P_k(lambda) for k = -1..n by the exact value recursion.
inline std::vector<Rational> jones_values(const Rational& lambda, int n) {
    std::vector<Rational> vals;
    vals.reserve(static_cast<std::size_t>(n) + 2);
    vals.push_back(Rational(1));  // P_{-1}
    vals.push_back(Rational(1));  // P_0
    for (int k = 0; k < n; ++k)
        vals.push_back(vals[vals.size() - 1] - lambda * vals[vals.size() - 2]);
    return vals;
}

struct PositivityHorizon {
    bool unbounded = false;
    int horizon = 0;  // meaningful when !unbounded
    int n_max = 0;
};

// Largest n <= n_max with P_k(lambda) > 0 for all k <= n.
inline PositivityHorizon positivity_horizon(const Rational& lambda, int n_max) {
    if (!(lambda > 0)) throw std::invalid_argument("positivity_horizon: lambda must be positive");
    auto vals = jones_values(lambda, n_max);
    for (int k = 0; k <= n_max; ++k)
        if (!(vals[static_cast<std::size_t>(k) + 1] > 0)) return {false, k - 1, n_max};
    return {true, n_max, n_max};
}

// Couplings of the standard representation of an A_inf subfactor,
// d_n = sqrt(P_n(lambda) / (lambda P_{n-1}(lambda))).
struct CouplingSequence {
    Rational lambda;
    std::vector<double> values;      // d_0 .. d_n
    std::vector<Rational> squares;   // exact d_n^2
};

inline CouplingSequence a_inf_couplings(const Rational& lambda, int n_max) {
    if (!(lambda > 0)) throw std::invalid_argument("a_inf_couplings: lambda must be positive");
    if (n_max < 0) throw std::invalid_argument("a_inf_couplings: n_max >= 0 required");
    auto vals = jones_values(lambda, n_max);
    CouplingSequence out;
    out.lambda = lambda;
    for (int n = 0; n <= n_max; ++n) {
        const Rational& pn = vals[static_cast<std::size_t>(n) + 1];
        const Rational& pn1 = vals[static_cast<std::size_t>(n)];
        if (!(pn > 0))
            throw std::domain_error("a_inf_couplings: P_" + std::to_string(n) +
                                    "(lambda) <= 0 (lambda > 1/4); offending n = " + std::to_string(n));
        Rational sq = pn / (lambda * pn1);
        out.squares.push_back(sq);
        out.values.push_back(std::sqrt(to_double(sq)));
    }
    return out;
}

// Locally trivial even-level couplings d_{2n} = ((1-t)/t)^n where t < 1/2
// solves t(1-t) = lambda. Requires lambda < 1/4 strictly.
struct LocallyTrivialCouplings {
    double t = 0.0;
    double ratio = 0.0;  // (1-t)/t
    std::optional<Rational> ratio_exact;
    std::map<long, double> values;  // n -> d_{2n}
};

inline LocallyTrivialCouplings locally_trivial_couplings(const Rational& lambda, long n_lo,
                                                         long n_hi) {
    if (!(lambda > 0) || !(lambda < Rational(1, 4)))
        throw std::domain_error("locally_trivial_couplings: need 0 < lambda < 1/4 (t < 1/2 strict)");
    if (n_lo > n_hi) throw std::invalid_argument("locally_trivial_couplings: empty range");
    LocallyTrivialCouplings out;
    Rational disc = 1 - 4 * lambda;
    if (auto s = exact_sqrt(disc)) {
        Rational t = (1 - *s) / 2;
        out.t = to_double(t);
        out.ratio_exact = (1 - t) / t;
        out.ratio = to_double(*out.ratio_exact);
    } else {
        out.t = (1.0 - std::sqrt(to_double(disc))) / 2.0;
        out.ratio = (1.0 - out.t) / out.t;
    }
    for (long n = n_lo; n <= n_hi; ++n) out.values[n] = std::pow(out.ratio, static_cast<double>(n));
    return out;
}

}  // namespace subspec

#endif
