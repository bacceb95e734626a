#ifndef SUBSPEC_POLYNOMIAL_HPP
#define SUBSPEC_POLYNOMIAL_HPP

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "subspec/exact.hpp"

namespace subspec {

// Dense polynomials, coeffs[k] = coefficient of x^k, no trailing zeros.
using IntPoly = std::vector<BigInt>;
using RatPoly = std::vector<Rational>;

inline void trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly to_rational(const IntPoly& p) {
    RatPoly r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = Rational(p[i]);
    trim(r);
    return r;
}

inline Rational eval(const RatPoly& p, const Rational& x) {
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

inline Rational eval(const IntPoly& p, const Rational& x) { return eval(to_rational(p), x); }

inline double eval(const IntPoly& p, double x) {
    double acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i].get_d();
    return acc;
}

inline RatPoly derivative(const RatPoly& p) {
    RatPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Rational(static_cast<long>(i)));
    trim(d);
    return d;
}

// Euclidean remainder of a by b over the rationals. b must be nonzero.
inline RatPoly poly_rem(RatPoly a, const RatPoly& b) {
    if (b.empty()) throw std::invalid_argument("poly_rem: division by zero polynomial");
    while (a.size() >= b.size() && !a.empty()) {
        Rational q = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

inline bool divides(const RatPoly& d, const RatPoly& p) { return poly_rem(p, d).empty(); }

// p / d, requires exact divisibility.
inline RatPoly poly_div_exact(RatPoly p, const RatPoly& d) {
    RatPoly q(p.size() >= d.size() ? p.size() - d.size() + 1 : 0, Rational(0));
    while (p.size() >= d.size() && !p.empty()) {
        Rational c = p.back() / d.back();
        std::size_t shift = p.size() - d.size();
        q[shift] = c;
        for (std::size_t i = 0; i < d.size(); ++i) p[shift + i] -= c * d[i];
        trim(p);
    }
    if (!p.empty()) throw std::invalid_argument("poly_div_exact: not divisible");
    trim(q);
    return q;
}

// Sturm chain of a squarefree-or-not polynomial (works for repeated roots:
// counts distinct roots).
class SturmChain {
public:
    explicit SturmChain(const RatPoly& p) {
        RatPoly a = p;
        trim(a);
        if (a.empty()) throw std::invalid_argument("Sturm chain of zero polynomial");
        chain_.push_back(a);
        RatPoly b = derivative(a);
        while (!b.empty()) {
            chain_.push_back(b);
            RatPoly r = poly_rem(chain_[chain_.size() - 2], b);
            for (auto& c : r) c = -c;
            b = std::move(r);
        }
    }

    // Number of distinct real roots in (a, b], for a < b.
    int count_roots(const Rational& a, const Rational& b) const {
        return variations_at(a) - variations_at(b);
    }

    // Number of distinct real roots in (a, +infinity).
    int count_roots_above(const Rational& a) const {
        return variations_at(a) - variations_at_pos_inf();
    }

private:
    static int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

    int variations_at(const Rational& x) const {
        int var = 0, prev = 0;
        for (const auto& p : chain_) {
            int s = sgn(eval(p, x));
            if (s != 0) {
                if (prev != 0 && s != prev) ++var;
                prev = s;
            }
        }
        return var;
    }

    int variations_at_pos_inf() const {
        int var = 0, prev = 0;
        for (const auto& p : chain_) {
            int s = sgn(p.back());
            if (s != 0) {
                if (prev != 0 && s != prev) ++var;
                prev = s;
            }
        }
        return var;
    }

    std::vector<RatPoly> chain_;
};

// Characteristic polynomial det(xI - A) of an integer matrix, by the
// Faddeev-LeVerrier recurrence (all divisions exact over the integers).
inline IntPoly char_poly(const std::vector<std::vector<BigInt>>& A) {
    const std::size_t n = A.size();
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("char_poly: matrix not square");
    IntPoly c(n + 1);
    c[n] = 1;
    std::vector<std::vector<BigInt>> M(n, std::vector<BigInt>(n, 0));  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        // M_k = A*M_{k-1} + c_{n-k+1} I
        std::vector<std::vector<BigInt>> AM(n, std::vector<BigInt>(n, 0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l)
                for (std::size_t j = 0; j < n; ++j) AM[i][j] += A[i][l] * M[l][j];
        for (std::size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
        M = std::move(AM);
        BigInt tr = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
        BigInt ck = -tr;
        mpz_divexact_ui(ck.get_mpz_t(), ck.get_mpz_t(), static_cast<unsigned long>(k));
        c[n - k] = ck;
    }
    return c;
}

struct RootInterval {
    Rational lo, hi;  // lo < root <= hi (or lo == hi == root)
    bool exact = false;
};

// Isolates the largest real root of p to within `width`, starting from the
// bracket (lo, hi] which must contain it (and no root may exceed hi).
inline RootInterval isolate_largest_root(const RatPoly& p, Rational lo, Rational hi,
                                         const Rational& width) {
    SturmChain chain(p);
    if (chain.count_roots_above(hi) != 0)
        throw std::invalid_argument("isolate_largest_root: upper bound excludes no roots");
    if (chain.count_roots(lo, hi) < 1)
        throw std::invalid_argument("isolate_largest_root: bracket contains no root");
    while (hi - lo > width) {
        Rational mid = (lo + hi) / 2;
        if (eval(p, mid) == 0 && chain.count_roots_above(mid) == 0)
            return {mid, mid, true};
        if (chain.count_roots_above(mid) > 0) lo = mid;
        else hi = mid;
    }
    return {lo, hi, false};
}

}  // namespace subspec

#endif
