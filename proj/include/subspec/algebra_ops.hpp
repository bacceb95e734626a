#ifndef SUBSPEC_ALGEBRA_OPS_HPP
#define SUBSPEC_ALGEBRA_OPS_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "subspec/algebra.hpp"
#include "subspec/graph.hpp"

namespace subspec {

namespace detail {

inline Eigen::MatrixXcd coord_matrix(const MultiMatrixAlgebra& amb,
                                     const std::vector<Element>& elems) {
    Eigen::MatrixXcd M(amb.dim(), elems.size());
    for (std::size_t k = 0; k < elems.size(); ++k) M.col(static_cast<Eigen::Index>(k)) = vectorize(amb, elems[k]);
    return M;
}

inline std::size_t numerical_rank(const Eigen::MatrixXcd& M, double rel_tol = 1e-8) {
    if (M.size() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > rel_tol * s(0)) ++r;
    return r;
}

inline Element random_hermitian_in_span(const MultiMatrixAlgebra& amb,
                                        const std::vector<Element>& basis, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Element acc = Element::zero(amb);
    for (const auto& b : basis) {
        Element h = (b + b.adjoint()).scaled(0.5 * g(rng));
        Element k = (b - b.adjoint()).scaled(Cplx(0.0, 0.5) * g(rng));
        acc = acc + h + k;
    }
    return acc;
}

}  // namespace detail

// Block decomposition of a concrete unital *-subalgebra: minimal central
// projections, abstract block dimensions, trace of a minimal projection per
// block, and one sample minimal projection per block.
struct BlockStructure {
    std::vector<Element> central_projections;
    std::vector<int> block_dims;             // k_a with A z_a = M_{k_a}
    std::vector<double> min_proj_traces;     // Tr_w of a minimal projection
    std::vector<Element> min_projections;
};

inline BlockStructure block_structure(const EmbeddedSubalgebra& A, std::uint64_t seed = 2024,
                                      double tol = 1e-8) {
    const auto& amb = A.ambient();
    const std::size_t m = A.dimension();
    // Center: solve [z, b] = 0 for z in span(A), coefficients over the basis.
    Eigen::MatrixXcd K(amb.dim() * m, m);
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < m; ++l) {
            Element comm = A.basis()[k] * A.basis()[l] - A.basis()[l] * A.basis()[k];
            K.block(static_cast<Eigen::Index>(l * amb.dim()), static_cast<Eigen::Index>(k),
                    static_cast<Eigen::Index>(amb.dim()), 1) = vectorize(amb, comm);
        }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(K, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    std::vector<Element> center;
    for (Eigen::Index c = 0; c < svd.matrixV().cols(); ++c) {
        bool in_null = c >= s.size() || s(c) <= std::max(tol * smax, 1e-12);
        if (!in_null) continue;
        Element z = Element::zero(amb);
        for (std::size_t k = 0; k < m; ++k)
            z = z + A.basis()[k].scaled(svd.matrixV()(static_cast<Eigen::Index>(k), c));
        center.push_back(z);
    }
    const std::size_t zdim = center.size();
    if (zdim == 0) throw std::runtime_error("block_structure: empty center");

    std::mt19937_64 rng(seed);
    BlockStructure out;
    for (int attempt = 0; attempt < 16; ++attempt) {
        Element h = detail::random_hermitian_in_span(amb, center, rng);
        // Cluster the spectrum of h; each cluster's spectral projection is a
        // candidate minimal central projection.
        std::vector<double> evals;
        std::vector<std::pair<std::size_t, CVec>> vecs;  // (block, eigvec)
        for (std::size_t i = 0; i < h.block_count(); ++i) {
            Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (h.block(i) + h.block(i).adjoint())));
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                evals.push_back(es.eigenvalues()(k));
                vecs.emplace_back(i, es.eigenvectors().col(k));
            }
        }
        std::vector<std::size_t> order(evals.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return evals[a] < evals[b]; });
        double scale = 1.0;
        for (double e : evals) scale = std::max(scale, std::abs(e));
        std::vector<std::vector<std::size_t>> clusters;
        for (std::size_t k : order) {
            if (clusters.empty() || std::abs(evals[k] - evals[clusters.back().back()]) > 1e-6 * scale)
                clusters.push_back({});
            clusters.back().push_back(k);
        }
        if (clusters.size() != zdim) continue;  // not generic enough; redraw
        std::vector<Element> projs;
        bool ok = true;
        for (const auto& cl : clusters) {
            Element p = Element::zero(amb);
            for (std::size_t k : cl) {
                auto [blk, v] = vecs[k];
                p.block(blk) += v * v.adjoint();
            }
            if (!A.contains(p, 1e-6)) { ok = false; break; }
            if (norm_w(amb, p * p - p) > 1e-7) { ok = false; break; }
            projs.push_back(p);
        }
        if (!ok) continue;
        // Per block: abstract dimension and a minimal projection.
        out.central_projections = projs;
        out.block_dims.clear();
        out.min_proj_traces.clear();
        out.min_projections.clear();
        for (const auto& z : projs) {
            std::vector<Element> compressed;
            for (const auto& b : A.basis()) compressed.push_back(z * b * z);
            std::size_t r = detail::numerical_rank(detail::coord_matrix(amb, compressed));
            int k_a = static_cast<int>(std::llround(std::sqrt(static_cast<double>(r))));
            if (static_cast<std::size_t>(k_a) * k_a != r) { ok = false; break; }
            out.block_dims.push_back(k_a);
            // Spectral projection of a generic hermitian inside z A z for one
            // eigenvalue cluster = a minimal projection of this factor.
            Element y = detail::random_hermitian_in_span(amb, A.basis(), rng);
            y = z * y * z;
            std::vector<double> ev;
            std::vector<std::pair<std::size_t, CVec>> evec;
            for (std::size_t i = 0; i < y.block_count(); ++i) {
                Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (y.block(i) + y.block(i).adjoint())));
                for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                    ev.push_back(es.eigenvalues()(k));
                    evec.emplace_back(i, es.eigenvectors().col(k));
                }
            }
            double yscale = 1.0;
            for (double e : ev) yscale = std::max(yscale, std::abs(e));
            // Pick the largest-eigenvalue cluster (nonzero for generic y).
            double top = *std::max_element(ev.begin(), ev.end());
            if (std::abs(top) <= 1e-8 * yscale) { ok = false; break; }
            Element p = Element::zero(amb);
            for (std::size_t k = 0; k < ev.size(); ++k)
                if (std::abs(ev[k] - top) <= 1e-6 * yscale) {
                    auto [blk, v] = evec[k];
                    p.block(blk) += v * v.adjoint();
                }
            if (!A.contains(p, 1e-6) || norm_w(amb, p * p - p) > 1e-7) { ok = false; break; }
            out.min_projections.push_back(p);
            out.min_proj_traces.push_back(trace_w(amb, p).real());
        }
        if (ok) {
            // Sanity: sum k_a^2 = dim A.
            std::size_t total = 0;
            for (int k : out.block_dims) total += static_cast<std::size_t>(k) * k;
            if (total == A.dimension()) return out;
        }
    }
    throw std::runtime_error("block_structure: failed to split the algebra into factors");
}

// Inclusion bipartite graph of Q inside P (both concrete subalgebras of the
// same ambient scene): entry b_aq = multiplicity of Q-factor a in P-factor b.
inline BipartiteGraph inclusion_matrix(const EmbeddedSubalgebra& Q, const EmbeddedSubalgebra& P,
                                       const BlockStructure& bq, const BlockStructure& bp,
                                       double tol = 1e-6) {
    const auto& amb = Q.ambient();
    for (const auto& b : Q.basis())
        if (!P.contains(b, tol))
            throw std::invalid_argument("inclusion_matrix: Q is not contained in P");
    std::vector<std::string> odd, even;
    for (std::size_t a = 0; a < bq.block_dims.size(); ++a) odd.push_back("q" + std::to_string(a));
    for (std::size_t b = 0; b < bp.block_dims.size(); ++b) even.push_back("p" + std::to_string(b));
    std::vector<std::int64_t> mult(odd.size() * even.size(), 0);
    for (std::size_t a = 0; a < bq.block_dims.size(); ++a)
        for (std::size_t b = 0; b < bp.block_dims.size(); ++b) {
            Element qz = bq.min_projections[a] * bp.central_projections[b];
            double t = trace_w(amb, qz).real();
            double raw = t / bp.min_proj_traces[b];
            auto rounded = std::llround(raw);
            if (std::abs(raw - static_cast<double>(rounded)) > 1e-4 || rounded < 0)
                throw std::runtime_error("inclusion_matrix: non-integer multiplicity " +
                                         std::to_string(raw));
            mult[a * even.size() + b] = rounded;
        }
    // Dimension bookkeeping: sum_a mult_ab k_a = k_b.
    for (std::size_t b = 0; b < bp.block_dims.size(); ++b) {
        std::int64_t acc = 0;
        for (std::size_t a = 0; a < bq.block_dims.size(); ++a)
            acc += mult[a * even.size() + b] * bq.block_dims[a];
        if (acc != bp.block_dims[b])
            throw std::runtime_error("inclusion_matrix: multiplicities fail dimension count");
    }
    return BipartiteGraph(odd, even, mult);
}

inline BipartiteGraph inclusion_matrix(const EmbeddedSubalgebra& Q, const EmbeddedSubalgebra& P,
                                       double tol = 1e-6) {
    auto bq = block_structure(Q);
    auto bp = block_structure(P);
    return inclusion_matrix(Q, P, bq, bp, tol);
}

struct CommutingSquareReport {
    bool is_csq = false;
    double dev_pn = 0.0;   // ||E_P E_N - E_N E_P|| on the probe basis
    double dev_q = 0.0;    // ||E_P E_N - E_Q|| on the probe basis
    std::size_t q_dimension = 0;
    std::optional<EmbeddedSubalgebra> intersection;
};

// Computes Q = P n N (intersection of spans) and checks
// E_P E_N = E_N E_P = E_Q as linear maps.
inline CommutingSquareReport commuting_square_check(const MultiMatrixAlgebra& ambient,
                                                    const EmbeddedSubalgebra& P,
                                                    const EmbeddedSubalgebra& N,
                                                    double tol = 1e-10) {
    Eigen::MatrixXcd BP = detail::coord_matrix(ambient, P.basis());
    Eigen::MatrixXcd BN = detail::coord_matrix(ambient, N.basis());
    Eigen::MatrixXcd J(ambient.dim(), P.dimension() + N.dimension());
    J << BP, -BN;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    double smax = s.size() ? s(0) : 0.0;
    std::vector<Element> q_span;
    for (Eigen::Index c = 0; c < svd.matrixV().cols(); ++c) {
        bool in_null = c >= s.size() || s(c) <= std::max(1e-10 * smax, 1e-12);
        if (!in_null) continue;
        CVec coeff = svd.matrixV().col(c).head(static_cast<Eigen::Index>(P.dimension()));
        Element z = Element::zero(ambient);
        for (std::size_t k = 0; k < P.dimension(); ++k)
            z = z + P.basis()[k].scaled(coeff(static_cast<Eigen::Index>(k)));
        q_span.push_back(z);
    }
    CommutingSquareReport rep;
    EmbeddedSubalgebra Q(ambient, q_span);  // closure checked; intersection of algebras
    rep.q_dimension = Q.dimension();
    ExpectationMap EP(P), EN(N), EQ(Q);
    for (const auto& x : ExpectationMap::ambient_basis(ambient)) {
        Element pn = EP(EN(x)), np = EN(EP(x)), qq = EQ(x);
        rep.dev_pn = std::max(rep.dev_pn, norm_w(ambient, pn - np));
        rep.dev_q = std::max(rep.dev_q, norm_w(ambient, pn - qq));
    }
    rep.is_csq = rep.dev_pn <= tol && rep.dev_q <= tol;
    rep.intersection = std::move(Q);
    return rep;
}

// Non-degeneracy: span(P N) carries the full ambient dimension.
inline bool nondegeneracy_check(const MultiMatrixAlgebra& ambient, const EmbeddedSubalgebra& P,
                                const EmbeddedSubalgebra& N, double rel_tol = 1e-8) {
    std::vector<Element> products;
    for (const auto& p : P.basis())
        for (const auto& n : N.basis()) products.push_back(p * n);
    return detail::numerical_rank(detail::coord_matrix(ambient, products), rel_tol) ==
           ambient.dim();
}

}  // namespace subspec

#endif
