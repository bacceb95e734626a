#ifndef SUBSPEC_BASIC_CONSTRUCTION_HPP
#define SUBSPEC_BASIC_CONSTRUCTION_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "subspec/algebra_ops.hpp"

namespace subspec {

// Block structure of the full ambient algebra, in ambient block order.
inline BlockStructure full_block_structure(const MultiMatrixAlgebra& amb) {
    BlockStructure bs;
    for (std::size_t i = 0; i < amb.block_sizes.size(); ++i) {
        Element z = Element::zero(amb);
        z.block(i) = Mat::Identity(amb.block_sizes[i], amb.block_sizes[i]);
        bs.central_projections.push_back(z);
        bs.block_dims.push_back(amb.block_sizes[i]);
        Element p = Element::zero(amb);
        p.block(i)(0, 0) = 1.0;
        bs.min_projections.push_back(p);
        bs.min_proj_traces.push_back(amb.weight_d(i));
    }
    return bs;
}

inline EmbeddedSubalgebra full_subalgebra(const MultiMatrixAlgebra& amb) {
    return EmbeddedSubalgebra(amb, ExpectationMap::ambient_basis(amb), 1e-10,
                              /*check_closure=*/false);
}

// The Jones basic construction of B c M realized concretely on L^2(M).
struct BasicConstructionScene {
    MultiMatrixAlgebra ambient;     // M's data
    MultiMatrixAlgebra l2_ambient;  // B(L^2 M): one block of size D, weight 1/D
    std::size_t l2_dim = 0;

    std::vector<Element> left_mult;  // L_x for the ambient standard basis
    Element jones_projection;        // e_B
    std::optional<EmbeddedSubalgebra> LM;  // image of M
    std::optional<EmbeddedSubalgebra> M1;  // <M, e_B>
    std::size_t m1_dimension = 0;

    double prop_i = 0.0;    // max || e L_x e - L_{E(x)} e ||
    double prop_ii = 0.0;   // containment residual of {e}' n M against B
    bool prop_ii_dims = false;  // dim {x in M : [x,e]=0} == dim B
    bool prop_iii = false;  // central support of e_B in M1 is 1
    double markov_lambda = 0.0;  // normalized trace of e_B

    BipartiteGraph lambda_B_M{{"i0"}, {"j0"}, {1}};
    BipartiteGraph lambda_M_M1{{"i0"}, {"j0"}, {1}};
    bool transpose_law_exact = false;
};

// Left multiplication by x on the weighted L^2(M) coordinates.
inline Mat left_mult_matrix(const MultiMatrixAlgebra& amb, const Element& x) {
    const std::size_t D = amb.dim();
    Mat L = Mat::Zero(D, D);
    std::size_t at = 0;
    for (std::size_t i = 0; i < amb.block_sizes.size(); ++i) {
        const int n = amb.block_sizes[i];
        for (int c = 0; c < n; ++c)
            L.block(static_cast<Eigen::Index>(at + c * n), static_cast<Eigen::Index>(at + c * n),
                    n, n) = x.block(i);
        at += static_cast<std::size_t>(n) * n;
    }
    return L;
}

inline BasicConstructionScene basic_construction(const MultiMatrixAlgebra& ambient,
                                                 const EmbeddedSubalgebra& B,
                                                 double tol = 1e-10) {
    ambient.validate();  // faithful trace enforced by validate()
    BasicConstructionScene sc;
    sc.ambient = ambient;
    const std::size_t D = ambient.dim();
    sc.l2_dim = D;
    sc.l2_ambient = MultiMatrixAlgebra{{static_cast<int>(D)},
                                       {Rational(1, static_cast<unsigned long>(D))}};

    auto mbasis = ExpectationMap::ambient_basis(ambient);
    auto lift = [&](const Element& x) {
        return Element(std::vector<Mat>{left_mult_matrix(ambient, x)});
    };
    for (const auto& x : mbasis) sc.left_mult.push_back(lift(x));

    Mat e = Mat::Zero(D, D);
    for (const auto& b : B.basis()) {
        CVec v = vectorize(ambient, b);
        e += v * v.adjoint();
    }
    sc.jones_projection = Element(std::vector<Mat>{e});
    sc.markov_lambda = (e.trace().real()) / static_cast<double>(D);

    // M1 = span{ L_x, L_x e L_y } (already closed under products).
    std::vector<Element> span = sc.left_mult;
    for (const auto& lx : sc.left_mult)
        for (const auto& ly : sc.left_mult)
            span.push_back(lx * sc.jones_projection * ly);
    sc.M1.emplace(sc.l2_ambient, span, 1e-8);
    sc.LM.emplace(sc.l2_ambient, sc.left_mult, 1e-10, /*check_closure=*/false);
    sc.m1_dimension = sc.M1->dimension();

    // (i) e x e = E_B(x) e on a spanning set.
    ExpectationMap EB(B);
    for (std::size_t k = 0; k < mbasis.size(); ++k) {
        Element lhs = sc.jones_projection * sc.left_mult[k] * sc.jones_projection;
        Element rhs = lift(EB(mbasis[k])) * sc.jones_projection;
        sc.prop_i = std::max(sc.prop_i, op_norm(lhs - rhs));
    }

    // (ii) {e}' n M = B, by commutant dimension count plus containment.
    {
        const std::size_t m = mbasis.size();
        Eigen::MatrixXcd K(D * D, m);
        for (std::size_t k = 0; k < m; ++k) {
            Mat comm = sc.left_mult[k].block(0) * e - e * sc.left_mult[k].block(0);
            K.col(static_cast<Eigen::Index>(k)) =
                Eigen::Map<const CVec>(comm.data(), comm.size());
        }
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(K, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        double smax = s.size() ? s(0) : 0.0;
        std::size_t nullity = 0;
        for (Eigen::Index c = 0; c < svd.matrixV().cols(); ++c) {
            bool in_null = c >= s.size() || s(c) <= std::max(1e-10 * smax, 1e-12);
            if (!in_null) continue;
            ++nullity;
            Element x = Element::zero(ambient);
            for (std::size_t k = 0; k < m; ++k)
                x = x + mbasis[k].scaled(svd.matrixV()(static_cast<Eigen::Index>(k), c));
            Element res = x - B.project(x);
            sc.prop_ii = std::max(sc.prop_ii, norm_w(ambient, res));
        }
        sc.prop_ii_dims = nullity == B.dimension();
    }

    // (iii) central support of e_B in M1 is 1: M . range(e) spans L^2(M).
    {
        Eigen::MatrixXcd cols(D, mbasis.size() * B.dimension());
        Eigen::Index at = 0;
        for (const auto& lx : sc.left_mult)
            for (const auto& b : B.basis()) cols.col(at++) = lx.block(0) * vectorize(ambient, b);
        sc.prop_iii = detail::numerical_rank(cols) == D;
    }

    // Inclusion graphs and the transpose law.
    auto bsB = block_structure(B);
    auto bsM = full_block_structure(ambient);
    EmbeddedSubalgebra fullM = full_subalgebra(ambient);
    sc.lambda_B_M = inclusion_matrix(B, fullM, bsB, bsM);

    BlockStructure bsLM;  // LM blocks in ambient order, via the *-isomorphism L
    for (std::size_t i = 0; i < ambient.block_sizes.size(); ++i) {
        bsLM.central_projections.push_back(lift(bsM.central_projections[i]));
        bsLM.block_dims.push_back(ambient.block_sizes[i]);
        bsLM.min_projections.push_back(lift(bsM.min_projections[i]));
        bsLM.min_proj_traces.push_back(
            trace_w(sc.l2_ambient, lift(bsM.min_projections[i])).real());
    }
    auto bsM1 = block_structure(*sc.M1);
    // Match M1 blocks to B blocks through z e_B = z' e_B.
    std::vector<std::size_t> match(bsB.central_projections.size());
    std::vector<bool> used(bsM1.central_projections.size(), false);
    for (std::size_t i = 0; i < bsB.central_projections.size(); ++i) {
        Element ze = lift(bsB.central_projections[i]) * sc.jones_projection;
        double best = 1e18;
        std::size_t arg = 0;
        for (std::size_t j = 0; j < bsM1.central_projections.size(); ++j) {
            if (used[j]) continue;
            double d = op_norm(bsM1.central_projections[j] * sc.jones_projection - ze);
            if (d < best) {
                best = d;
                arg = j;
            }
        }
        if (best > 1e-6)
            throw std::runtime_error("basic_construction: failed to match M1 blocks to B blocks");
        match[i] = arg;
        used[arg] = true;
    }
    BlockStructure bsM1_ordered;
    for (std::size_t i = 0; i < match.size(); ++i) {
        bsM1_ordered.central_projections.push_back(bsM1.central_projections[match[i]]);
        bsM1_ordered.block_dims.push_back(bsM1.block_dims[match[i]]);
        bsM1_ordered.min_projections.push_back(bsM1.min_projections[match[i]]);
        bsM1_ordered.min_proj_traces.push_back(bsM1.min_proj_traces[match[i]]);
    }
    sc.lambda_M_M1 = inclusion_matrix(*sc.LM, *sc.M1, bsLM, bsM1_ordered);

    BipartiteGraph expected = transpose(sc.lambda_B_M);
    sc.transpose_law_exact = sc.lambda_M_M1.odd_count() == expected.odd_count() &&
                             sc.lambda_M_M1.even_count() == expected.even_count() &&
                             sc.lambda_M_M1.mult_flat() == expected.mult_flat();
    (void)tol;
    return sc;
}

// Pimsner-Popa orthonormal basis of M over B for the expectation E:
// Gram-Schmidt with the B-valued inner product E(x*y).
struct OrthonormalBasis {
    std::vector<Element> elements;
    bool rank_deficient = false;
    double gram_residual = 0.0;     // max || E(m_i* m_j) - delta_ij p_j ||
    double completeness = 0.0;      // max || x - sum m_j E(m_j* x) ||
};

namespace detail {

// f(G) for Hermitian positive G via spectral calculus; eigenvalues below
// `cut` are treated as zero (support projection / pseudo inverse square root).
inline Element spectral_apply(const Element& G, double cut, double exponent) {
    Element out = G;
    for (std::size_t i = 0; i < G.block_count(); ++i) {
        Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (G.block(i) + G.block(i).adjoint())));
        Eigen::VectorXd vals = es.eigenvalues();
        Mat acc = Mat::Zero(G.block(i).rows(), G.block(i).cols());
        for (Eigen::Index k = 0; k < vals.size(); ++k) {
            if (vals(k) <= cut) continue;
            acc += std::pow(vals(k), exponent) * es.eigenvectors().col(k) *
                   es.eigenvectors().col(k).adjoint();
        }
        out.block(i) = acc;
    }
    return out;
}

}  // namespace detail

inline OrthonormalBasis orthonormal_basis(const MultiMatrixAlgebra& ambient,
                                          const EmbeddedSubalgebra& B, const ExpectationMap& E,
                                          std::optional<std::uint64_t> shuffle_seed = std::nullopt,
                                          double pivot_tol = 1e-10) {
    auto spanning = ExpectationMap::ambient_basis(ambient);
    if (shuffle_seed) {
        std::mt19937_64 rng(*shuffle_seed);
        std::shuffle(spanning.begin(), spanning.end(), rng);
    }
    OrthonormalBasis ob;
    for (const auto& x0 : spanning) {
        Element v = x0;
        for (const auto& mj : ob.elements) v = v - mj * E(mj.adjoint() * v);
        Element G = E(v.adjoint() * v);
        double gnorm = hermitian_sup(G);
        if (gnorm <= pivot_tol) continue;
        // Eigenvalues of G in (pivot_tol, sqrt(pivot_tol)) signal an
        // ill-conditioned pivot.
        for (std::size_t i = 0; i < G.block_count(); ++i) {
            Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (G.block(i) + G.block(i).adjoint())));
            for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
                double ev = es.eigenvalues()(k);
                if (ev > pivot_tol && ev < std::sqrt(pivot_tol)) ob.rank_deficient = true;
            }
        }
        Element m = v * detail::spectral_apply(G, pivot_tol, -0.5);
        ob.elements.push_back(m);
    }
    for (std::size_t i = 0; i < ob.elements.size(); ++i)
        for (std::size_t j = 0; j < ob.elements.size(); ++j) {
            Element g = E(ob.elements[i].adjoint() * ob.elements[j]);
            if (i != j) {
                ob.gram_residual = std::max(ob.gram_residual, op_norm(g));
            } else {
                Element defect = g * g - g;  // E(m*m) must be a projection
                ob.gram_residual = std::max(ob.gram_residual, op_norm(defect));
            }
        }
    for (const auto& x : ExpectationMap::ambient_basis(ambient)) {
        Element rec = Element::zero(ambient);
        for (const auto& mj : ob.elements) rec = rec + mj * E(mj.adjoint() * x);
        ob.completeness = std::max(ob.completeness, norm_w(ambient, rec - x));
    }
    return ob;
}

inline Element ob_sum(const OrthonormalBasis& ob, const MultiMatrixAlgebra& ambient) {
    Element s = Element::zero(ambient);
    for (const auto& m : ob.elements) s = s + m * m.adjoint();
    return s;
}

// Ind(E) via an orthonormal basis: || sum_j m_j m_j* ||.
inline double index_via_ob(const MultiMatrixAlgebra& ambient, const OrthonormalBasis& ob) {
    return hermitian_sup(ob_sum(ob, ambient));
}

// sum_j m_j e_B m_j* = 1, checked in the basic-construction scene.
inline double ob_resolution_residual(const BasicConstructionScene& sc,
                                     const OrthonormalBasis& ob) {
    const std::size_t D = sc.l2_dim;
    Mat acc = Mat::Zero(D, D);
    for (const auto& m : ob.elements) {
        Mat L = left_mult_matrix(sc.ambient, m);
        acc += L * sc.jones_projection.block(0) * L.adjoint();
    }
    return (acc - Mat::Identity(D, D)).norm();
}

enum class ProbabilisticMethod { BruteforceRank1, Grid };

struct ProbabilisticIndexResult {
    double lambda_lower = 0.0;  // heuristic lower edge of the bracket
    double lambda_upper = 1.0;  // witnessed minimum of c(p) (certified upper bound)
    std::size_t samples = 0;
};

namespace detail {

// Largest c with E(p) >= c p for the rank-one projection p = xi xi* sitting
// in one ambient block.
inline double rank_one_c(const MultiMatrixAlgebra& amb, const ExpectationMap& E,
                         std::size_t block, const CVec& xi) {
    Element p = Element::zero(amb);
    p.block(block) = xi * xi.adjoint();
    Element A = E(p);
    const Mat& Ab = A.block(block);
    Eigen::SelfAdjointEigenSolver<Mat> es(Mat(0.5 * (Ab + Ab.adjoint())));
    double top = es.eigenvalues().size() ? std::max(1e-300, es.eigenvalues().maxCoeff()) : 0.0;
    double quad = 0.0;
    CVec proj = CVec::Zero(xi.size());
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double ev = es.eigenvalues()(k);
        Cplx comp = (es.eigenvectors().col(k).adjoint() * xi)(0);
        if (ev <= 1e-12 * top) {
            if (std::abs(comp) > 1e-8) return 0.0;  // xi leaves the range of E(p)
            continue;
        }
        quad += std::norm(comp) / ev;
        proj += comp * es.eigenvectors().col(k);
    }
    if (quad <= 0) return 0.0;
    return 1.0 / quad;
}

}  // namespace detail

// Sampling bracket for lambda(E) = sup{c : E(x) >= cx on positives}; rank-one
// projections are extremal in finite dimensions, so the infimum of c(p) over
// rank-one p is the target. The result is a bracket, not a certificate.
inline ProbabilisticIndexResult probabilistic_index(const MultiMatrixAlgebra& ambient,
                                                    const ExpectationMap& E,
                                                    ProbabilisticMethod method =
                                                        ProbabilisticMethod::BruteforceRank1,
                                                    std::size_t samples = 10000,
                                                    std::uint64_t seed = 7) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    auto random_unit = [&](int n) {
        CVec v(n);
        for (int k = 0; k < n; ++k) v(k) = Cplx(g(rng), g(rng));
        v.normalize();
        return v;
    };
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_block = 0;
    CVec best_xi;
    std::size_t used = 0;
    if (method == ProbabilisticMethod::Grid) {
        // Deterministic sweep; exhaustive-ish for 2x2 blocks, coarse beyond.
        const int steps = 48;
        for (std::size_t b = 0; b < ambient.block_sizes.size(); ++b) {
            const int n = ambient.block_sizes[b];
            if (n == 1) {
                CVec xi = CVec::Ones(1);
                double c = detail::rank_one_c(ambient, E, b, xi);
                ++used;
                if (c < best) { best = c; best_block = b; best_xi = xi; }
                continue;
            }
            for (int a = 0; a <= steps; ++a)
                for (int ph = 0; ph < steps; ++ph) {
                    double th = M_PI * a / (2.0 * steps);
                    double phi = 2.0 * M_PI * ph / steps;
                    CVec xi = CVec::Zero(n);
                    xi(0) = std::cos(th);
                    xi(1) = std::polar(std::sin(th), phi);
                    double c = detail::rank_one_c(ambient, E, b, xi);
                    ++used;
                    if (c < best) { best = c; best_block = b; best_xi = xi; }
                }
        }
    } else {
        for (std::size_t s = 0; s < samples; ++s) {
            std::size_t b = rng() % ambient.block_sizes.size();
            CVec xi = random_unit(ambient.block_sizes[b]);
            double c = detail::rank_one_c(ambient, E, b, xi);
            ++used;
            if (c < best) { best = c; best_block = b; best_xi = xi; }
        }
    }
    // Local refinement around the best witness.
    double before_refine = best;
    if (best_xi.size() > 0) {
        for (double radius : {0.3, 0.1, 0.03, 0.01, 0.003}) {
            for (int s = 0; s < 300; ++s) {
                CVec xi = best_xi;
                for (Eigen::Index k = 0; k < xi.size(); ++k)
                    xi(k) += radius * Cplx(g(rng), g(rng));
                xi.normalize();
                double c = detail::rank_one_c(ambient, E, best_block, xi);
                ++used;
                if (c < best) { best = c; best_xi = xi; }
            }
        }
    }
    ProbabilisticIndexResult out;
    out.lambda_upper = best;
    double refine_gain = before_refine - best;
    out.lambda_lower = std::max(0.0, best - std::max(refine_gain, 1e-6 * best));
    out.samples = used;
    return out;
}

struct IndexReport {
    double ind_ob = 0.0;    // ||sum m_j m_j*||
    double lambda_E = 0.0;  // point estimate (witnessed upper bound)
    double lambda_lower = 0.0, lambda_upper = 0.0;
    std::size_t ob_size = 0;
    bool rank_deficient = false;
    bool multiplicity_condition = false;  // b_ij <= dim of the i'th B-factor
    std::string regime;  // "equality" under the multiplicity condition, else "inequality regime"
};

inline IndexReport index_report(const MultiMatrixAlgebra& ambient, const EmbeddedSubalgebra& B,
                                std::uint64_t seed = 7) {
    ExpectationMap E(B);
    auto ob = orthonormal_basis(ambient, B, E);
    IndexReport rep;
    rep.ind_ob = index_via_ob(ambient, ob);
    rep.ob_size = ob.elements.size();
    rep.rank_deficient = ob.rank_deficient;
    auto pi = probabilistic_index(ambient, E, ProbabilisticMethod::BruteforceRank1, 10000, seed);
    rep.lambda_E = pi.lambda_upper;
    rep.lambda_lower = pi.lambda_lower;
    rep.lambda_upper = pi.lambda_upper;
    auto bsB = block_structure(B);
    auto lam = inclusion_matrix(B, full_subalgebra(ambient), bsB, full_block_structure(ambient));
    rep.multiplicity_condition = true;
    for (std::size_t i = 0; i < lam.odd_count(); ++i)
        for (std::size_t j = 0; j < lam.even_count(); ++j)
            if (lam.mult(i, j) > bsB.block_dims[i]) rep.multiplicity_condition = false;
    rep.regime = rep.multiplicity_condition ? "equality" : "inequality regime";
    return rep;
}

}  // namespace subspec

#endif
