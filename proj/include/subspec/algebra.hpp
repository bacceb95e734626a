#ifndef SUBSPEC_ALGEBRA_HPP
#define SUBSPEC_ALGEBRA_HPP

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "subspec/exact.hpp"
#include "subspec/graph.hpp"
#include "subspec/spectral.hpp"

namespace subspec {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

// Ambient multimatrix algebra: direct sum of full matrix blocks with a
// faithful trace state given by minimal-projection weights.
struct MultiMatrixAlgebra {
    std::vector<int> block_sizes;
    std::vector<Rational> trace_weights;  // trace of a minimal projection per block

    void validate() const {
        if (block_sizes.empty() || block_sizes.size() != trace_weights.size())
            throw std::invalid_argument("multimatrix algebra: block/weight mismatch");
        Rational total(0);
        for (std::size_t i = 0; i < block_sizes.size(); ++i) {
            if (block_sizes[i] <= 0) throw std::invalid_argument("block sizes must be positive");
            if (!(trace_weights[i] > 0))
                throw std::invalid_argument("trace weights must be positive (faithful trace)");
            total += Rational(block_sizes[i]) * trace_weights[i];
        }
        if (total != 1)
            throw std::invalid_argument("trace weights must sum to a state: sum n_i w_i = 1");
    }

    std::size_t dim() const {
        std::size_t d = 0;
        for (int n : block_sizes) d += static_cast<std::size_t>(n) * n;
        return d;
    }
    double weight_d(std::size_t i) const { return to_double(trace_weights[i]); }
};

// Block-diagonal element of a multimatrix algebra.
class Element {
public:
    Element() = default;
    explicit Element(std::vector<Mat> blocks) : blocks_(std::move(blocks)) {}

    static Element zero(const MultiMatrixAlgebra& a) {
        std::vector<Mat> b;
        for (int n : a.block_sizes) b.push_back(Mat::Zero(n, n));
        return Element(std::move(b));
    }
    static Element identity(const MultiMatrixAlgebra& a) {
        std::vector<Mat> b;
        for (int n : a.block_sizes) b.push_back(Mat::Identity(n, n));
        return Element(std::move(b));
    }

    std::size_t block_count() const { return blocks_.size(); }
    const Mat& block(std::size_t i) const { return blocks_[i]; }
    Mat& block(std::size_t i) { return blocks_[i]; }

    Element operator+(const Element& o) const {
        Element r = *this;
        for (std::size_t i = 0; i < blocks_.size(); ++i) r.blocks_[i] += o.blocks_[i];
        return r;
    }
    Element operator-(const Element& o) const {
        Element r = *this;
        for (std::size_t i = 0; i < blocks_.size(); ++i) r.blocks_[i] -= o.blocks_[i];
        return r;
    }
    Element operator*(const Element& o) const {
        Element r = *this;
        for (std::size_t i = 0; i < blocks_.size(); ++i) r.blocks_[i] *= o.blocks_[i];
        return r;
    }
    Element scaled(Cplx c) const {
        Element r = *this;
        for (auto& b : r.blocks_) b *= c;
        return r;
    }
    Element adjoint() const {
        Element r = *this;
        for (auto& b : r.blocks_) b = b.adjoint().eval();
        return r;
    }

private:
    std::vector<Mat> blocks_;
};

inline Cplx trace_w(const MultiMatrixAlgebra& a, const Element& x) {
    Cplx t = 0;
    for (std::size_t i = 0; i < x.block_count(); ++i) t += a.weight_d(i) * x.block(i).trace();
    return t;
}

// Weighted trace inner product <x,y> = Tr_w(y* x).
inline Cplx inner_w(const MultiMatrixAlgebra& a, const Element& x, const Element& y) {
    Cplx t = 0;
    for (std::size_t i = 0; i < x.block_count(); ++i)
        t += a.weight_d(i) * (y.block(i).adjoint() * x.block(i)).trace();
    return t;
}

inline double norm_w(const MultiMatrixAlgebra& a, const Element& x) {
    return std::sqrt(std::abs(inner_w(a, x, x).real()));
}

// Operator norm (largest singular value across blocks).
inline double op_norm(const Element& x) {
    double n = 0.0;
    for (std::size_t i = 0; i < x.block_count(); ++i) {
        Eigen::JacobiSVD<Mat> svd(x.block(i));
        if (svd.singularValues().size() > 0) n = std::max(n, svd.singularValues()(0));
    }
    return n;
}

// Largest eigenvalue of a Hermitian element, by complex power iteration with
// an independent dense eigensolver cross-check.
inline double hermitian_sup(const Element& x, double tol = 1e-12) {
    double best = 0.0;
    for (std::size_t i = 0; i < x.block_count(); ++i) {
        const Mat& H = x.block(i);
        const auto n = H.rows();
        CVec v = CVec::Ones(n);
        double shift = H.cwiseAbs().rowwise().sum().maxCoeff();
        double rho = 0.0;
        for (int it = 0; it < 100000; ++it) {
            v.normalize();
            CVec w = H * v + shift * v;
            rho = (v.adjoint() * w)(0).real();
            double res = (w - rho * v).norm();
            v = w;
            if (res <= tol * std::max(1.0, rho)) break;
        }
        double lam = rho - shift;
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        double lam_check = es.eigenvalues().maxCoeff();
        if (std::abs(lam - lam_check) > 1e-8 * std::max(1.0, std::abs(lam_check)))
            throw std::runtime_error("hermitian_sup: power iteration disagrees with eigensolver");
        best = std::max(best, lam_check);
    }
    return best;
}

// Coordinates of an element in the weighted L^2(M) inner product: per block,
// sqrt(w_i) * column-major entries. <vec(x), vec(y)> = <x, y>_w.
inline CVec vectorize(const MultiMatrixAlgebra& a, const Element& x) {
    CVec v(a.dim());
    std::size_t at = 0;
    for (std::size_t i = 0; i < x.block_count(); ++i) {
        double s = std::sqrt(a.weight_d(i));
        const Mat& b = x.block(i);
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            for (Eigen::Index r = 0; r < b.rows(); ++r) v(at++) = s * b(r, c);
    }
    return v;
}

inline Element devectorize(const MultiMatrixAlgebra& a, const CVec& v) {
    Element x = Element::zero(a);
    std::size_t at = 0;
    for (std::size_t i = 0; i < a.block_sizes.size(); ++i) {
        double s = std::sqrt(a.weight_d(i));
        Mat& b = x.block(i);
        for (Eigen::Index c = 0; c < b.cols(); ++c)
            for (Eigen::Index r = 0; r < b.rows(); ++r) b(r, c) = v(at++) / s;
    }
    return x;
}

// Unital *-subalgebra of a multimatrix algebra, held as an orthonormal
// spanning set for the weighted trace inner product.
class EmbeddedSubalgebra {
public:
    EmbeddedSubalgebra(MultiMatrixAlgebra ambient, std::vector<Element> spanning,
                       double tol = 1e-10, bool check_closure = true)
        : ambient_(std::move(ambient)) {
        for (const auto& x : spanning) append_orthonormal(x, tol);
        if (basis_.empty()) throw std::invalid_argument("subalgebra: empty span");
        Element one = Element::identity(ambient_);
        if (norm_w(ambient_, one - project(one)) > tol)
            throw std::invalid_argument("subalgebra: does not contain the ambient identity");
        if (check_closure) {
            for (const auto& b : basis_)
                if (norm_w(ambient_, b.adjoint() - project(b.adjoint())) > tol)
                    throw std::invalid_argument("subalgebra: span not closed under adjoint");
            for (const auto& b1 : basis_)
                for (const auto& b2 : basis_) {
                    Element p = b1 * b2;
                    if (norm_w(ambient_, p - project(p)) > tol)
                        throw std::invalid_argument("subalgebra: span not closed under product");
                }
        }
    }

    const MultiMatrixAlgebra& ambient() const { return ambient_; }
    const std::vector<Element>& basis() const { return basis_; }
    std::size_t dimension() const { return basis_.size(); }

    Element project(const Element& x) const {
        Element acc = Element::zero(ambient_);
        for (const auto& b : basis_) acc = acc + b.scaled(inner_w(ambient_, x, b));
        return acc;
    }

    bool contains(const Element& x, double tol = 1e-8) const {
        return norm_w(ambient_, x - project(x)) <= tol * std::max(1.0, norm_w(ambient_, x));
    }

private:
    void append_orthonormal(Element x, double tol) {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis_) x = x - b.scaled(inner_w(ambient_, x, b));
        double n = norm_w(ambient_, x);
        if (n > tol) basis_.push_back(x.scaled(1.0 / n));
    }

    MultiMatrixAlgebra ambient_;
    std::vector<Element> basis_;
};

// Trace-preserving conditional expectation onto a subalgebra: the orthogonal
// projection in the weighted trace inner product.
class ExpectationMap {
public:
    explicit ExpectationMap(const EmbeddedSubalgebra& target) : target_(&target) {}

    Element operator()(const Element& x) const { return target_->project(x); }
    const EmbeddedSubalgebra& target() const { return *target_; }

    struct Verification {
        double unital = 0.0, idempotent = 0.0, self_adjoint = 0.0, bimodular = 0.0;
        double positivity = 0.0;  // most negative eigenvalue seen on E(x*x) samples
        bool pass(double tol) const {
            return unital <= tol && idempotent <= tol && self_adjoint <= tol &&
                   bimodular <= tol && positivity >= -tol;
        }
    };

    // Checks the conditional-expectation axioms on basis elements and on
    // seeded random positives.
    Verification verify(std::uint64_t seed = 12345, int positive_samples = 100) const {
        const auto& amb = target_->ambient();
        Verification v;
        Element one = Element::identity(amb);
        v.unital = norm_w(amb, (*this)(one) - one);
        std::vector<Element> probes = ambient_basis(amb);
        for (const auto& x : probes) {
            Element ex = (*this)(x);
            v.idempotent = std::max(v.idempotent, norm_w(amb, (*this)(ex) - ex));
            for (const auto& y : probes) {
                Cplx a = inner_w(amb, ex, y);
                Cplx b = inner_w(amb, x, (*this)(y));
                v.self_adjoint = std::max(v.self_adjoint, std::abs(a - b));
            }
        }
        for (const auto& b1 : target_->basis())
            for (const auto& x : probes)
                for (const auto& b2 : target_->basis()) {
                    Element lhs = (*this)(b1 * x * b2);
                    Element rhs = b1 * (*this)(x) * b2;
                    v.bimodular = std::max(v.bimodular, norm_w(amb, lhs - rhs));
                }
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> g;
        for (int s = 0; s < positive_samples; ++s) {
            Element x = Element::zero(amb);
            for (std::size_t i = 0; i < x.block_count(); ++i) {
                Mat r(amb.block_sizes[i], amb.block_sizes[i]);
                for (Eigen::Index a = 0; a < r.rows(); ++a)
                    for (Eigen::Index b = 0; b < r.cols(); ++b) r(a, b) = Cplx(g(rng), g(rng));
                x.block(i) = r * r.adjoint();
            }
            Element ex = (*this)(x);
            for (std::size_t i = 0; i < ex.block_count(); ++i) {
                Eigen::SelfAdjointEigenSolver<Mat> es(
                    Mat(0.5 * (ex.block(i) + ex.block(i).adjoint())));
                v.positivity = std::min(v.positivity, es.eigenvalues().minCoeff());
            }
        }
        return v;
    }

    static std::vector<Element> ambient_basis(const MultiMatrixAlgebra& amb) {
        std::vector<Element> basis;
        for (std::size_t i = 0; i < amb.block_sizes.size(); ++i)
            for (int r = 0; r < amb.block_sizes[i]; ++r)
                for (int c = 0; c < amb.block_sizes[i]; ++c) {
                    Element e = Element::zero(amb);
                    e.block(i)(r, c) = 1.0;
                    basis.push_back(e);
                }
        return basis;
    }

private:
    const EmbeddedSubalgebra* target_;
};

inline ExpectationMap expectation(const MultiMatrixAlgebra& ambient,
                                  const EmbeddedSubalgebra& target) {
    if (!(target.ambient().block_sizes == ambient.block_sizes))
        throw std::invalid_argument("expectation: target lives in a different ambient algebra");
    return ExpectationMap(target);
}

}  // namespace subspec

#endif
