#pragma once

#include "bohr/interval.hpp"
#include "bohr/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

namespace bohr {

template <class B>
struct EigenPair {
    typename B::Real value;
    Matrix<B> projection;
};

namespace detail {

template <class B>
Eigen::MatrixXcd to_eigen(const Matrix<B>& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            const auto& z = m(i, j);
            e(i, j) = std::complex<double>(B::to_double(real(z)), B::to_double(imag(z)));
        }
    return e;
}

/// Best rational approximation of x by continued fractions, accepted once a
/// convergent lands within tol. Exactness is guaranteed downstream: every
/// candidate is verified against the characteristic polynomial.
inline std::optional<Rational> rationalize(double x, double tol, std::int64_t max_den = INT64_C(1000000000000)) {
    if (!std::isfinite(x)) return std::nullopt;
    BigInt h0 = 0, h1 = 1; // numerators
    BigInt k0 = 1, k1 = 0; // denominators
    double t = x;
    for (int iter = 0; iter < 64; ++iter) {
        double fa = std::floor(t);
        if (fa > 9e17 || fa < -9e17) break;
        BigInt a(static_cast<std::int64_t>(fa));
        BigInt h2 = a * h1 + h0;
        BigInt k2 = a * k1 + k0;
        if (k2 > max_den) break;
        Rational cand(h2, k2);
        if (std::abs(RationalBackend::to_double(cand) - x) <= tol) return cand;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = t - fa;
        if (frac < 1e-18) break;
        t = 1.0 / frac;
    }
    return std::nullopt;
}

/// Real coefficients of det(tI - h), computed by the Faddeev-LeVerrier
/// recurrence. coeff[k] multiplies t^k; coeff[n] = 1.
inline std::vector<Rational> char_poly(const Matrix<RationalBackend>& h) {
    const int n = h.rows();
    std::vector<Rational> c(size_t(n) + 1);
    c[n] = 1;
    Matrix<RationalBackend> m = Matrix<RationalBackend>::identity(n);
    for (int k = 1; k <= n; ++k) {
        m = h * m;
        RationalComplex tr = m.trace();
        if (!(tr.im == 0)) throw invalid_operator_error("characteristic polynomial not real");
        Rational ck = -tr.re / k;
        c[n - k] = ck;
        for (int i = 0; i < n; ++i) m(i, i) += RationalComplex(ck);
    }
    return c;
}

inline Rational eval_poly(const std::vector<Rational>& c, const Rational& x) {
    Rational acc = 0;
    for (size_t k = c.size(); k-- > 0;) acc = acc * x + c[k];
    return acc;
}

} // namespace detail

/// Spectral decomposition of a Hermitian operator: strictly increasing
/// eigenvalues with mutually orthogonal eigenprojections summing to the
/// identity. The float backend merges eigenvalues within epsilon into one
/// eigenprojection; the exact backend requires a rational spectrum and proves
/// every returned value exactly.
template <class B>
std::vector<EigenPair<B>> eigendecompose(const Matrix<B>& h) {
    require_hermitian(h, "eigendecompose");
    const int n = h.rows();

    if constexpr (!B::exact) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::to_eigen<B>(h));
        if (es.info() != Eigen::Success)
            throw invalid_operator_error("eigendecompose: solver failed");
        std::vector<EigenPair<B>> out;
        int i = 0;
        while (i < n) {
            int j = i;
            while (j + 1 < n && es.eigenvalues()(j + 1) - es.eigenvalues()(j) <= B::epsilon) ++j;
            double value = 0;
            Matrix<B> proj = Matrix<B>::zero(n, n);
            for (int k = i; k <= j; ++k) {
                value += es.eigenvalues()(k);
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c)
                        proj(r, c) += es.eigenvectors()(r, k) * std::conj(es.eigenvectors()(c, k));
            }
            out.push_back({value / (j - i + 1), std::move(proj)});
            i = j + 1;
        }
        return out;
    } else {
        std::vector<Rational> poly = detail::char_poly(h);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(detail::to_eigen<B>(h),
                                                           Eigen::EigenvaluesOnly);

        std::vector<Rational> roots;
        double scale = 1.0;
        for (int k = 0; k < n; ++k) scale = std::max(scale, std::abs(es.eigenvalues()(k)));
        int i = 0;
        while (i < n) {
            int j = i;
            while (j + 1 < n && es.eigenvalues()(j + 1) - es.eigenvalues()(j) <= 1e-9 * scale) ++j;
            double approx = es.eigenvalues()((i + j) / 2);
            std::optional<Rational> cand = detail::rationalize(approx, 1e-7 * scale);
            if (!cand || detail::eval_poly(poly, *cand) != 0)
                throw irrational_spectrum_error(
                    "eigendecompose: spectrum is not rational (exact backend); "
                    "use the float backend for this operator");
            if (roots.empty() || roots.back() != *cand) roots.push_back(*cand);
            i = j + 1;
        }

        std::vector<EigenPair<B>> out;
        int total = 0;
        Matrix<B> sum = Matrix<B>::zero(n, n);
        Matrix<B> recon = Matrix<B>::zero(n, n);
        for (const Rational& lambda : roots) {
            Matrix<B> shifted = h;
            for (int d = 0; d < n; ++d) shifted(d, d) -= RationalComplex(lambda);
            Matrix<B> basis = kernel_basis(shifted);
            if (basis.cols() == 0)
                throw irrational_spectrum_error("eigendecompose: candidate eigenvalue has no eigenvector");
            Matrix<B> proj = projection_onto_columns(basis);
            total += basis.cols();
            sum = sum + proj;
            recon = recon + RationalComplex(lambda) * proj;
            out.push_back({lambda, std::move(proj)});
        }
        if (total != n || !approx_eq(sum, Matrix<B>::identity(n)) || !approx_eq(recon, h))
            throw irrational_spectrum_error(
                "eigendecompose: rational eigenspaces do not exhaust the operator");
        return out;
    }
}

/// Right-continuous resolution of a Hermitian operator: E(t) = steps[i] for
/// breakpoints[i] <= t < breakpoints[i+1], zero below the first breakpoint,
/// identity from the last one on.
template <class B>
struct SpectralFamily {
    std::vector<typename B::Real> breakpoints;
    std::vector<Matrix<B>> steps;

    Matrix<B> at(const typename B::Real& t) const {
        int dim = steps.empty() ? 0 : steps.back().rows();
        Matrix<B> cur = Matrix<B>::zero(dim, dim);
        for (size_t i = 0; i < breakpoints.size(); ++i) {
            if (breakpoints[i] <= t)
                cur = steps[i];
            else
                break;
        }
        return cur;
    }
};

template <class B>
bool proj_leq(const Matrix<B>& p, const Matrix<B>& q) {
    if (p.rows() != q.rows()) throw dimension_mismatch_error("proj_leq: dimension mismatch");
    return approx_eq(q * p, p);
}

/// Range equality, by ranks of stacked matrices in the exact backend and by
/// entrywise distance in the float backend.
template <class B>
bool proj_eq(const Matrix<B>& p, const Matrix<B>& q) {
    if (p.rows() != q.rows()) throw dimension_mismatch_error("proj_eq: dimension mismatch");
    if constexpr (B::exact) {
        Matrix<B> stacked(p.rows() * 2, p.cols());
        for (int i = 0; i < p.rows(); ++i)
            for (int j = 0; j < p.cols(); ++j) {
                stacked(i, j) = p(i, j);
                stacked(i + p.rows(), j) = q(i, j);
            }
        int rp = rank(p), rq = rank(q);
        return rp == rq && rank(stacked) == rp;
    } else {
        return approx_eq(p, q);
    }
}

template <class B>
void validate_family(const SpectralFamily<B>& f) {
    if (f.breakpoints.size() != f.steps.size() || f.steps.empty())
        throw invalid_family_error("spectral family: breakpoints and steps must align and be nonempty");
    const int n = f.steps.front().rows();
    for (size_t i = 0; i < f.steps.size(); ++i) {
        require_projection(f.steps[i], "spectral family step");
        if (i > 0 && !(f.breakpoints[i - 1] < f.breakpoints[i]))
            throw invalid_family_error("spectral family: breakpoints not strictly increasing");
        if (i > 0 && !proj_leq(f.steps[i - 1], f.steps[i]))
            throw invalid_family_error("spectral family: steps not monotone");
    }
    if (!approx_eq(f.steps.back(), Matrix<B>::identity(n)))
        throw invalid_family_error("spectral family: last step must be the identity");
}

template <class B>
SpectralFamily<B> spectral_family(const Matrix<B>& h) {
    auto pairs = eigendecompose(h);
    SpectralFamily<B> f;
    Matrix<B> acc = Matrix<B>::zero(h.rows(), h.cols());
    for (auto& pr : pairs) {
        acc = acc + pr.projection;
        f.breakpoints.push_back(pr.value);
        f.steps.push_back(acc);
    }
    return f;
}

template <class B>
Matrix<B> operator_from_family(const SpectralFamily<B>& f) {
    validate_family(f);
    const int n = f.steps.front().rows();
    Matrix<B> prev = Matrix<B>::zero(n, n);
    Matrix<B> acc = Matrix<B>::zero(n, n);
    for (size_t i = 0; i < f.steps.size(); ++i) {
        acc = acc + typename B::Complex(f.breakpoints[i]) * (f.steps[i] - prev);
        prev = f.steps[i];
    }
    return acc;
}

/// The proposition "a lands in delta": the sum of eigenprojections whose
/// eigenvalue lies in the outcome set.
template <class B>
Matrix<B> spectral_projection(const Matrix<B>& h, const OutcomeSet& delta) {
    auto pairs = eigendecompose(h);
    Matrix<B> acc = Matrix<B>::zero(h.rows(), h.cols());
    for (auto& pr : pairs)
        if (delta.template contains<B>(pr.value)) acc = acc + pr.projection;
    return acc;
}

template <class B>
Matrix<B> proj_ortho(const Matrix<B>& p) {
    require_projection(p, "proj_ortho");
    return Matrix<B>::identity(p.rows()) - p;
}

/// Projection onto range(p) ∩ range(q), via the kernel of the stacked
/// complements.
template <class B>
Matrix<B> proj_meet(const Matrix<B>& p, const Matrix<B>& q) {
    if (p.rows() != q.rows()) throw dimension_mismatch_error("proj_meet: dimension mismatch");
    require_projection(p, "proj_meet");
    require_projection(q, "proj_meet");
    const int n = p.rows();
    Matrix<B> id = Matrix<B>::identity(n);
    Matrix<B> cp = id - p;
    Matrix<B> cq = id - q;
    Matrix<B> stacked(2 * n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            stacked(i, j) = cp(i, j);
            stacked(i + n, j) = cq(i, j);
        }
    return projection_onto_columns(kernel_basis(stacked));
}

/// Projection onto range(p) + range(q) (closed span; De Morgan dual of meet).
template <class B>
Matrix<B> proj_join(const Matrix<B>& p, const Matrix<B>& q) {
    if (p.rows() != q.rows()) throw dimension_mismatch_error("proj_join: dimension mismatch");
    Matrix<B> id = Matrix<B>::identity(p.rows());
    return id - proj_meet<B>(id - p, id - q);
}

} // namespace bohr
