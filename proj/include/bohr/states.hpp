#pragma once

#include "bohr/logic.hpp"

#include <utility>
#include <vector>

namespace bohr {

namespace detail {

/// Exact positive-semidefiniteness via Schur-complement elimination: a
/// Hermitian matrix is PSD iff the top-left entry is nonnegative, a zero
/// diagonal entry forces a zero row, and the complement is PSD.
inline bool psd_exact(Matrix<RationalBackend> h) {
    int n = h.rows();
    for (int k = 0; k < n; ++k) {
        Rational d = h(k, k).re;
        if (!(h(k, k).im == 0)) return false;
        if (d < 0) return false;
        if (d == 0) {
            for (int j = k; j < n; ++j)
                if (!(h(k, j) == RationalComplex(0))) return false;
            continue;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                h(i, j) = h(i, j) - h(i, k) * h(k, j) / h(k, k);
    }
    return true;
}

template <class B>
bool psd(const Matrix<B>& h) {
    if constexpr (B::exact) {
        return psd_exact(h);
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen<B>(h), Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff() >= -B::epsilon;
    }
}

} // namespace detail

/// A quantum state: a density matrix (Hermitian, positive semidefinite,
/// unit trace).
template <class B>
class State {
  public:
    explicit State(Matrix<B> rho) : rho_(std::move(rho)) {
        require_hermitian(rho_, "state");
        if (!detail::psd<B>(rho_))
            throw invalid_operator_error("state: density matrix is not positive semidefinite");
        typename B::Complex tr = rho_.trace();
        if (!B::complex_eq(tr, typename B::Complex(1)))
            throw invalid_operator_error("state: trace is not 1");
    }

    int dim() const { return rho_.rows(); }
    const Matrix<B>& rho() const { return rho_; }

  private:
    Matrix<B> rho_;
};

/// Expectation value tr(rho a) of a Hermitian observable.
template <class B>
typename B::Real expectation(const State<B>& state, const Matrix<B>& a) {
    require_hermitian(a, "expectation");
    if (a.rows() != state.dim()) throw dimension_mismatch_error("expectation: dimension mismatch");
    typename B::Complex tr = (state.rho() * a).trace();
    if (!B::real_is_zero(imag(tr)))
        throw invalid_operator_error("expectation: non-real trace (broken hermiticity)");
    return real(tr);
}

/// Born probability of finding the value of a inside delta.
template <class B>
typename B::Real born(const State<B>& state, const Matrix<B>& a, const OutcomeSet& delta) {
    return expectation(state, spectral_projection(a, delta));
}

/// Per-context probabilities: the value a state gives to a family of
/// sections, context by context.
template <class B>
struct MeasureReport {
    const ContextPoset<B>* poset = nullptr;
    std::vector<typename B::Real> values;
};

namespace detail {

template <class B>
MeasureReport<B> measure_sections(const State<B>& state, const Subobject<B>& s) {
    const ContextPoset<B>& p = *s.poset;
    if (p.dim() != state.dim())
        throw dimension_mismatch_error("measure: state and poset dimensions differ");
    MeasureReport<B> r{&p, {}};
    for (int i = 0; i < p.size(); ++i) {
        Matrix<B> proj = p.context(i).projection_of_mask(s.masks[size_t(i)]);
        typename B::Real v = expectation(state, proj);
        // Clamp float roundoff into [0,1]; exact values already live there.
        if constexpr (!B::exact) v = std::min(1.0, std::max(0.0, v));
        r.values.push_back(v);
    }
    return r;
}

} // namespace detail

/// Value of the state on a clopen subobject: at each context, the expectation
/// of the projection that the section corresponds to under the per-context
/// isomorphism Pi(A) = powerset(Max(A)).
template <class B>
MeasureReport<B> measure_contra(const State<B>& state, const Subobject<B>& s) {
    if (s.variance != Variance::contra)
        throw poset_mismatch_error("measure_contra: expected a contravariant subobject");
    return detail::measure_sections(state, s);
}

/// Same pairing for covariant open families; on clopen families this is the
/// restriction of the probability valuation of the spectral bundle.
template <class B>
MeasureReport<B> measure_covar(const State<B>& state, const Subobject<B>& s) {
    if (s.variance != Variance::co)
        throw poset_mismatch_error("measure_covar: expected a covariant family");
    return detail::measure_sections(state, s);
}

/// Collapses probabilities to certainty judgements: a context is a member
/// when its value is 1 (>= 1 - epsilon in the float backend). The member set
/// must be monotone for the declared variance.
template <class B>
TruthValue<B> dichotomy(const MeasureReport<B>& report, Variance variance) {
    TruthValue<B> tv{report.poset, variance, {}};
    for (const auto& v : report.values) {
        if constexpr (B::exact)
            tv.members.push_back(v == 1);
        else
            tv.members.push_back(v >= 1.0 - B::epsilon);
    }
    if (!members_monotone(*report.poset, tv.members, variance))
        throw variance_violation_error(
            variance == Variance::contra
                ? "dichotomy: member set is not a downset (contravariant)"
                : "dichotomy: member set is not an upset (covariant)");
    return tv;
}

/// Falsifiability reading: contexts where the outer approximation of p is
/// certainly true. Always a downset.
template <class B>
TruthValue<B> truth_contra(const State<B>& state, const Matrix<B>& p,
                           const ContextPoset<B>& poset) {
    return dichotomy(measure_contra(state, embed_outer(p, poset)), Variance::contra);
}

/// Verifiability reading: contexts where the inner approximation of p is
/// certainly true. Always an upset.
template <class B>
TruthValue<B> truth_covar(const State<B>& state, const Matrix<B>& p,
                          const ContextPoset<B>& poset) {
    return dichotomy(measure_covar(state, embed_inner(p, poset)), Variance::co);
}

} // namespace bohr
