#pragma once

#include "bohr/context.hpp"

#include <algorithm>
#include <vector>

namespace bohr {

/// Best approximation of p from above inside the context: the sum of the
/// atoms that p touches. Smallest element of Pi(A) dominating p.
template <class B>
Matrix<B> outer_proj(const Matrix<B>& p, const Context<B>& ctx) {
    require_projection(p, "outer_proj");
    if (p.rows() != ctx.dim()) throw dimension_mismatch_error("outer_proj: dimension mismatch");
    Matrix<B> acc = Matrix<B>::zero(ctx.dim(), ctx.dim());
    for (int i = 0; i < ctx.size(); ++i)
        if (!is_zero(ctx.atom(i) * p)) acc = acc + ctx.atom(i);
    return acc;
}

/// Best approximation of p from below inside the context: the sum of the
/// atoms contained in p. Largest element of Pi(A) below p.
template <class B>
Matrix<B> inner_proj(const Matrix<B>& p, const Context<B>& ctx) {
    require_projection(p, "inner_proj");
    if (p.rows() != ctx.dim()) throw dimension_mismatch_error("inner_proj: dimension mismatch");
    Matrix<B> acc = Matrix<B>::zero(ctx.dim(), ctx.dim());
    for (int i = 0; i < ctx.size(); ++i)
        if (approx_eq(p * ctx.atom(i), ctx.atom(i))) acc = acc + ctx.atom(i);
    return acc;
}

/// Spectral order on Hermitian operators: a <= b iff E_b(t) <= E_a(t) for
/// every t. Convention note: the inequality on resolutions is deliberately
/// contravariant so that on projections the spectral order coincides with the
/// usual one (p <= q iff the resolutions satisfy E_q <= E_p on [0,1)); the
/// opposite pointwise convention would reverse the projection order. Step
/// functions only change at breakpoints, so checking the merged breakpoint
/// set suffices.
template <class B>
bool spectral_leq(const Matrix<B>& a, const Matrix<B>& b) {
    if (a.rows() != b.rows()) throw dimension_mismatch_error("spectral_leq: dimension mismatch");
    SpectralFamily<B> fa = spectral_family(a);
    SpectralFamily<B> fb = spectral_family(b);
    std::vector<typename B::Real> ts = fa.breakpoints;
    ts.insert(ts.end(), fb.breakpoints.begin(), fb.breakpoints.end());
    std::sort(ts.begin(), ts.end());
    for (const auto& t : ts)
        if (!proj_leq(fb.at(t), fa.at(t))) return false;
    return true;
}

namespace detail {

enum class Approx { inner, outer };

/// Resolution of the daseinised observable: apply the dual projection
/// approximation to every step of the resolution of a. Finite spectra make
/// the right-limit in the inner case exact, so both cases are pointwise.
template <class B>
SpectralFamily<B> dasein_family(const Matrix<B>& a, const Context<B>& ctx, Approx kind) {
    SpectralFamily<B> f = spectral_family(a);
    SpectralFamily<B> g;
    g.breakpoints = f.breakpoints;
    for (const Matrix<B>& step : f.steps)
        g.steps.push_back(kind == Approx::outer ? inner_proj(step, ctx)
                                                : outer_proj(step, ctx));
    return g;
}

} // namespace detail

/// Smallest spectral-order dominator of a inside the context algebra.
template <class B>
Matrix<B> outer_obs(const Matrix<B>& a, const Context<B>& ctx) {
    return operator_from_family(detail::dasein_family(a, ctx, detail::Approx::outer));
}

/// Largest spectral-order minorant of a inside the context algebra.
template <class B>
Matrix<B> inner_obs(const Matrix<B>& a, const Context<B>& ctx) {
    return operator_from_family(detail::dasein_family(a, ctx, detail::Approx::inner));
}

/// The interval-domain reading of observable a at a character of the context:
/// [lambda(inner), lambda(outer)]. Degenerates to a point when a lies in the
/// context algebra.
template <class B>
Interval<B> interval_value(const Matrix<B>& a, const Context<B>& ctx, const Character<B>& ch) {
    if (ch.context != &ctx && !(*ch.context == ctx))
        throw not_in_context_error("interval_value: character belongs to another context");
    Matrix<B> lo_op = inner_obs(a, ctx);
    Matrix<B> hi_op = outer_obs(a, ctx);
    typename B::Real lo = ctx.eigen_on_atom(lo_op, ch.atom);
    typename B::Real hi = ctx.eigen_on_atom(hi_op, ch.atom);
    return Interval<B>{lo, hi};
}

/// Scott-style membership: the whole compact interval fits inside the
/// outcome set.
template <class B>
bool scott_contains(const OutcomeSet& delta, const Interval<B>& iv) {
    return delta.template contains_interval<B>(iv.lo, iv.hi);
}

} // namespace bohr
