#pragma once

#include "bohr/dasein.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bohr {

/// Which of the two topos constructions a family of sections lives in.
/// Contravariant families restrict downward (subfunctors of the spectral
/// presheaf); covariant families extend upward (opens of the spectral
/// bundle).
enum class Variance { contra, co };

inline const char* variance_name(Variance v) { return v == Variance::contra ? "contra" : "co"; }

/// Per-context subsets of the Gelfand spectra over a fixed poset, stored as
/// bitmasks in canonical atom order. Fibers are finite and discrete, so every
/// subset is clopen; the only content of "clopen subobject" (contravariant)
/// and "open of the spectral bundle" (covariant) is the coherence condition
/// along context inclusions, checked by is_valid.
template <class B>
struct Subobject {
    const ContextPoset<B>* poset = nullptr;
    Variance variance = Variance::contra;
    std::vector<std::uint32_t> masks;
};

namespace detail {

inline std::uint32_t full_mask(int k) { return k >= 32 ? ~0u : ((1u << k) - 1u); }

template <class B>
void require_same_carrier(const Subobject<B>& s, const Subobject<B>& t, const char* what) {
    if (s.poset != t.poset) throw poset_mismatch_error(std::string(what) + ": different posets");
    if (s.variance != t.variance)
        throw poset_mismatch_error(std::string(what) + ": different variances");
}

} // namespace detail

template <class B>
Subobject<B> sub_top(const ContextPoset<B>& poset, Variance v) {
    Subobject<B> s{&poset, v, {}};
    for (int i = 0; i < poset.size(); ++i)
        s.masks.push_back(detail::full_mask(poset.context(i).size()));
    return s;
}

template <class B>
Subobject<B> sub_bottom(const ContextPoset<B>& poset, Variance v) {
    Subobject<B> s{&poset, v, std::vector<std::uint32_t>(size_t(poset.size()), 0u)};
    return s;
}

/// Checks the variance-appropriate coherence condition.
///   contra: lambda in S(A') implies lambda|_A in S(A) for A <= A'.
///   co:     lambda|_A in S(A) implies lambda in S(A') for A <= A'.
template <class B>
bool is_valid(const Subobject<B>& s) {
    const ContextPoset<B>& p = *s.poset;
    if (int(s.masks.size()) != p.size()) return false;
    for (int j = 0; j < p.size(); ++j) {
        if (s.masks[size_t(j)] & ~detail::full_mask(p.context(j).size())) return false;
        for (int i = 0; i < p.size(); ++i) {
            if (i == j || !p.leq(i, j)) continue;
            for (int a = 0; a < p.context(j).size(); ++a) {
                bool up = s.masks[size_t(j)] & (1u << a);
                bool down = s.masks[size_t(i)] & (1u << p.restrict_atom(j, i, a));
                if (s.variance == Variance::contra ? (up && !down) : (down && !up)) return false;
            }
        }
    }
    return true;
}

template <class B>
Subobject<B> sub_meet(const Subobject<B>& s, const Subobject<B>& t) {
    detail::require_same_carrier(s, t, "sub_meet");
    Subobject<B> r = s;
    for (size_t i = 0; i < r.masks.size(); ++i) r.masks[i] &= t.masks[i];
    return r;
}

template <class B>
Subobject<B> sub_join(const Subobject<B>& s, const Subobject<B>& t) {
    detail::require_same_carrier(s, t, "sub_join");
    Subobject<B> r = s;
    for (size_t i = 0; i < r.masks.size(); ++i) r.masks[i] |= t.masks[i];
    return r;
}

template <class B>
bool sub_leq(const Subobject<B>& s, const Subobject<B>& t) {
    detail::require_same_carrier(s, t, "sub_leq");
    for (size_t i = 0; i < s.masks.size(); ++i)
        if (s.masks[i] & ~t.masks[i]) return false;
    return true;
}

template <class B>
bool sub_eq(const Subobject<B>& s, const Subobject<B>& t) {
    detail::require_same_carrier(s, t, "sub_eq");
    return s.masks == t.masks;
}

/// Heyting implication.
///
/// Contravariant (Kripke clause over subcontexts): lambda is in (S=>T)(A) iff
/// every restriction of lambda to a smaller context that lands in S also
/// lands in T.
///
/// Covariant (frame interior): start from the pointwise complement(S) | T and
/// delete lambda from a fiber while some extension of it at a larger context
/// escapes the family; the fixpoint is the largest coherent family below the
/// pointwise implication. Both satisfy the residuation adjunction
/// U <= (S=>T) iff U & S <= T.
template <class B>
Subobject<B> heyting_implies(const Subobject<B>& s, const Subobject<B>& t) {
    detail::require_same_carrier(s, t, "heyting_implies");
    const ContextPoset<B>& p = *s.poset;
    Subobject<B> r{s.poset, s.variance, std::vector<std::uint32_t>(size_t(p.size()), 0u)};

    if (s.variance == Variance::contra) {
        for (int j = 0; j < p.size(); ++j) {
            std::uint32_t m = 0;
            for (int a = 0; a < p.context(j).size(); ++a) {
                bool ok = true;
                for (int i = 0; i < p.size() && ok; ++i) {
                    if (!p.leq(i, j)) continue;
                    int b = p.restrict_atom(j, i, a);
                    bool in_s = s.masks[size_t(i)] & (1u << b);
                    bool in_t = t.masks[size_t(i)] & (1u << b);
                    if (in_s && !in_t) ok = false;
                }
                if (ok) m |= 1u << a;
            }
            r.masks[size_t(j)] = m;
        }
        return r;
    }

    for (int i = 0; i < p.size(); ++i) {
        std::uint32_t full = detail::full_mask(p.context(i).size());
        r.masks[size_t(i)] = (~s.masks[size_t(i)] & full) | t.masks[size_t(i)];
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int i = 0; i < p.size(); ++i)
            for (int b = 0; b < p.context(i).size(); ++b) {
                if (!(r.masks[size_t(i)] & (1u << b))) continue;
                bool escapes = false;
                for (int j = 0; j < p.size() && !escapes; ++j) {
                    if (i == j || !p.leq(i, j)) continue;
                    for (int a = 0; a < p.context(j).size(); ++a)
                        if (p.restrict_atom(j, i, a) == b &&
                            !(r.masks[size_t(j)] & (1u << a))) {
                            escapes = true;
                            break;
                        }
                }
                if (escapes) {
                    r.masks[size_t(i)] &= ~(1u << b);
                    changed = true;
                }
            }
    }
    return r;
}

template <class B>
Subobject<B> heyting_not(const Subobject<B>& s) {
    return heyting_implies(s, sub_bottom(*s.poset, s.variance));
}

/// Contravariant daseinisation embedding of a projection: at each context the
/// characters of its outer approximation. Preserves 0, 1 and joins; the
/// subfunctor condition follows from context monotonicity of outer_proj.
template <class B>
Subobject<B> embed_outer(const Matrix<B>& p, const ContextPoset<B>& poset) {
    require_projection(p, "embed_outer");
    Subobject<B> s{&poset, Variance::contra, {}};
    for (int i = 0; i < poset.size(); ++i) {
        auto mask = poset.context(i).mask_of_projection(outer_proj(p, poset.context(i)));
        if (!mask) throw invariant_error("embed_outer: daseinisation left the context algebra");
        s.masks.push_back(*mask);
    }
    return s;
}

/// Covariant daseinisation embedding: characters of the inner approximation.
/// Preserves 0, 1 and meets.
template <class B>
Subobject<B> embed_inner(const Matrix<B>& p, const ContextPoset<B>& poset) {
    require_projection(p, "embed_inner");
    Subobject<B> s{&poset, Variance::co, {}};
    for (int i = 0; i < poset.size(); ++i) {
        auto mask = poset.context(i).mask_of_projection(inner_proj(p, poset.context(i)));
        if (!mask) throw invariant_error("embed_inner: daseinisation left the context algebra");
        s.masks.push_back(*mask);
    }
    return s;
}

/// The covariant elementary proposition "a lands in delta": the characters
/// whose interval-domain reading of a is certified inside delta. Coherent
/// because intervals only shrink as contexts grow.
template <class B>
Subobject<B> covariant_proposition(const Matrix<B>& a, const OutcomeSet& delta,
                                   const ContextPoset<B>& poset) {
    require_hermitian(a, "covariant_proposition");
    Subobject<B> s{&poset, Variance::co, {}};
    for (int i = 0; i < poset.size(); ++i) {
        const Context<B>& ctx = poset.context(i);
        Matrix<B> lo_op = inner_obs(a, ctx);
        Matrix<B> hi_op = outer_obs(a, ctx);
        std::uint32_t m = 0;
        for (int atom = 0; atom < ctx.size(); ++atom) {
            Interval<B> iv{ctx.eigen_on_atom(lo_op, atom), ctx.eigen_on_atom(hi_op, atom)};
            if (scott_contains(delta, iv)) m |= 1u << atom;
        }
        s.masks.push_back(m);
    }
    return s;
}

/// A global truth value: a downset (contravariant) or upset (covariant) of
/// contexts.
template <class B>
struct TruthValue {
    const ContextPoset<B>* poset = nullptr;
    Variance variance = Variance::contra;
    std::vector<bool> members;
};

template <class B>
bool members_monotone(const ContextPoset<B>& poset, const std::vector<bool>& members,
                      Variance variance) {
    for (int i = 0; i < poset.size(); ++i)
        for (int j = 0; j < poset.size(); ++j) {
            if (i == j || !poset.leq(i, j)) continue;
            bool lower = members[size_t(i)], upper = members[size_t(j)];
            if (variance == Variance::contra ? (upper && !lower) : (lower && !upper))
                return false;
        }
    return true;
}

template <class B>
TruthValue<B> tv_meet(const TruthValue<B>& x, const TruthValue<B>& y) {
    if (x.poset != y.poset || x.variance != y.variance)
        throw poset_mismatch_error("tv_meet: incompatible truth values");
    TruthValue<B> r = x;
    for (size_t i = 0; i < r.members.size(); ++i) r.members[i] = r.members[i] && y.members[i];
    return r;
}

template <class B>
TruthValue<B> tv_join(const TruthValue<B>& x, const TruthValue<B>& y) {
    if (x.poset != y.poset || x.variance != y.variance)
        throw poset_mismatch_error("tv_join: incompatible truth values");
    TruthValue<B> r = x;
    for (size_t i = 0; i < r.members.size(); ++i)
        r.members[i] = r.members[i] || y.members[i];
    return r;
}

} // namespace bohr
