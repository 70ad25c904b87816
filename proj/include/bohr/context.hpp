#pragma once

#include "bohr/linops.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bohr {

namespace detail {

template <class B>
typename B::Real key_component(const typename B::Complex& z, bool imag_part) {
    if constexpr (B::exact) {
        return imag_part ? imag(z) : real(z);
    } else {
        double v = imag_part ? z.imag() : z.real();
        // Rounded so the sort key is stable against last-bit noise.
        return std::round(v * 1e12) / 1e12;
    }
}

/// Strict "comes first" order on equally sized matrices: descending
/// lexicographic over flattened (re, im) entries, so e.g. diag(1,0) precedes
/// diag(0,1).
template <class B>
bool atom_key_less(const Matrix<B>& a, const Matrix<B>& b) {
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            for (bool im : {false, true}) {
                auto ka = key_component<B>(a(i, j), im);
                auto kb = key_component<B>(b(i, j), im);
                if (ka != kb) return ka > kb;
            }
    return false;
}

} // namespace detail

/// A classical context: a commutative unital *-subalgebra of M_n, stored as
/// the partition of the identity into its minimal projections (atoms). Atoms
/// are kept in a canonical order so context equality is list equality.
template <class B>
class Context {
  public:
    Context(int dim, std::vector<Matrix<B>> atoms) : dim_(dim), atoms_(std::move(atoms)) {
        validate();
        std::sort(atoms_.begin(), atoms_.end(), detail::atom_key_less<B>);
    }

    static Context trivial(int n) {
        std::vector<Matrix<B>> a;
        a.push_back(Matrix<B>::identity(n));
        return Context(n, std::move(a));
    }

    /// The context generated by a family of pairwise commuting Hermitian
    /// operators: the common refinement of their eigenpartitions.
    static Context from_commuting(int dim, const std::vector<Matrix<B>>& ops) {
        for (size_t i = 0; i < ops.size(); ++i) {
            require_hermitian(ops[i], "context generator");
            if (ops[i].rows() != dim)
                throw dimension_mismatch_error("context generator has wrong dimension");
            for (size_t j = i + 1; j < ops.size(); ++j)
                if (!commutes(ops[i], ops[j]))
                    throw non_commuting_error("generators " + std::to_string(i) + " and " +
                                              std::to_string(j) + " do not commute");
        }
        std::vector<Matrix<B>> atoms;
        atoms.push_back(Matrix<B>::identity(dim));
        for (const Matrix<B>& op : ops) {
            std::vector<Matrix<B>> refined;
            for (const auto& pr : eigendecompose(op))
                for (const Matrix<B>& a : atoms) {
                    Matrix<B> piece = a * pr.projection;
                    if (!is_zero(piece)) refined.push_back(std::move(piece));
                }
            atoms = std::move(refined);
        }
        return Context(dim, std::move(atoms));
    }

    int dim() const { return dim_; }
    int size() const { return int(atoms_.size()); }
    const Matrix<B>& atom(int i) const { return atoms_[size_t(i)]; }
    const std::vector<Matrix<B>>& atoms() const { return atoms_; }

    friend bool operator==(const Context& a, const Context& b) {
        if (a.dim_ != b.dim_ || a.atoms_.size() != b.atoms_.size()) return false;
        for (size_t i = 0; i < a.atoms_.size(); ++i)
            if (!approx_eq(a.atoms_[i], b.atoms_[i])) return false;
        return true;
    }

    /// Sum of the atoms selected by the bitmask: the generic element of Pi(A).
    Matrix<B> projection_of_mask(std::uint32_t mask) const {
        Matrix<B> acc = Matrix<B>::zero(dim_, dim_);
        for (int i = 0; i < size(); ++i)
            if (mask & (1u << i)) acc = acc + atoms_[size_t(i)];
        return acc;
    }

    /// Which atoms make up p, if p lies in Pi(A).
    std::optional<std::uint32_t> mask_of_projection(const Matrix<B>& p) const {
        std::uint32_t mask = 0;
        for (int i = 0; i < size(); ++i) {
            Matrix<B> prod = atoms_[size_t(i)] * p;
            if (approx_eq(prod, atoms_[size_t(i)]))
                mask |= 1u << i;
            else if (!is_zero(prod))
                return std::nullopt;
        }
        if (!approx_eq(projection_of_mask(mask), p)) return std::nullopt;
        return mask;
    }

    bool contains_projection(const Matrix<B>& p) const { return bool(mask_of_projection(p)); }

    /// a belongs to the context algebra iff it is constant on every atom.
    bool in_algebra(const Matrix<B>& a) const {
        if (a.rows() != dim_ || a.cols() != dim_) return false;
        Matrix<B> recon = Matrix<B>::zero(dim_, dim_);
        for (int i = 0; i < size(); ++i) {
            auto c = constant_on_atom(a, i);
            if (!c) return false;
            recon = recon + typename B::Complex(*c) * atoms_[size_t(i)];
        }
        return approx_eq(recon, a);
    }

    /// The eigenvalue of a on atom i (a must act as a scalar there).
    typename B::Real eigen_on_atom(const Matrix<B>& a, int i) const {
        auto c = constant_on_atom(a, i);
        if (!c) throw not_in_context_error("operator is not constant on the context atom");
        return *c;
    }

  private:
    std::optional<typename B::Real> constant_on_atom(const Matrix<B>& a, int i) const {
        const Matrix<B>& p = atoms_[size_t(i)];
        Matrix<B> ap = a * p;
        typename B::Complex tr_p = p.trace();
        typename B::Complex c = ap.trace() / tr_p;
        if (!B::real_is_zero(imag(c))) return std::nullopt;
        typename B::Real value = real(c);
        if (!approx_eq(ap, typename B::Complex(value) * p)) return std::nullopt;
        if (!approx_eq(ap, p * a)) return std::nullopt;
        return value;
    }

    void validate() const {
        if (atoms_.empty()) throw invariant_error("context: needs at least one atom");
        Matrix<B> sum = Matrix<B>::zero(dim_, dim_);
        for (size_t i = 0; i < atoms_.size(); ++i) {
            if (atoms_[i].rows() != dim_ || atoms_[i].cols() != dim_)
                throw dimension_mismatch_error("context: atom dimension mismatch");
            require_projection(atoms_[i], "context atom");
            if (is_zero(atoms_[i])) throw invariant_error("context: zero atom");
            for (size_t j = i + 1; j < atoms_.size(); ++j)
                if (!is_zero(atoms_[i] * atoms_[j]))
                    throw invariant_error("context: atoms are not mutually orthogonal");
            sum = sum + atoms_[i];
        }
        if (!approx_eq(sum, Matrix<B>::identity(dim_)))
            throw invariant_error("context: atoms do not sum to the identity");
    }

    int dim_;
    std::vector<Matrix<B>> atoms_;
};

/// True iff B_ctx is a subalgebra of A_ctx (every atom of B_ctx is a sum of
/// atoms of A_ctx); i.e. A_ctx refines B_ctx, B_ctx <= A_ctx in V.
template <class B>
bool refines(const Context<B>& a_ctx, const Context<B>& b_ctx) {
    if (a_ctx.dim() != b_ctx.dim()) throw dimension_mismatch_error("refines: dimension mismatch");
    for (int i = 0; i < a_ctx.size(); ++i)
        for (int j = 0; j < b_ctx.size(); ++j) {
            Matrix<B> prod = b_ctx.atom(j) * a_ctx.atom(i);
            if (!is_zero(prod) && !approx_eq(prod, a_ctx.atom(i))) return false;
        }
    return true;
}

/// Largest context refined by both arguments: atoms are the connected
/// components of the overlap graph between the two atom families.
template <class B>
Context<B> intersect(const Context<B>& a_ctx, const Context<B>& b_ctx) {
    if (a_ctx.dim() != b_ctx.dim())
        throw dimension_mismatch_error("intersect: dimension mismatch");
    const int ka = a_ctx.size(), kb = b_ctx.size();
    std::vector<int> parent(size_t(ka) + kb);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[size_t(x)] != x) x = parent[size_t(x)] = parent[size_t(parent[size_t(x)])];
        return x;
    };
    for (int i = 0; i < ka; ++i)
        for (int j = 0; j < kb; ++j)
            if (!is_zero(a_ctx.atom(i) * b_ctx.atom(j))) {
                int ri = find(i), rj = find(ka + j);
                if (ri != rj) parent[size_t(ri)] = rj;
            }
    std::vector<Matrix<B>> sums;
    std::vector<int> root_of;
    for (int i = 0; i < ka; ++i) {
        int r = find(i);
        auto it = std::find(root_of.begin(), root_of.end(), r);
        size_t idx;
        if (it == root_of.end()) {
            root_of.push_back(r);
            sums.push_back(Matrix<B>::zero(a_ctx.dim(), a_ctx.dim()));
            idx = sums.size() - 1;
        } else {
            idx = size_t(it - root_of.begin());
        }
        sums[idx] = sums[idx] + a_ctx.atom(i);
    }
    return Context<B>(a_ctx.dim(), std::move(sums));
}

/// A character of a context: one of its atoms, seen as the *-homomorphism
/// sending an algebra element to its eigenvalue on that atom.
template <class B>
struct Character {
    const Context<B>* context;
    int atom;
};

template <class B>
std::vector<Character<B>> gelfand_spectrum(const Context<B>& ctx) {
    std::vector<Character<B>> out;
    for (int i = 0; i < ctx.size(); ++i) out.push_back({&ctx, i});
    return out;
}

template <class B>
typename B::Real evaluate_character(const Character<B>& ch, const Matrix<B>& a) {
    if (!ch.context->in_algebra(a))
        throw not_in_context_error("evaluate_character: operator outside the context algebra");
    return ch.context->eigen_on_atom(a, ch.atom);
}

/// Restriction along a context inclusion: the unique character of the smaller
/// context whose atom contains the given character's atom.
template <class B>
Character<B> restrict_character(const Character<B>& ch, const Context<B>& smaller) {
    if (!refines(*ch.context, smaller))
        throw not_a_subcontext_error("restrict_character: contexts are not comparable");
    const Matrix<B>& q = ch.context->atom(ch.atom);
    for (int i = 0; i < smaller.size(); ++i)
        if (approx_eq(smaller.atom(i) * q, q)) return {&smaller, i};
    throw invariant_error("restrict_character: no containing atom (broken partition)");
}

/// The finite, intersection-closed fragment of V(A) generated by the seeds,
/// with the trivial context forced in as the bottom. Index 0 is the bottom;
/// seeds keep their given names; generated intersections are named from their
/// parents. All iteration is deterministic.
template <class B>
class ContextPoset {
  public:
    static ContextPoset build(int dim, std::vector<std::pair<std::string, Context<B>>> seeds) {
        ContextPoset p;
        p.dim_ = dim;
        p.push(Context<B>::trivial(dim), "trivial");
        for (auto& [name, ctx] : seeds) {
            if (ctx.dim() != dim) throw dimension_mismatch_error("poset: seed dimension mismatch");
            if (p.find(ctx) < 0) p.push(std::move(ctx), name);
        }
        // Closure under pairwise intersection; new elements join the queue.
        for (size_t j = 1; j < p.ctxs_.size(); ++j)
            for (size_t i = 1; i < j; ++i) {
                Context<B> meet = intersect(p.ctxs_[i], p.ctxs_[j]);
                if (p.find(meet) < 0)
                    p.push(std::move(meet), "(" + p.names_[i] + "&" + p.names_[j] + ")");
            }
        p.finalize();
        return p;
    }

    int dim() const { return dim_; }
    int size() const { return int(ctxs_.size()); }
    const Context<B>& context(int i) const { return ctxs_[size_t(i)]; }
    const std::string& name(int i) const { return names_[size_t(i)]; }
    int bottom() const { return 0; }

    /// leq(i, j): context i is a subalgebra of context j.
    bool leq(int i, int j) const { return leq_[size_t(i)][size_t(j)]; }

    std::optional<int> index_of(std::string_view name) const {
        for (size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return int(i);
        return std::nullopt;
    }

    int find(const Context<B>& ctx) const {
        for (size_t i = 0; i < ctxs_.size(); ++i)
            if (ctxs_[i] == ctx) return int(i);
        return -1;
    }

    /// Atom map of the restriction Max(ctx_from) -> Max(ctx_to), to <= from.
    int restrict_atom(int from, int to, int atom) const {
        const std::vector<int>& m = rmap_[size_t(from)][size_t(to)];
        if (m.empty()) throw not_a_subcontext_error("restrict_atom: contexts are not comparable");
        return m[size_t(atom)];
    }

    /// Covering relations (lower, upper) of the Hasse diagram.
    std::vector<std::pair<int, int>> covers() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < size(); ++i)
            for (int j = 0; j < size(); ++j) {
                if (i == j || !leq(i, j)) continue;
                bool covering = true;
                for (int k = 0; k < size() && covering; ++k)
                    if (k != i && k != j && leq(i, k) && leq(k, j)) covering = false;
                if (covering) out.emplace_back(i, j);
            }
        return out;
    }

    /// Context indices ordered so that larger algebras come first (a linear
    /// extension of the reverse order; atom count strictly drops along
    /// proper inclusions).
    std::vector<int> topo_max_first() const {
        std::vector<int> order(static_cast<size_t>(size()));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return ctxs_[size_t(a)].size() > ctxs_[size_t(b)].size();
        });
        return order;
    }

  private:
    void push(Context<B> ctx, std::string name) {
        ctxs_.push_back(std::move(ctx));
        names_.push_back(std::move(name));
    }

    void finalize() {
        const size_t n = ctxs_.size();
        leq_.assign(n, std::vector<bool>(n, false));
        rmap_.assign(n, std::vector<std::vector<int>>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                leq_[i][j] = refines(ctxs_[j], ctxs_[i]);
                if (!leq_[i][j]) continue;
                // Restriction map from j down to i.
                std::vector<int> m(size_t(ctxs_[j].size()));
                for (int a = 0; a < ctxs_[j].size(); ++a) {
                    const Matrix<B>& q = ctxs_[j].atom(a);
                    int hit = -1;
                    for (int b = 0; b < ctxs_[i].size(); ++b)
                        if (approx_eq(ctxs_[i].atom(b) * q, q)) {
                            hit = b;
                            break;
                        }
                    if (hit < 0) throw invariant_error("poset: restriction map broke");
                    m[size_t(a)] = hit;
                }
                rmap_[j][i] = std::move(m);
            }
    }

    int dim_ = 0;
    std::vector<Context<B>> ctxs_;
    std::vector<std::string> names_;
    std::vector<std::vector<bool>> leq_;
    std::vector<std::vector<std::vector<int>>> rmap_; // rmap_[from][to]
  };

} // namespace bohr
