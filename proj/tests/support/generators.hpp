#pragma once

// Deterministic random generators for property tests. Everything is seeded
// explicitly, so failures reproduce.

#include "bohr/bohr.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace gen {

using bohr::Matrix;
using bohr::Rational;
using bohr::RationalComplex;

struct Rng {
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    std::mt19937_64 eng;

    int uniform(int lo, int hi) { // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(eng);
    }
    double gauss() { return std::normal_distribution<double>(0.0, 1.0)(eng); }
    Rational rational(int lo, int hi, int max_den = 4) {
        int den = uniform(1, max_den);
        return Rational(uniform(lo * den, hi * den), den);
    }
};

// ---- float-backend material -------------------------------------------------

inline Matrix<bohr::FloatBackend> random_hermitian_f(Rng& rng, int n, double scale = 1.0) {
    Matrix<bohr::FloatBackend> g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = {rng.gauss() * scale, rng.gauss() * scale};
    Matrix<bohr::FloatBackend> h = g + g.dagger();
    return std::complex<double>(0.5) * h;
}

// ---- rational-backend material ----------------------------------------------

inline RationalComplex random_gauss_q(Rng& rng) {
    return RationalComplex(Rational(rng.uniform(-3, 3)), Rational(rng.uniform(-3, 3)));
}

/// Random orthogonal family of n nonzero rational column vectors, by exact
/// Gram-Schmidt (orthogonalisation only; no normalisation, so everything
/// stays rational).
inline std::vector<Matrix<bohr::RationalBackend>> random_orthogonal_q(Rng& rng, int n) {
    using M = Matrix<bohr::RationalBackend>;
    std::vector<M> basis;
    int attempts = 0;
    while (int(basis.size()) < n && attempts < 200) {
        ++attempts;
        M v(n, 1);
        for (int i = 0; i < n; ++i) v(i, 0) = random_gauss_q(rng);
        for (const M& b : basis) {
            RationalComplex overlap = (b.dagger() * v)(0, 0);
            RationalComplex nrm = (b.dagger() * b)(0, 0);
            v = v - (overlap / nrm) * b;
        }
        if (!bohr::is_zero(v)) basis.push_back(std::move(v));
    }
    if (int(basis.size()) < n) { // fall back to coordinate vectors
        basis.clear();
        for (int i = 0; i < n; ++i) {
            M e(n, 1);
            e(i, 0) = RationalComplex(1);
            basis.push_back(std::move(e));
        }
    }
    return basis;
}

inline Matrix<bohr::RationalBackend> rank1_q(const Matrix<bohr::RationalBackend>& v) {
    RationalComplex nrm = (v.dagger() * v)(0, 0);
    return (RationalComplex(1) / nrm) * (v * v.dagger());
}

/// Random partition of 0..n-1 into at most max_blocks nonempty blocks.
inline std::vector<std::vector<int>> random_blocks(Rng& rng, int n, int max_blocks) {
    int k = rng.uniform(1, std::min(n, max_blocks));
    std::vector<std::vector<int>> blocks(size_t(k));
    for (int i = 0; i < n; ++i) blocks[size_t(i < k ? i : rng.uniform(0, k - 1))].push_back(i);
    return blocks;
}

// ---- backend-generic material -----------------------------------------------

/// Random context: a random orthogonal frame grouped into random blocks.
template <class B>
bohr::Context<B> random_context(Rng& rng, int n, int max_blocks = 32) {
    std::vector<Matrix<B>> rank1;
    if constexpr (B::exact) {
        for (const auto& v : random_orthogonal_q(rng, n)) rank1.push_back(rank1_q(v));
    } else {
        auto pairs = bohr::eigendecompose(random_hermitian_f(rng, n));
        for (auto& pr : pairs) rank1.push_back(pr.projection);
        // Generic spectra give n rank-1 pieces; degenerate ones are rare but
        // legal, the blocks below just get coarser.
    }
    std::vector<Matrix<B>> atoms;
    for (const auto& block : random_blocks(rng, int(rank1.size()), max_blocks)) {
        Matrix<B> acc = Matrix<B>::zero(n, n);
        for (int idx : block) acc = acc + rank1[size_t(idx)];
        atoms.push_back(std::move(acc));
    }
    return bohr::Context<B>(n, std::move(atoms));
}

/// Random projection (possibly 0 or 1) drawn from a fresh random context.
template <class B>
Matrix<B> random_projection(Rng& rng, int n) {
    bohr::Context<B> ctx = random_context<B>(rng, n);
    std::uint32_t mask = std::uint32_t(rng.uniform(0, (1 << ctx.size()) - 1));
    return ctx.projection_of_mask(mask);
}

template <class B>
Matrix<B> random_hermitian(Rng& rng, int n) {
    if constexpr (B::exact) {
        // Rational spectrum on a random rational frame.
        bohr::Context<B> ctx = random_context<B>(rng, n);
        Matrix<B> acc = Matrix<B>::zero(n, n);
        for (int i = 0; i < ctx.size(); ++i)
            acc = acc + typename B::Complex(rng.rational(-3, 3)) * ctx.atom(i);
        return acc;
    } else {
        return random_hermitian_f(rng, n);
    }
}

template <class B>
bohr::State<B> random_state(Rng& rng, int n) {
    Matrix<B> g(n, n);
    if constexpr (B::exact) {
        bool nonzero = false;
        while (!nonzero) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    g(i, j) = random_gauss_q(rng);
                    if (!(g(i, j) == RationalComplex(0))) nonzero = true;
                }
        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = {rng.gauss(), rng.gauss()};
    }
    Matrix<B> rho = g * g.dagger();
    typename B::Complex tr = rho.trace();
    rho = (typename B::Complex(1) / tr) * rho;
    return bohr::State<B>(rho);
}

template <class B>
bohr::ContextPoset<B> random_poset(Rng& rng, int n, int seeds) {
    std::vector<std::pair<std::string, bohr::Context<B>>> named;
    for (int s = 0; s < seeds; ++s)
        named.emplace_back("C" + std::to_string(s), random_context<B>(rng, n));
    return bohr::ContextPoset<B>::build(n, std::move(named));
}

/// Random coherent family of sections: random masks repaired by the
/// variance-appropriate closure (add restrictions downward for contra, add
/// extensions upward for co).
template <class B>
bohr::Subobject<B> random_subobject(Rng& rng, const bohr::ContextPoset<B>& poset,
                                    bohr::Variance variance) {
    bohr::Subobject<B> s{&poset, variance, {}};
    for (int i = 0; i < poset.size(); ++i)
        s.masks.push_back(std::uint32_t(rng.uniform(0, (1 << poset.context(i).size()) - 1)));
    bool changed = true;
    while (changed) {
        changed = false;
        for (int j = 0; j < poset.size(); ++j)
            for (int i = 0; i < poset.size(); ++i) {
                if (i == j || !poset.leq(i, j)) continue;
                for (int a = 0; a < poset.context(j).size(); ++a) {
                    bool up = s.masks[size_t(j)] & (1u << a);
                    int b = poset.restrict_atom(j, i, a);
                    bool down = s.masks[size_t(i)] & (1u << b);
                    if (variance == bohr::Variance::contra && up && !down) {
                        s.masks[size_t(i)] |= 1u << b;
                        changed = true;
                    } else if (variance == bohr::Variance::co && down && !up) {
                        s.masks[size_t(j)] |= 1u << a;
                        changed = true;
                    }
                }
            }
    }
    return s;
}

// ---- named fixtures ----------------------------------------------------------

template <class B>
Matrix<B> sigma_z() {
    Matrix<B> m(2, 2);
    m(0, 0) = typename B::Complex(1);
    m(1, 1) = typename B::Complex(-1);
    return m;
}

template <class B>
Matrix<B> sigma_x() {
    Matrix<B> m(2, 2);
    m(0, 1) = typename B::Complex(1);
    m(1, 0) = typename B::Complex(1);
    return m;
}

template <class B>
Matrix<B> proj_z0() { // |0><0|
    Matrix<B> m(2, 2);
    m(0, 0) = typename B::Complex(1);
    return m;
}

template <class B>
Matrix<B> proj_z1() { // |1><1|
    Matrix<B> m(2, 2);
    m(1, 1) = typename B::Complex(1);
    return m;
}

template <class B>
Matrix<B> proj_plus() { // |+><+|
    Matrix<B> m(2, 2);
    typename B::Complex half = typename B::Complex(1) / typename B::Complex(2);
    m(0, 0) = half;
    m(0, 1) = half;
    m(1, 0) = half;
    m(1, 1) = half;
    return m;
}

/// The three-context qubit poset {trivial, Az, Ax}.
template <class B>
bohr::ContextPoset<B> qubit_poset() {
    return bohr::ContextPoset<B>::build(
        2, {{"Az", bohr::Context<B>::from_commuting(2, {sigma_z<B>()})},
            {"Ax", bohr::Context<B>::from_commuting(2, {sigma_x<B>()})}});
}

} // namespace gen
