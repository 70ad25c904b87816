#include "support/generators.hpp"

#include <catch_amalgamated.hpp>

using namespace bohr;
using gen::Rng;

namespace {

template <class B>
double max_abs_diff(const Matrix<B>& x, const Matrix<B>& y) {
    double m = 0;
    for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) {
            auto d = x(i, j) - y(i, j);
            m = std::max(m, std::sqrt(B::to_double(norm(d))));
        }
    return m;
}

template <class B>
Matrix<B> scalar_mix(const Context<B>& ctx, const std::vector<typename B::Real>& coeffs) {
    Matrix<B> acc = Matrix<B>::zero(ctx.dim(), ctx.dim());
    for (int i = 0; i < ctx.size(); ++i)
        acc = acc + typename B::Complex(coeffs[size_t(i)]) * ctx.atom(i);
    return acc;
}

} // namespace

TEMPLATE_TEST_CASE("eigendecompose handles the trivial cases", "[linops]", RationalBackend,
                   FloatBackend) {
    using B = TestType;
    using M = Matrix<B>;

    auto id = M::identity(2);
    auto pairs = eigendecompose(id);
    REQUIRE(pairs.size() == 1);
    CHECK(B::real_eq(pairs[0].value, typename B::Real(1)));
    CHECK(approx_eq(pairs[0].projection, id));

    auto sz = gen::sigma_z<B>();
    pairs = eigendecompose(sz);
    REQUIRE(pairs.size() == 2);
    CHECK(B::real_eq(pairs[0].value, typename B::Real(-1)));
    CHECK(B::real_eq(pairs[1].value, typename B::Real(1)));
    CHECK(approx_eq(pairs[0].projection, gen::proj_z1<B>()));
    CHECK(approx_eq(pairs[1].projection, gen::proj_z0<B>()));
}

TEMPLATE_TEST_CASE("eigendecompose rejects non-Hermitian input", "[linops]", RationalBackend,
                   FloatBackend) {
    using B = TestType;
    Matrix<B> m(2, 2);
    m(0, 1) = typename B::Complex(1);
    CHECK_THROWS_AS(eigendecompose(m), invalid_operator_error);
}

TEST_CASE("eigendecompose reconstructs random Hermitians within 10*eps", "[linops]") {
    FloatBackend::epsilon = 1e-9;
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        int n = rng.uniform(2, 6);
        auto h = gen::random_hermitian_f(rng, n);
        auto pairs = eigendecompose(h);
        Matrix<FloatBackend> recon = Matrix<FloatBackend>::zero(n, n);
        Matrix<FloatBackend> sum = Matrix<FloatBackend>::zero(n, n);
        for (size_t i = 0; i < pairs.size(); ++i) {
            recon = recon + std::complex<double>(pairs[i].value) * pairs[i].projection;
            sum = sum + pairs[i].projection;
            if (i > 0) {
                CHECK(pairs[i - 1].value < pairs[i].value);
                CHECK(max_abs_diff<FloatBackend>(pairs[i].projection * pairs[i - 1].projection,
                                                 Matrix<FloatBackend>::zero(n, n)) < 1e-10);
            }
        }
        CHECK(max_abs_diff(recon, h) <= 10 * FloatBackend::epsilon);
        CHECK(max_abs_diff(sum, Matrix<FloatBackend>::identity(n)) <= 10 * FloatBackend::epsilon);
    }
}

TEST_CASE("exact eigendecompose proves rational spectra and rejects irrational ones",
          "[linops]") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        int n = rng.uniform(2, 4);
        auto h = gen::random_hermitian<RationalBackend>(rng, n);
        auto pairs = eigendecompose(h);
        Matrix<RationalBackend> recon = Matrix<RationalBackend>::zero(n, n);
        for (auto& pr : pairs)
            recon = recon + RationalComplex(pr.value) * pr.projection;
        CHECK(approx_eq(recon, h));
    }
    // Spectrum of [[0,1],[1,1]] is (1 +- sqrt(5))/2.
    Matrix<RationalBackend> fib(2, 2);
    fib(0, 1) = RationalComplex(1);
    fib(1, 0) = RationalComplex(1);
    fib(1, 1) = RationalComplex(1);
    CHECK_THROWS_AS(eigendecompose(fib), irrational_spectrum_error);
}

TEMPLATE_TEST_CASE("spectral_projection selects eigenvalues", "[linops]", RationalBackend,
                   FloatBackend) {
    using B = TestType;
    using M = Matrix<B>;

    SECTION("a projection is its own 1-eigenspace proposition") {
        auto p = gen::proj_plus<B>();
        CHECK(approx_eq(spectral_projection(p, OutcomeSet::point(1)), p));
    }
    SECTION("eigenvalue selection on diag(1,-1)") {
        auto sz = gen::sigma_z<B>();
        CHECK(approx_eq(spectral_projection(sz, OutcomeSet::open(0, 2)), gen::proj_z0<B>()));
    }
    SECTION("full line gives identity, empty set gives zero") {
        auto sz = gen::sigma_z<B>();
        CHECK(approx_eq(spectral_projection(sz, OutcomeSet::reals()), M::identity(2)));
        CHECK(is_zero(spectral_projection(sz, OutcomeSet::empty())));
    }
}

TEMPLATE_TEST_CASE("spectral_projection agrees with eigendecompose filtering", "[linops]",
                   RationalBackend, FloatBackend) {
    using B = TestType;
    Rng rng(11);
    auto ctx = gen::random_context<B>(rng, 3, 3);
    // Ensure three distinct eigenvalues 3/10, 7/10, 21/10 spread over the atoms.
    std::vector<typename B::Real> coeffs;
    std::vector<Rational> base = {Rational(3, 10), Rational(7, 10), Rational(21, 10)};
    for (int i = 0; i < ctx.size(); ++i) {
        if constexpr (B::exact)
            coeffs.push_back(base[size_t(i) % base.size()]);
        else
            coeffs.push_back(RationalBackend::to_double(base[size_t(i) % base.size()]));
    }
    Matrix<B> h = scalar_mix(ctx, coeffs);
    OutcomeSet low = OutcomeSet::open(0, 1);
    Matrix<B> got = spectral_projection(h, low);
    Matrix<B> expect = Matrix<B>::zero(3, 3);
    for (const auto& pr : eigendecompose(h))
        if (low.contains<B>(pr.value)) expect = expect + pr.projection;
    CHECK(approx_eq(got, expect));
}

TEMPLATE_TEST_CASE("spectral_projection is additive over disjoint outcome sets", "[linops]",
                   RationalBackend, FloatBackend) {
    using B = TestType;
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        auto h = gen::random_hermitian<B>(rng, 3);
        OutcomeSet left({RatInterval{Rational(-10), Rational(0), false, false}});
        OutcomeSet right({RatInterval{Rational(0), Rational(10), true, false}});
        OutcomeSet both({RatInterval{Rational(-10), Rational(0), false, false},
                         RatInterval{Rational(0), Rational(10), true, false}});
        Matrix<B> sum = spectral_projection(h, left) + spectral_projection(h, right);
        CHECK(approx_eq(sum, spectral_projection(h, both)));
    }
}

TEMPLATE_TEST_CASE("spectral family round-trips and validates", "[linops]", RationalBackend,
                   FloatBackend) {
    using B = TestType;
    using M = Matrix<B>;

    SECTION("diag(1,-1) family") {
        auto f = spectral_family(gen::sigma_z<B>());
        REQUIRE(f.breakpoints.size() == 2);
        CHECK(B::real_eq(f.breakpoints[0], typename B::Real(-1)));
        CHECK(B::real_eq(f.breakpoints[1], typename B::Real(1)));
        CHECK(approx_eq(f.steps[0], gen::proj_z1<B>()));
        CHECK(approx_eq(f.steps[1], M::identity(2)));
    }
    SECTION("non-monotone family is rejected") {
        SpectralFamily<B> bad;
        bad.breakpoints = {typename B::Real(0), typename B::Real(1)};
        bad.steps = {gen::proj_z0<B>(), gen::proj_z1<B>() + gen::proj_z0<B>() - gen::proj_z0<B>()};
        bad.steps[1] = gen::proj_z1<B>(); // E1 not >= E0
        CHECK_THROWS_AS(operator_from_family(bad), invalid_family_error);
    }
    SECTION("last step must be the identity") {
        SpectralFamily<B> bad;
        bad.breakpoints = {typename B::Real(0)};
        bad.steps = {gen::proj_z0<B>()};
        CHECK_THROWS_AS(operator_from_family(bad), invalid_family_error);
    }
}

TEST_CASE("float spectral round-trip on random Hermitians", "[linops]") {
    FloatBackend::epsilon = 1e-9;
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        int n = rng.uniform(2, 8);
        auto h = gen::random_hermitian_f(rng, n);
        auto back = operator_from_family(spectral_family(h));
        CHECK(max_abs_diff(back, h) <= 10 * FloatBackend::epsilon);
    }
}

TEST_CASE("exact spectral round-trip is literal", "[linops]") {
    Rng rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        auto h = gen::random_hermitian<RationalBackend>(rng, rng.uniform(2, 4));
        CHECK(approx_eq(operator_from_family(spectral_family(h)), h));
    }
}

TEMPLATE_TEST_CASE("projection lattice bounds and orthocomplement", "[linops]", RationalBackend,
                   FloatBackend) {
    using B = TestType;
    using M = Matrix<B>;
    auto p = gen::proj_plus<B>();
    auto id = M::identity(2);
    auto zero = M::zero(2, 2);

    CHECK(approx_eq(proj_meet(p, id), p));
    CHECK(approx_eq(proj_join(p, zero), p));
    CHECK(approx_eq(proj_ortho(gen::proj_z0<B>()), gen::proj_z1<B>()));

    SECTION("two distinct lines meet at 0 and join to the plane") {
        CHECK(is_zero(proj_meet(gen::proj_z0<B>(), p)));
        CHECK(approx_eq(proj_join(gen::proj_z0<B>(), p), id));
    }
    SECTION("dimension mismatch") {
        CHECK_THROWS_AS(proj_meet(p, M::identity(3)), dimension_mismatch_error);
    }
}

TEMPLATE_TEST_CASE("projection lattice laws on random pairs", "[linops]", RationalBackend,
                   FloatBackend) {
    using B = TestType;
    using M = Matrix<B>;
    Rng rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        int n = rng.uniform(2, 4);
        M p = gen::random_projection<B>(rng, n);
        M q = gen::random_projection<B>(rng, n);
        M id = M::identity(n);

        // commutativity + absorption + idempotence
        CHECK(proj_eq(proj_meet(p, q), proj_meet(q, p)));
        CHECK(proj_eq(proj_join(p, q), proj_join(q, p)));
        CHECK(proj_eq(proj_meet(p, proj_join(p, q)), p));
        CHECK(proj_eq(proj_join(p, proj_meet(p, q)), p));
        CHECK(proj_eq(proj_meet(p, p), p));

        // De Morgan
        CHECK(proj_eq(proj_ortho(proj_join(p, q)),
                      proj_meet(proj_ortho(p), proj_ortho(q))));

        // orthomodularity: p <= r implies r = p v (r ^ p')
        M r = proj_join(p, q);
        CHECK(proj_leq(p, r));
        CHECK(proj_eq(r, proj_join(p, proj_meet(r, proj_ortho(p)))));
        (void)id;
    }
}

TEST_CASE("distributivity fails on the stored qubit triple", "[linops]") {
    using B = RationalBackend;
    auto p = gen::proj_z0<B>();
    auto q = gen::proj_plus<B>();
    auto r = proj_ortho(gen::proj_plus<B>()); // |-><-|
    auto lhs = proj_meet(p, proj_join(q, r)); // p ^ I = p
    auto rhs = proj_join(proj_meet(p, q), proj_meet(p, r)); // 0 v 0 = 0
    CHECK(approx_eq(lhs, p));
    CHECK(is_zero(rhs));
    CHECK(!proj_eq(lhs, rhs));
}

TEST_CASE("backends agree on rational regression cases", "[linops]") {
    FloatBackend::epsilon = 1e-9;
    using RB = RationalBackend;
    using FB = FloatBackend;
    auto hq = gen::sigma_x<RB>();
    auto hf = gen::sigma_x<FB>();
    auto pq = eigendecompose(hq);
    auto pf = eigendecompose(hf);
    REQUIRE(pq.size() == pf.size());
    for (size_t i = 0; i < pq.size(); ++i) {
        CHECK(std::abs(RB::to_double(pq[i].value) - pf[i].value) <= 1e-9);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                auto zq = pq[i].projection(r, c);
                auto zf = pf[i].projection(r, c);
                CHECK(std::abs(RB::to_double(zq.re) - zf.real()) <= 1e-9);
                CHECK(std::abs(RB::to_double(zq.im) - zf.imag()) <= 1e-9);
            }
    }
}

TEMPLATE_TEST_CASE("outcome boundary semantics", "[linops]", RationalBackend, FloatBackend) {
    using B = TestType;
    OutcomeSet half_open({RatInterval{Rational(0), Rational(1), true, false}});
    CHECK(!half_open.contains<B>(typename B::Real(0)));
    CHECK(half_open.contains<B>(typename B::Real(1)));
    if constexpr (!B::exact) {
        // Within epsilon of a boundary: inclusion for closed, exclusion for open.
        CHECK(half_open.contains<B>(1.0 + 0.5 * B::epsilon));
        CHECK(!half_open.contains<B>(0.0 + 0.5 * B::epsilon));
    }
}
