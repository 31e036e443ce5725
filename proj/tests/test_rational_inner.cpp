#include <gtest/gtest.h>

#include <random>

#include "npick/rational_inner.hpp"
#include "oracles.hpp"

using namespace npick;

namespace {

MultiPoly neil_p() {
    MultiPoly p(2);
    p.add_term({3, 0}, 1.0);
    p.add_term({0, 2}, -1.0);
    return p;
}

RationalInner neil_f() { return make_rudin(1.0, {3, 2}, MultiPoly::constant(2, 1.0)); }

MultiPoly one_var(std::initializer_list<cplx> c) {
    MultiPoly p(1);
    int k = 0;
    for (auto x : c) p.add_term({k++}, x);
    return p;
}

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::input;
}

/// q = 1 + sum of small random terms; the coefficient budget keeps q away
/// from zero on the closed polydisc.
MultiPoly random_regular_q(std::mt19937_64& rng, std::size_t n, int max_deg, double budget) {
    std::uniform_int_distribution<int> e(0, max_deg);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MultiPoly q = MultiPoly::constant(n, 1.0);
    const int terms = 3;
    for (int k = 0; k < terms; ++k) {
        std::vector<int> ex(n);
        for (auto& x : ex) x = e(rng);
        if (MultiIndex(ex) == MultiIndex(n)) ex[0] = 1;
        q.add_term(MultiIndex(ex), std::polar(budget / terms * u(rng), 2 * std::numbers::pi * u(rng)));
    }
    return q;
}

}  // namespace

TEST(MakeRudin, NeilMonomial) {
    const auto f = neil_f();
    EXPECT_EQ(f.numerator(), MultiPoly::monomial({3, 2}));
    EXPECT_EQ(f.ndeg(), (MultiIndex{3, 2}));
    EXPECT_NEAR(std::abs(f({0.5, 0.5}) - std::pow(0.5, 5)), 0.0, 1e-16);
}

TEST(MakeRudin, OneVariableBlaschke) {
    const auto f = make_rudin(1.0, {1}, one_var({1.0, -0.5}));
    EXPECT_EQ(f.qtilde(), one_var({-0.5, 1.0}));
    EXPECT_EQ(f.ndeg(), MultiIndex{2});
    oracle::Blaschke b{1.0, 1, {0.5}};
    std::mt19937_64 rng(1);
    for (int k = 0; k < 50; ++k) {
        const cplx z = oracle::random_disc(rng);
        // z (z - 1/2)/(1 - z/2) equals the oracle's z (z - a)/(1 - conj(a) z)
        EXPECT_NEAR(std::abs(f({z}) - b(z)), 0.0, 1e-14);
    }
}

TEST(MakeRudin, ZW) {
    const auto f = make_rudin(1.0, {1, 1}, MultiPoly::constant(2, 1.0));
    EXPECT_EQ(f({0.3, cplx(0, 0.5)}), cplx(0.3) * cplx(0, 0.5));
}

TEST(MakeRudin, Normalization) {
    const auto f = make_rudin(1.0, {0}, one_var({2.0, -1.0}));
    EXPECT_EQ(f.q().coeff({0}), cplx(1.0));
    EXPECT_EQ(f.q().coeff({1}), cplx(-0.5));
    EXPECT_EQ(code_of([] { make_rudin(1.0, {0}, one_var({0.0, 1.0})); }), Errc::normalization);
}

TEST(MakeRudin, TauMustBeUnimodular) {
    EXPECT_EQ(code_of([] { make_rudin(1.1, {1}, one_var({1.0})); }), Errc::invalid_unimodular);
    EXPECT_NO_THROW(make_rudin(std::polar(1.0 + 1e-10, 0.3), {1}, one_var({1.0})));
    EXPECT_NEAR(std::abs(make_rudin(std::polar(1.0 + 1e-10, 0.3), {1}, one_var({1.0})).tau()), 1.0, 1e-15);
}

TEST(EvalInner, Examples) {
    const auto f = neil_f();
    EXPECT_DOUBLE_EQ(eval_inner(f, std::vector<cplx>{0.25, 0.125}).real(), 1.0 / 4096);
    EXPECT_EQ(f({0.0, 0.5}), cplx(0.0));
    const auto zw = make_rudin(1.0, {1, 1}, MultiPoly::constant(2, 1.0));
    EXPECT_NEAR(std::abs(zw({std::polar(1.0, std::numbers::pi / 3), std::polar(1.0, std::numbers::pi / 4)})), 1.0, 1e-15);
}

TEST(EvalInner, Pole) {
    MultiPoly q(2);
    q.add_term({0, 0}, 2.0);
    q.add_term({1, 0}, -1.0);
    q.add_term({0, 1}, -1.0);
    const auto f = make_rudin(1.0, {0, 0}, q);
    EXPECT_EQ(code_of([&] { f({1.0, 1.0}); }), Errc::pole);
}

TEST(CheckRegular, Examples) {
    EXPECT_EQ(check_regular(neil_f(), 32).status, Regularity::certified);

    const auto q = MultiPoly::constant(2, 1.0) + neil_p() * 0.1;
    const auto res = check_regular(q, 32);
    EXPECT_EQ(res.status, Regularity::certified);
    EXPECT_GE(res.min_modulus, 0.8 - 1e-12);

    MultiPoly bad(2);
    bad.add_term({0, 0}, 2.0);
    bad.add_term({1, 0}, -1.0);
    bad.add_term({0, 1}, -1.0);
    const auto r = check_regular(bad, 32);
    EXPECT_NE(r.status, Regularity::certified);
    EXPECT_LT(r.min_modulus, 1e-10);
    EXPECT_NEAR(std::abs(r.witness[0] - 1.0), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(r.witness[1] - 1.0), 0.0, 1e-9);
}

TEST(CheckRegular, NearZeroIsNotCertified) {
    // 1 - z/1.001 has its zero just outside the disc
    const auto r = check_regular(one_var({1.0, -1.0 / 1.001}), 8);
    EXPECT_NE(r.status, Regularity::certified);
    EXPECT_EQ(code_of([] { check_regular(one_var({1.0}), 3); }), Errc::input);
}

TEST(CheckInnerBoundary, Examples) {
    EXPECT_LE(check_inner_boundary(neil_f(), 1000), 1e-14);
    const auto f = make_rudin(1.0, {0, 0}, MultiPoly::constant(2, 1.0) + neil_p() * 0.1);
    EXPECT_LE(check_inner_boundary(f, 1000), 1e-12);

    auto broken = as_rational(f);
    broken.num = broken.num + MultiPoly::constant(2, 0.01);
    EXPECT_GT(check_inner_boundary(broken, 1000), 1e-3);
    EXPECT_EQ(code_of([&] { check_inner_boundary(f, 0); }), Errc::input);
}

TEST(Perturb, NeilFamily) {
    const PerturbationSpec spec{neil_f(), {neil_p()}, {0.1}, {0.0}};
    const auto fe = perturb(spec);
    // (z^3 w^2 + 0.1 (w^2 - z^3)) / (1 + 0.1 (z^3 - w^2))
    const auto num = MultiPoly::monomial({3, 2}) + reflect(neil_p()) * 0.1;
    const auto den = MultiPoly::constant(2, 1.0) + neil_p() * 0.1;
    EXPECT_TRUE(approx_equal(fe.num, num, 1e-15));
    EXPECT_TRUE(approx_equal(fe.den, den, 1e-15));
    EXPECT_NEAR(std::abs(fe({0.0, 0.5}) - 0.025 / 0.975), 0.0, 1e-15);
    EXPECT_EQ(neil_f()({0.0, 0.5}), cplx(0.0));
}

TEST(Perturb, ZeroPerturbationIsBase) {
    const auto fe = perturb({neil_f(), {neil_p()}, {0.0}, {0.0}});
    EXPECT_EQ(fe.num, neil_f().numerator());
    EXPECT_EQ(fe.den, neil_f().q());
}

TEST(Perturb, MatchesClosedFormWithDelta) {
    // delta term: z^{m+s-r} p with reflected term in the denominator
    const auto fe = perturb({neil_f(), {neil_p()}, {0.05}, {0.02}});
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        const cplx z = oracle::random_disc(rng), w = oracle::random_disc(rng);
        const cplx p = z * z * z - w * w, pt = w * w - z * z * z;
        const cplx expected = (z * z * z * w * w + 0.05 * pt + 0.02 * p) / (1.0 + 0.05 * p + 0.02 * pt);
        EXPECT_NEAR(std::abs(fe({z, w}) - expected), 0.0, 1e-14);
    }
}

TEST(Perturb, Errors) {
    MultiPoly tall(2);
    tall.add_term({4, 0}, 1.0);
    tall.add_term({0, 0}, -0.1);
    EXPECT_EQ(code_of([&] { perturb({neil_f(), {tall}, {0.1}, {0.0}}); }), Errc::perturbation_degree);
    EXPECT_EQ(code_of([&] { perturb({neil_f(), {neil_p()}, {0.5}, {0.0}}); }), Errc::not_inner);
    EXPECT_EQ(code_of([&] { perturb({neil_f(), {neil_p()}, {0.1, 0.2}, {0.0}}); }), Errc::input);
}

TEST(PerturbSimple, OneVariable) {
    // q = 2 - z is normalized to 1 - z/2, so qtilde = z - 1/2 and p~ = 1 - z
    const auto f = make_rudin(1.0, {0}, one_var({2.0, -1.0}));
    const auto fe = perturb_simple(f, one_var({-1.0, 1.0}), 0.1);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
        const cplx z = oracle::random_disc(rng);
        const cplx expected = ((z - 0.5) + 0.1 * (1.0 - z)) / ((1.0 - z / 2.0) + 0.1 * (z - 1.0));
        EXPECT_NEAR(std::abs(fe({z}) - expected), 0.0, 1e-14);
        // same function as the unnormalized form with the perturbation scaled by q(0) = 2
        const cplx unnormalized = ((2.0 * z - 1.0) + 0.2 * (1.0 - z)) / ((2.0 - z) + 0.2 * (z - 1.0));
        EXPECT_NEAR(std::abs(fe({z}) - unnormalized), 0.0, 1e-14);
    }
}

TEST(PerturbSimple, ZeroEpsilon) {
    const auto f = make_rudin(1.0, {0}, one_var({2.0, -1.0}));
    const auto fe = perturb_simple(f, one_var({-1.0, 1.0}), 0.0);
    EXPECT_EQ(fe.num, f.qtilde());
    EXPECT_EQ(fe.den, f.q());
}

TEST(PerturbSimple, RewrittenFormAgreesWithPerturb) {
    // (z^3 w^2 - eps p)/(1 + eps p) with p = z^3 - w^2
    const auto fe = perturb({neil_f(), {neil_p()}, {0.1}, {0.0}});
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const cplx z = oracle::random_disc(rng), w = oracle::random_disc(rng);
        const cplx p = z * z * z - w * w;
        EXPECT_NEAR(std::abs(fe({z, w}) - (z * z * z * w * w - 0.1 * p) / (1.0 + 0.1 * p)), 0.0, 1e-14);
    }
}

TEST(PerturbSimple, Errors) {
    EXPECT_EQ(code_of([] { perturb_simple(neil_f(), MultiPoly::constant(2, 1.0), 0.1); }), Errc::perturbation_degree);
    const auto f = make_rudin(1.0, {0}, one_var({2.0, -1.0}));
    EXPECT_EQ(code_of([&] { perturb_simple(f, one_var({1.0, 0.0, 1.0}), 0.1); }), Errc::perturbation_degree);
}

TEST(SearchEpsilon, NeilStopsBelowOneHalf) {
    const auto choice = search_epsilon(neil_f(), {neil_p()}, 0);
    ASSERT_TRUE(choice);
    EXPECT_DOUBLE_EQ(choice->eps, 0.25);
    EXPECT_EQ(choice->regularity.status, Regularity::certified);
}

// --- properties ---

TEST(Property, RudinInnerness) {
    std::mt19937_64 rng(21);
    int certified = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto q = random_regular_q(rng, n, 3, 0.6);
        MultiIndex m(n);
        for (std::size_t i = 0; i < n; ++i) m[i] = static_cast<int>(rng() % 3);
        const auto f = make_rudin(std::polar(1.0, 0.1 * trial), m, q);
        if (check_regular(f, 16).status != Regularity::certified) continue;
        ++certified;
        EXPECT_LE(check_inner_boundary(f, 1000, rng()), 1e-10);
    }
    EXPECT_GE(certified, 30);
}

TEST(Property, SchurBound) {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 1 + trial % 3;
        const auto f = make_rudin(1.0, MultiIndex(n), random_regular_q(rng, n, 3, 0.6));
        ASSERT_EQ(check_regular(f, 16).status, Regularity::certified);
        for (int k = 0; k < 1000; ++k) {
            Point z(n);
            for (auto& c : z) c = oracle::random_disc(rng);
            EXPECT_LE(std::abs(f(z)), 1.0 + 1e-12);
        }
    }
}

TEST(Property, PerturbationSeparationOffVariety) {
    std::mt19937_64 rng(23);
    const auto f = neil_f();
    for (int k = 0; k < 20; ++k) {
        const Point z{oracle::random_disc(rng), oracle::random_disc(rng)};
        if (std::abs(neil_p()(z)) < 1e-3) continue;
        bool separated = false;
        double eps = 0.5;
        for (int step = 0; step < 20 && !separated; ++step, eps *= 0.5) {
            try {
                const auto fe = perturb({f, {neil_p()}, {eps}, {0.0}});
                separated = std::abs(fe(z) - f(z)) > 1e-6;
            } catch (const Error&) {
            }
        }
        EXPECT_TRUE(separated);
    }
}
