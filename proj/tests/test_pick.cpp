#include <gtest/gtest.h>

#include <random>

#include "npick/pick.hpp"
#include "oracles.hpp"

using namespace npick;

namespace {

template <class F>
Errc code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::input;
}

RationalInner neil_f() { return make_rudin(1.0, {3, 2}, MultiPoly::constant(2, 1.0)); }
RationalInner zw() { return make_rudin(1.0, {1, 1}, MultiPoly::constant(2, 1.0)); }

PickProblem schwarz() {
    PickProblem p;
    p.dim = 1;
    p.nodes = {{0.0}, {0.5}};
    p.targets = {0.0, 0.5};
    return p;
}

// Shared across tests: the 13-node configuration is the expensive fixture.
const ConstructedProblem& neil_problem() {
    static const ConstructedProblem cp = construct_problem(neil_parabola(), neil_f(), 13, 0.7);
    return cp;
}

}  // namespace

TEST(Validate, Errors) {
    auto p = schwarz();
    p.targets.push_back(0.1);
    EXPECT_EQ(code_of([&] { validate(p); }), Errc::input);
    p = schwarz();
    p.targets[1] = 1.5;
    EXPECT_EQ(code_of([&] { validate(p); }), Errc::input);
    p = schwarz();
    p.nodes[1] = {0.0};
    EXPECT_EQ(code_of([&] { validate(p); }), Errc::duplicate_node);
    p = schwarz();
    p.nodes[1] = {0.5, 0.1};
    EXPECT_EQ(code_of([&] { validate(p); }), Errc::dimension_mismatch);
}

TEST(BuildPickMatrix, Schwarz) {
    const auto pm = build_pick_matrix(schwarz());
    EXPECT_NEAR((pm.W - (Eigen::MatrixXcd(2, 2) << 1, 1, 1, 0.75).finished()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_NEAR((pm.K - (Eigen::MatrixXcd(2, 2) << 1, 1, 1, 4.0 / 3).finished()).cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_NEAR((pm.WK - Eigen::MatrixXcd::Ones(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-14);
    EXPECT_EQ(pm.WK, pm.W.cwiseProduct(pm.K));
}

TEST(BuildPickMatrix, SingleNode) {
    PickProblem p;
    p.dim = 2;
    p.nodes = {{cplx(0.3, 0.1), 0.2}};
    p.targets = {cplx(0.4, -0.3)};
    const auto pm = build_pick_matrix(p);
    const double expected = (1 - std::norm(p.targets[0])) * oracle::szego(p.nodes[0], p.nodes[0]).real();
    EXPECT_NEAR(std::abs(pm.WK(0, 0) - expected), 0.0, 1e-15);
    EXPECT_GE(pm.WK(0, 0).real(), 0.0);
}

TEST(BuildPickMatrix, NeilRankBound) {
    const auto& cp = neil_problem();
    EXPECT_EQ(cp.degree_on_curve, 12);
    EXPECT_TRUE(cp.warnings.empty());
    const auto pm = build_pick_matrix(cp.problem);
    EXPECT_LT(pm.sigma_min() / pm.sigma_max(), 1e-6);
    EXPECT_LE(pm.numerical_rank(1e-8), 12);
    EXPECT_LE((pm.WK - pm.WK.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(NullVector, RankOne) {
    PickMatrix pm;
    pm.WK = Eigen::MatrixXcd::Ones(2, 2);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pm.WK, Eigen::ComputeFullV);
    pm.svals = svd.singularValues();
    pm.right = svd.matrixV();
    const auto g = null_vector(pm);
    ASSERT_TRUE(g);
    const double r = 1 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs((*g)(0) - r), 0.0, 1e-15);
    EXPECT_NEAR(std::abs((*g)(1) + r), 0.0, 1e-15);
}

TEST(NullVector, IdentityHasNone) {
    PickMatrix pm;
    pm.svals = Eigen::VectorXd::Ones(3);
    pm.right = Eigen::MatrixXcd::Identity(3, 3);
    EXPECT_FALSE(null_vector(pm));
    EXPECT_EQ(code_of([&] { null_vector(pm, 1.5); }), Errc::input);
}

TEST(NullVector, NeilPresent) {
    const auto pm = build_pick_matrix(neil_problem().problem);
    const auto g = null_vector(pm);
    ASSERT_TRUE(g);
    EXPECT_NEAR(g->norm(), 1.0, 1e-14);
    EXPECT_LE((pm.WK * *g).norm(), 1e-8 * pm.sigma_max());
}

TEST(ExtendValue, Schwarz) {
    const auto p = schwarz();
    const auto ev = KernelEvaluator::for_problem(p);
    const auto g = null_vector(build_pick_matrix(p, ev));
    ASSERT_TRUE(g);
    const cplx z(0, 1.0 / 3);
    EXPECT_NEAR(std::abs(extend_value(p, ev, *g, Point{z}) - z), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(extend_value(p, ev, *g, Point{0.0})), 0.0, 1e-14);
}

TEST(ExtendValue, NeilOnCurve) {
    const auto& p = neil_problem().problem;
    const auto ev = KernelEvaluator::for_problem(p);
    const auto g = null_vector(build_pick_matrix(p, ev));
    ASSERT_TRUE(g);
    const cplx t(0, 0.3);
    EXPECT_NEAR(std::abs(extend_value(p, ev, *g, CurveParam{t}) - std::pow(t, 12)), 0.0, 1e-6);
}

TEST(ExtendValue, WrongQueryKind) {
    const auto p = schwarz();
    const auto ev = KernelEvaluator::for_problem(p);
    const Eigen::VectorXcd g = Eigen::VectorXcd::Ones(2);
    EXPECT_EQ(code_of([&] { extend_value(p, ev, g, CurveParam{0.1}); }), Errc::input);
    EXPECT_EQ(code_of([&] { extend_value(p, ev, g, Point{1.0}); }), Errc::domain);
}

TEST(ExtendValue, ZeroDenominator) {
    // gamma = (1, -1) and targets (0, 0): the denominator vanishes identically
    auto p = schwarz();
    p.targets = {0.0, 0.0};
    const auto ev = KernelEvaluator::for_problem(p);
    Eigen::VectorXcd g(2);
    g << 1, -1;
    EXPECT_EQ(code_of([&] { extend_value(p, ev, g, Point{0.3}); }), Errc::outside_uniqueness_domain);
}

TEST(ConstructProblem, NeilLayout) {
    const auto& p = neil_problem().problem;
    ASSERT_EQ(p.size(), 13u);
    for (int k = 0; k < 13; ++k) {
        const cplx t = std::polar(0.7, 2 * std::numbers::pi * k / 13);
        EXPECT_EQ(p.curve_kernel->params[k], t);
        EXPECT_NEAR(std::abs(p.targets[k] - std::pow(t, 12)), 0.0, 1e-15);
    }
}

TEST(ConstructProblem, DiagonalReproducesSquare) {
    const auto cp = construct_problem(diagonal_curve(2), zw(), 3, 0.4);
    EXPECT_EQ(cp.degree_on_curve, 2);
    const auto ev = KernelEvaluator::for_problem(cp.problem);
    const auto g = null_vector(build_pick_matrix(cp.problem, ev));
    ASSERT_TRUE(g);
    std::mt19937_64 rng(51);
    for (int k = 0; k < 20; ++k) {
        const cplx t = oracle::random_disc(rng, 0.8);
        EXPECT_NEAR(std::abs(extend_value(cp.problem, ev, *g, CurveParam{t}) - t * t), 0.0, 1e-6);
    }
}

TEST(ConstructProblem, Errors) {
    EXPECT_EQ(code_of([] { construct_problem(neil_parabola(), neil_f(), 12, 0.7); }), Errc::insufficient_nodes);
    EXPECT_EQ(code_of([] { construct_problem(neil_parabola(), neil_f(), 13, 1.0); }), Errc::input);
}

TEST(ConstructProblem, DegreeConditionWarning) {
    // z^3 - w^2 has ndeg (3,2), which exceeds ndeg(zw) = (1,1)
    const auto cp = construct_problem(neil_parabola(), zw(), 6, 0.7);
    ASSERT_EQ(cp.warnings.size(), 1u);
    EXPECT_NE(cp.warnings[0].find("no-perturbation-guarantee"), std::string::npos);
}

TEST(Certify, NeilConfiguration) {
    CertifyConfig cfg;
    cfg.epsilon = 0.1;
    cfg.extra_witness_points = {{0.0, 0.5}};
    const auto cert = certify(neil_problem().problem, neil_f(), cfg);
    EXPECT_TRUE(cert.all_passed());
    EXPECT_LE(cert.rank_estimate, 12);
    ASSERT_GE(cert.on_curve.size(), 100u);
    for (const auto& s : cert.on_curve) EXPECT_LE(s.deviation, 1e-6);
    ASSERT_EQ(cert.witnesses.size(), 11u);
    for (const auto& w : cert.witnesses) {
        EXPECT_TRUE(w.passed);
        EXPECT_DOUBLE_EQ(w.eps, 0.1);
        EXPECT_LE(w.interpolation_error, 1e-10);
        EXPECT_LE(w.inner_deviation, 1e-9);
    }
    EXPECT_NEAR(cert.witnesses[0].separation, 0.025 / 0.975, 1e-6);
}

TEST(Certify, DiagonalSquare) {
    const auto cp = construct_problem(diagonal_curve(2), zw(), 3, 0.4);
    const auto cert = certify(cp.problem, zw());
    EXPECT_TRUE(cert.all_passed());
    for (const auto& s : cert.on_curve) EXPECT_NEAR(std::abs(s.extended - s.t * s.t), 0.0, 1e-6);
}

TEST(Certify, FailedClauseIsRecorded) {
    // targets of a different function: the rank bound fails but no exception escapes
    auto p = neil_problem().problem;
    for (std::size_t k = 0; k < p.size(); ++k) p.targets[k] = 0.5 * p.curve_kernel->params[k];
    const auto cert = certify(p, neil_f());
    EXPECT_FALSE(cert.all_passed());
}

TEST(Certify, SearchedEpsilon) {
    const auto cert = certify(neil_problem().problem, neil_f());
    EXPECT_TRUE(cert.all_passed());
    for (const auto& w : cert.witnesses) EXPECT_LT(w.eps, 0.5);
}

// --- properties ---

TEST(Property, NecessityOfPsd) {
    std::mt19937_64 rng(52);
    MultiPoly q = MultiPoly::constant(2, 1.0);
    q.add_term({3, 0}, 0.1);
    q.add_term({0, 2}, -0.1);
    for (const auto& f : {neil_f(), zw(), make_rudin(1.0, {0, 1}, q)}) {
        const int deg = deg_on_curve(neil_parabola(), f);
        const auto cp = construct_problem(neil_parabola(), f, deg + 2, 0.6, 12, 1024);
        const auto pm = build_pick_matrix(cp.problem);
        EXPECT_GE(pm.min_eigenvalue(), -1e-8 * pm.sigma_max());
        EXPECT_LE(pm.numerical_rank(1e-8), deg);
    }
}

TEST(Property, ExtensionHomogeneity) {
    const auto& p = neil_problem().problem;
    const auto ev = KernelEvaluator::for_problem(p);
    const auto g = null_vector(build_pick_matrix(p, ev));
    ASSERT_TRUE(g);
    std::mt19937_64 rng(53);
    for (cplx c : {cplx(2.0), cplx(0, 1)}) {
        const Eigen::VectorXcd cg = c * *g;
        for (int k = 0; k < 10; ++k) {
            const cplx t = oracle::random_disc(rng, 0.8);
            const cplx a = extend_value(p, ev, *g, CurveParam{t}), b = extend_value(p, ev, cg, CurveParam{t});
            EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
}

TEST(Property, BlaschkeOracle) {
    std::mt19937_64 rng(54);
    for (int trial = 0; trial < 20; ++trial) {
        const int d = 1 + trial % 5;
        const auto b = oracle::random_blaschke(rng, d, 0.7);
        PickProblem p;
        p.dim = 1;
        for (int k = 0; k <= d; ++k) {
            const cplx z = oracle::random_disc(rng, 0.7);
            p.nodes.push_back({z});
            p.targets.push_back(b(z));
        }
        const auto ev = KernelEvaluator::for_problem(p);
        const auto pm = build_pick_matrix(p, ev);
        EXPECT_LT(pm.sigma_min() / pm.sigma_max(), 1e-10);
        const auto g = null_vector(pm);
        ASSERT_TRUE(g);
        for (int k = 0; k < 20; ++k) {
            const cplx z = oracle::random_disc(rng, 0.9);
            EXPECT_NEAR(std::abs(extend_value(p, ev, *g, Point{z}) - b(z)), 0.0, 1e-9);
        }
    }
}

TEST(Property, PerturbationAgreementOnCurve) {
    const PerturbationSpec spec{neil_f(), {*neil_parabola().defining_polys()}, {0.1}, {0.03}};
    const auto fe = perturb(spec);
    const auto curve = neil_parabola();
    for (const auto& t : ParamCurve::interior_samples(200)) {
        const Point z = curve(t);
        EXPECT_LE(std::abs(fe(z) - neil_f()(z)), 1e-10);
    }
}

TEST(Property, DistanceToCurve) {
    const auto curve = neil_parabola();
    EXPECT_NEAR(distance_to_curve(curve, curve(cplx(0.5, 0.5))), 0.0, 0.02);
    EXPECT_GT(distance_to_curve(curve, {0.0, 0.5}), 0.1);
}
