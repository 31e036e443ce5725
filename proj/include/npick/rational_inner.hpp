/*
 * rational_inner.hpp
 * ------------------
 * Rational inner functions on the polydisc in Rudin normal form
 *
 *     F(z) = tau * z^m * qtilde(z) / q(z),      q(0) = 1,
 *
 * where qtilde is the reflection of q at its own n-degree, together with
 * sampling-based regularity / innerness checks and the perturbation family
 * that keeps F fixed on a variety cut out by given polynomials.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "npick/polynomial.hpp"

namespace npick {

/// A quotient tau * num / den of polynomials. Produced by the perturbation
/// operations; a RationalInner converts to one via as_rational().
struct RationalFunction {
    cplx tau{1.0};
    MultiPoly num;
    MultiPoly den;

    std::size_t dim() const { return den.dim(); }

    cplx operator()(std::span<const cplx> z) const {
        const cplx d = den(z);
        if (std::abs(d) < 1e-14) throw Error(Errc::pole, "denominator vanishes at evaluation point");
        return tau * num(z) / d;
    }
    cplx operator()(std::initializer_list<cplx> z) const { return (*this)(std::span<const cplx>(z.begin(), z.size())); }
};

class RationalInner {
public:
    /// Builds tau * z^m * qtilde / q. q is rescaled so that q(0) = 1.
    RationalInner(cplx tau, MultiIndex m, MultiPoly q)
        : tau_(tau), m_(std::move(m)), q_(std::move(q)), qtilde_(q_.dim()) {
        if (std::abs(std::abs(tau_) - 1.0) > 1e-9)
            throw Error(Errc::invalid_unimodular, "|tau| = " + std::to_string(std::abs(tau_)) + " is not 1");
        tau_ /= std::abs(tau_);
        if (m_.size() != q_.dim()) throw Error(Errc::dimension_mismatch, "monomial exponent length differs from denominator dimension");
        const cplx q0 = q_.coeff(MultiIndex(q_.dim()));
        if (q0 == cplx{}) throw Error(Errc::normalization, "denominator vanishes at the origin");
        q_ *= 1.0 / q0;
        // pin the normalized constant term to exactly 1
        q_.add_term(MultiIndex(q_.dim()), 1.0 - q_.coeff(MultiIndex(q_.dim())));
        qtilde_ = reflect(q_);
    }

    cplx tau() const noexcept { return tau_; }
    const MultiIndex& m() const noexcept { return m_; }
    const MultiPoly& q() const noexcept { return q_; }
    const MultiPoly& qtilde() const noexcept { return qtilde_; }
    std::size_t dim() const noexcept { return q_.dim(); }

    /// ndeg(q), the degree s at which q is reflected.
    MultiIndex s() const { return npick::ndeg(q_); }

    /// z^m * qtilde (without tau).
    MultiPoly numerator() const { return MultiPoly::monomial(m_) * qtilde_; }

    /// n-degree of F, i.e. of its numerator: m + ndeg(q).
    MultiIndex ndeg() const { return m_ + s(); }

    cplx operator()(std::span<const cplx> z) const {
        const cplx d = q_(z);
        if (std::abs(d) < 1e-14) throw Error(Errc::pole, "denominator vanishes at evaluation point");
        return tau_ * monomial_value(m_, z) * qtilde_(z) / d;
    }
    cplx operator()(std::initializer_list<cplx> z) const { return (*this)(std::span<const cplx>(z.begin(), z.size())); }

private:
    cplx tau_;
    MultiIndex m_;
    MultiPoly q_;
    MultiPoly qtilde_;
};

inline RationalInner make_rudin(cplx tau, MultiIndex m, MultiPoly q) {
    return RationalInner(tau, std::move(m), std::move(q));
}

inline cplx eval_inner(const RationalInner& f, std::span<const cplx> z) { return f(z); }

inline RationalFunction as_rational(const RationalInner& f) {
    return RationalFunction{f.tau(), f.numerator(), f.q()};
}

// ---------------------------------------------------------------------------
// Regularity and innerness screens

enum class Regularity { certified, refuted, inconclusive };

inline const char* regularity_name(Regularity r) {
    switch (r) {
        case Regularity::certified: return "certified";
        case Regularity::refuted: return "refuted";
        case Regularity::inconclusive: return "inconclusive";
    }
    return "?";
}

struct RegularityResult {
    Regularity status = Regularity::inconclusive;
    double min_modulus = 0;  ///< min |q| over the grid
    double lipschitz = 0;    ///< sum |c_a| * |a|, bounds |grad q| in the sup norm on the closed polydisc
    double mesh = 0;         ///< sup-norm covering radius of the grid
    Point witness;           ///< grid point attaining min_modulus
};

/// Screens q != 0 on the closed polydisc by sampling a polar product grid.
///
/// Each coordinate ranges over radii a/(R-1), a = 0..R-1 with R = grid/4 + 1
/// (at least 3 levels), and grid equally spaced angles. Every point of the
/// closed polydisc is within `mesh` of the grid in the sup norm, so
/// min|q| > lipschitz * mesh certifies that q has no zero there. A grid value
/// below 1e-12 * ||q||_1 is reported as a refuting witness.
inline RegularityResult check_regular(const MultiPoly& q, int grid_per_dim) {
    if (grid_per_dim < 4) throw Error(Errc::input, "grid_per_dim must be at least 4");
    const std::size_t n = q.dim();
    const int radial = std::max(2, grid_per_dim / 4) + 1;
    const double dr = 1.0 / (radial - 1);

    std::vector<cplx> axis;
    axis.push_back(0.0);
    for (int a = 1; a < radial; ++a)
        for (int b = 0; b < grid_per_dim; ++b)
            axis.push_back(std::polar(a * dr, 2.0 * std::numbers::pi * b / grid_per_dim));

    RegularityResult res;
    res.mesh = dr / 2 + std::numbers::pi / grid_per_dim;
    for (const auto& [e, c] : q.terms()) res.lipschitz += std::abs(c) * e.total();
    res.min_modulus = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> idx(n, 0);
    Point z(n, axis[0]);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) z[i] = axis[idx[i]];
        const double v = std::abs(q(z));
        if (v < res.min_modulus) {
            res.min_modulus = v;
            res.witness = z;
        }
        std::size_t i = 0;
        while (i < n && ++idx[i] == axis.size()) idx[i++] = 0;
        if (i == n) break;
    }

    if (res.min_modulus <= 1e-12 * std::max(1.0, q.coeff_l1()))
        res.status = Regularity::refuted;
    else if (res.min_modulus > res.lipschitz * res.mesh)
        res.status = Regularity::certified;
    else
        res.status = Regularity::inconclusive;
    return res;
}

inline RegularityResult check_regular(const RationalInner& f, int grid_per_dim) {
    return check_regular(f.q(), grid_per_dim);
}

inline constexpr std::uint64_t kDefaultSampleSeed = 0x5eed'1234ULL;

/// Max of ||F(tau)| - 1| over pseudo-random torus points, skipping points
/// where |den| < 1e-10.
inline double check_inner_boundary(const RationalFunction& f, int samples,
                                   std::uint64_t seed = kDefaultSampleSeed) {
    if (samples < 1) throw Error(Errc::input, "samples must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    Point z(f.dim());
    double worst = 0;
    for (int k = 0; k < samples; ++k) {
        for (auto& c : z) c = std::polar(1.0, angle(rng));
        const cplx d = f.den(z);
        if (std::abs(d) < 1e-10) continue;
        worst = std::max(worst, std::abs(std::abs(f.tau * f.num(z) / d) - 1.0));
    }
    return worst;
}

inline double check_inner_boundary(const RationalInner& f, int samples,
                                   std::uint64_t seed = kDefaultSampleSeed) {
    return check_inner_boundary(as_rational(f), samples, seed);
}

// ---------------------------------------------------------------------------
// Perturbations that agree with F on a variety

struct PerturbationSpec {
    RationalInner base;
    std::vector<MultiPoly> polys;  ///< p_1..p_r cutting out the variety
    std::vector<double> eps;
    std::vector<double> delta;
};

inline constexpr int kDefaultRegularityGrid = 32;

/// Numerator  z^m qtilde + sum_i z^(m+s-r_i) (eps_i ptilde_i + delta_i p_i)
/// over denominator  q + sum_i (eps_i p_i + delta_i ptilde_i),
/// with s = ndeg(q), r_i = ndeg(p_i) and ptilde_i reflected at r_i.
/// The numerator is the reflection of the denominator at m + s, so the result
/// is inner whenever the denominator has no zero in the open polydisc.
inline RationalFunction perturb(const PerturbationSpec& spec, int grid_per_dim = kDefaultRegularityGrid) {
    const auto& base = spec.base;
    const std::size_t r = spec.polys.size();
    if (spec.eps.size() != r || spec.delta.size() != r)
        throw Error(Errc::input, "eps and delta must have one entry per polynomial");

    const MultiIndex top = base.ndeg();
    MultiPoly num = base.numerator();
    MultiPoly den = base.q();
    for (std::size_t i = 0; i < r; ++i) {
        const auto& p = spec.polys[i];
        if (p.dim() != base.dim()) throw Error(Errc::dimension_mismatch, "perturbing polynomial has wrong dimension");
        const MultiIndex ri = ndeg(p);
        if (!ri.leq(top))
            throw Error(Errc::perturbation_degree,
                        "ndeg(p_" + std::to_string(i + 1) + ") = " + ri.str() + " exceeds ndeg(F) = " + top.str());
        const MultiPoly pt = reflect(p, ri);
        const MultiPoly shift = MultiPoly::monomial(top - ri);
        num += shift * (pt * spec.eps[i] + p * spec.delta[i]);
        den += p * spec.eps[i] + pt * spec.delta[i];
    }

    const auto reg = check_regular(den, grid_per_dim);
    if (reg.status == Regularity::refuted)
        throw Error(Errc::not_inner, "perturbed denominator vanishes on the closed polydisc (min |den| = " +
                                         std::to_string(reg.min_modulus) + ")");
    return RationalFunction{base.tau(), std::move(num), std::move(den)};
}

/// (qtilde + eps ptilde) / (q + eps p) for F = tau qtilde / q and ndeg(p) = ndeg(F).
inline RationalFunction perturb_simple(const RationalInner& f, const MultiPoly& p, double eps) {
    if (f.m() != MultiIndex(f.dim())) throw Error(Errc::perturbation_degree, "simple perturbation requires m = 0");
    if (p.dim() != f.dim()) throw Error(Errc::dimension_mismatch, "perturbing polynomial has wrong dimension");
    const MultiIndex s = f.s();
    if (ndeg(p) != s)
        throw Error(Errc::perturbation_degree, "ndeg(p) = " + ndeg(p).str() + " differs from ndeg(F) = " + s.str());
    return RationalFunction{f.tau(), f.qtilde() + reflect(p, s) * eps, f.q() + p * eps};
}

struct EpsilonChoice {
    double eps = 0;
    RationalFunction f;
    RegularityResult regularity;
    int tried = 0;
};

/// Perturbs along polys[which] only, trying eps = 2^-1, 2^-2, ..., 2^-20 and
/// returning the first whose denominator is certified regular.
inline std::optional<EpsilonChoice> search_epsilon(const RationalInner& base, const std::vector<MultiPoly>& polys,
                                                   std::size_t which, int grid_per_dim = kDefaultRegularityGrid) {
    if (which >= polys.size()) throw Error(Errc::input, "perturbation index out of range");
    PerturbationSpec spec{base, polys, std::vector<double>(polys.size(), 0.0), std::vector<double>(polys.size(), 0.0)};
    double eps = 0.5;
    for (int k = 1; k <= 20; ++k, eps *= 0.5) {
        spec.eps[which] = eps;
        try {
            auto f = perturb(spec, grid_per_dim);
            auto reg = check_regular(f.den, grid_per_dim);
            if (reg.status == Regularity::certified) return EpsilonChoice{eps, std::move(f), reg, k};
        } catch (const Error& e) {
            if (e.code() != Errc::not_inner) throw;
        }
    }
    return std::nullopt;
}

}  // namespace npick
