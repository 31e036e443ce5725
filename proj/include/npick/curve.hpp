/*
 * curve.hpp
 * ---------
 * Rationally parameterized inner curves t -> (m_1(t), ..., m_n(t)) where every
 * coordinate is a finite Blaschke product. The parameter disc is the
 * desingularization of the image curve; injectivity on the disc is required.
 *
 * Also provides pullbacks of rational inner functions along a curve and the
 * two routes to the degree of F on the curve: the weighted-rank formula
 * sum_i rank_i * ndeg(F)_i and an argument-principle winding count.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "npick/detail/roots.hpp"
#include "npick/polynomial.hpp"
#include "npick/rational_inner.hpp"

namespace npick {

struct BlaschkeFactor {
    cplx zero;

    explicit BlaschkeFactor(cplx a) : zero(a) {
        if (!(std::abs(a) < 1.0 - 1e-12)) throw Error(Errc::input, "Blaschke zero must lie in the open unit disc");
    }

    cplx operator()(cplx t) const { return (t - zero) / (1.0 - std::conj(zero) * t); }
};

/// tau * t^power * prod_j (t - a_j) / (1 - conj(a_j) t)
class OneVarInner {
public:
    OneVarInner(cplx tau, int power, std::vector<BlaschkeFactor> factors = {})
        : tau_(tau), power_(power), factors_(std::move(factors)) {
        if (std::abs(std::abs(tau_) - 1.0) > 1e-9) throw Error(Errc::invalid_unimodular, "coordinate tau is not unimodular");
        tau_ /= std::abs(tau_);
        if (power_ < 0) throw Error(Errc::input, "coordinate power must be non-negative");
    }

    static OneVarInner identity() { return OneVarInner(1.0, 1); }
    static OneVarInner power_map(int k) { return OneVarInner(1.0, k); }

    cplx tau() const noexcept { return tau_; }
    int power() const noexcept { return power_; }
    const std::vector<BlaschkeFactor>& factors() const noexcept { return factors_; }

    int blaschke_degree() const noexcept { return power_ + static_cast<int>(factors_.size()); }

    cplx operator()(cplx t) const {
        cplx v = tau_ * std::pow(t, power_);
        for (const auto& b : factors_) v *= b(t);
        return v;
    }

    /// Ascending coefficients of tau t^k prod(t - a_j) - c prod(1 - conj(a_j) t),
    /// whose roots in the disc are the solutions of m(t) = c there.
    std::vector<cplx> level_polynomial(cplx c) const {
        std::vector<cplx> num(power_ + 1, 0.0), den{1.0};
        num[power_] = tau_;
        for (const auto& b : factors_) {
            num = detail::poly_mul(num, {-b.zero, 1.0});
            den = detail::poly_mul(den, {1.0, -std::conj(b.zero)});
        }
        for (std::size_t i = 0; i < den.size(); ++i) num[i] -= c * den[i];
        return num;
    }

    /// Solutions of m(t) = c with |t| < 1.
    std::vector<cplx> preimages(cplx c) const {
        std::vector<cplx> out;
        for (auto r : detail::polynomial_roots(level_polynomial(c)))
            if (std::abs(r) < 1.0) out.push_back(r);
        return out;
    }

private:
    cplx tau_;
    int power_;
    std::vector<BlaschkeFactor> factors_;
};

class ParamCurve {
public:
    explicit ParamCurve(std::vector<OneVarInner> coords,
                        std::optional<std::vector<MultiPoly>> defining_polys = std::nullopt)
        : coords_(std::move(coords)), defining_(std::move(defining_polys)) {
        if (coords_.empty()) throw Error(Errc::input, "curve needs at least one coordinate");
        if (defining_)
            for (const auto& p : *defining_)
                if (p.dim() != coords_.size()) throw Error(Errc::dimension_mismatch, "defining polynomial has wrong dimension");
        validate();
    }

    std::size_t dim() const noexcept { return coords_.size(); }
    const std::vector<OneVarInner>& coords() const noexcept { return coords_; }
    const std::optional<std::vector<MultiPoly>>& defining_polys() const noexcept { return defining_; }

    /// gamma(t) for |t| <= 1.
    Point operator()(cplx t) const {
        if (std::abs(t) > 1.0 + 1e-12) throw Error(Errc::domain, "curve parameter outside the closed unit disc");
        return at(t);
    }

    /// Largest ||m_i(e^{i theta})| - 1| over `samples` boundary parameters.
    double boundary_deviation(int samples = 500) const {
        double worst = 0;
        for (int k = 0; k < samples; ++k) {
            const cplx t = std::polar(1.0, 2.0 * std::numbers::pi * k / samples);
            for (const auto& m : coords_) worst = std::max(worst, std::abs(std::abs(m(t)) - 1.0));
        }
        return worst;
    }

    /// Largest |p_i(gamma(t))| over interior sample parameters (0 without defining polynomials).
    double membership_deviation(int samples = 200) const {
        if (!defining_) return 0;
        double worst = 0;
        for (const auto& t : interior_samples(samples)) {
            const Point z = at(t);
            for (const auto& p : *defining_) worst = std::max(worst, std::abs(p(z)));
        }
        return worst;
    }

    /// Looks for s != t in the disc with gamma(s) = gamma(t) among sampled t,
    /// by solving m_i(s) = m_i(t) for the lowest-degree non-constant coordinate.
    std::optional<std::pair<cplx, cplx>> find_collision(int samples = 200) const {
        const OneVarInner* lead = nullptr;
        for (const auto& m : coords_)
            if (m.blaschke_degree() > 0 && (!lead || m.blaschke_degree() < lead->blaschke_degree())) lead = &m;
        if (!lead) return std::pair<cplx, cplx>{0.0, 0.5};
        for (const auto& t : interior_samples(samples)) {
            const Point zt = at(t);
            for (const auto& s : lead->preimages((*lead)(t))) {
                if (std::abs(s - t) < 1e-6) continue;
                const Point zs = at(s);
                double dist = 0;
                for (std::size_t i = 0; i < zt.size(); ++i) dist = std::max(dist, std::abs(zs[i] - zt[i]));
                if (dist < 1e-8) return std::pair<cplx, cplx>{t, s};
            }
        }
        return std::nullopt;
    }

    /// Deterministic spiral of parameters filling the disc of radius 0.95.
    static std::vector<cplx> interior_samples(int samples) {
        std::vector<cplx> ts;
        ts.reserve(samples);
        const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < samples; ++k)
            ts.push_back(std::polar(0.95 * std::sqrt((k + 0.5) / samples), golden * k + 0.1));
        return ts;
    }

private:
    Point at(cplx t) const {
        Point z;
        z.reserve(coords_.size());
        for (const auto& m : coords_) z.push_back(m(t));
        return z;
    }

    void validate() const {
        if (const double dev = boundary_deviation(); dev > 1e-12)
            throw Error(Errc::input, "curve boundary leaves the torus (deviation " + std::to_string(dev) + ")");
        if (const double dev = membership_deviation(100); dev > 1e-10)
            throw Error(Errc::input, "curve does not lie on its defining polynomials (max |p| = " + std::to_string(dev) + ")");
        if (auto hit = find_collision())
            throw Error(Errc::input, "curve parameterization is not injective on the disc");
    }

    std::vector<OneVarInner> coords_;
    std::optional<std::vector<MultiPoly>> defining_;
};

/// (t^2, t^3) on z^3 = w^2.
inline ParamCurve neil_parabola() {
    MultiPoly p(2);
    p.add_term({3, 0}, 1.0);
    p.add_term({0, 2}, -1.0);
    return ParamCurve({OneVarInner::power_map(2), OneVarInner::power_map(3)}, std::vector<MultiPoly>{p});
}

/// (t, ..., t) on z_1 = z_2 = ... = z_n.
inline ParamCurve diagonal_curve(std::size_t n) {
    std::vector<OneVarInner> coords(n, OneVarInner::identity());
    std::vector<MultiPoly> polys;
    for (std::size_t i = 1; i < n; ++i)
        polys.push_back(MultiPoly::variable(n, 0) - MultiPoly::variable(n, i));
    return ParamCurve(std::move(coords), std::move(polys));
}

inline Point eval_curve(const ParamCurve& c, cplx t) { return c(t); }

/// Valence of each coordinate on the disc.
inline MultiIndex rank(const ParamCurve& c) {
    MultiIndex r(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) r[i] = c.coords()[i].blaschke_degree();
    return r;
}

/// t -> F(gamma(t)).
class Pullback {
public:
    Pullback(ParamCurve curve, RationalInner f) : curve_(std::move(curve)), f_(std::move(f)) {
        if (f_.dim() != curve_.dim()) throw Error(Errc::dimension_mismatch, "function and curve dimensions differ");
        constexpr int screen = 512;
        for (int k = 0; k < screen; ++k) {
            const Point z = curve_(std::polar(1.0, 2.0 * std::numbers::pi * k / screen));
            if (std::abs(f_.q()(z)) < 1e-10)
                throw Error(Errc::pullback, "denominator of F vanishes on the boundary of the curve");
        }
    }

    cplx operator()(cplx t) const { return f_(curve_(t)); }

    const ParamCurve& curve() const noexcept { return curve_; }
    const RationalInner& function() const noexcept { return f_; }

private:
    ParamCurve curve_;
    RationalInner f_;
};

inline Pullback pullback(const ParamCurve& c, const RationalInner& f) { return Pullback(c, f); }

/// Winding number of f(e^{i theta}) - c around 0 on a uniform grid, i.e. the
/// number of solutions of f = c in the disc for f analytic there. Tries c = 0
/// and then up to five random |c| < 1/2 when f - c comes too close to 0 on the
/// grid. A phase step above pi/2 between neighbouring samples is reported as a
/// resolution error.
template <class Fn>
int winding_degree(const Fn& f, int samples, std::uint64_t seed = kDefaultSampleSeed) {
    if (samples < 256) throw Error(Errc::input, "winding_degree needs at least 256 samples");
    std::vector<cplx> vals(samples);
    for (int k = 0; k < samples; ++k) vals[k] = f(std::polar(1.0, 2.0 * std::numbers::pi * k / samples));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    cplx c = 0.0;
    for (int attempt = 0; attempt <= 5; ++attempt) {
        if (attempt > 0) c = std::polar(0.5 * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
        double closest = std::numeric_limits<double>::infinity();
        for (auto v : vals) closest = std::min(closest, std::abs(v - c));
        if (closest < 1e-9) continue;

        double total = 0, max_step = 0;
        for (int k = 0; k < samples; ++k) {
            const double step = std::arg((vals[(k + 1) % samples] - c) / (vals[k] - c));
            total += step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step > std::numbers::pi / 2)
            throw Error(Errc::resolution, "phase step " + std::to_string(max_step) + " too large for " +
                                              std::to_string(samples) + " samples");
        const double w = total / (2.0 * std::numbers::pi);
        if (std::abs(w - std::round(w)) > 0.1) throw Error(Errc::resolution, "winding estimate not near an integer");
        return static_cast<int>(std::lround(w));
    }
    throw Error(Errc::resolution, "no admissible base value found for the winding count");
}

/// sum_i rank_i * ndeg(F)_i.
inline int degree_formula(const ParamCurve& c, const RationalInner& f) {
    if (f.dim() != c.dim()) throw Error(Errc::dimension_mismatch, "function and curve dimensions differ");
    const MultiIndex r = rank(c), d = f.ndeg();
    int s = 0;
    for (std::size_t i = 0; i < c.dim(); ++i) s += r[i] * d[i];
    return s;
}

struct DegreeReport {
    int formula = 0;
    int winding = 0;
    int samples = 0;
};

/// Both degree routes. The winding grid starts at max(1024, 32 * formula)
/// samples and doubles on resolution failures.
inline DegreeReport degree_report(const ParamCurve& c, const RationalInner& f) {
    DegreeReport rep;
    rep.formula = degree_formula(c, f);
    const Pullback pb(c, f);
    for (int samples = std::max(1024, 32 * rep.formula); samples <= (1 << 18); samples *= 2) {
        try {
            rep.winding = winding_degree(pb, samples);
            rep.samples = samples;
            return rep;
        } catch (const Error& e) {
            if (e.code() != Errc::resolution || samples * 2 > (1 << 18)) throw;
        }
    }
    return rep;
}

/// Degree of F on the curve; the formula must agree with the winding count.
inline int deg_on_curve(const ParamCurve& c, const RationalInner& f) {
    const auto rep = degree_report(c, f);
    if (rep.formula != rep.winding)
        throw Error(Errc::degree_consistency, "degree formula gives " + std::to_string(rep.formula) +
                                                  " but winding count gives " + std::to_string(rep.winding));
    return rep.formula;
}

}  // namespace npick
