/*
 * pick.hpp
 * --------
 * Pick matrices, null vectors and the forced-value formula for singular
 * problems, plus the constructor that places nodes on an inner curve and the
 * two-sided uniqueness certificate for the resulting problem.
 *
 * For a singular Pick matrix W.K with null vector g, every solution takes at a
 * new point x the value
 *
 *     w(x) = sum_j g_j k_{lambda_j}(x)  /  sum_j conj(w_j) g_j k_{lambda_j}(x)
 *
 * wherever the denominator does not vanish.
 */
#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "npick/curve.hpp"
#include "npick/kernel_space.hpp"
#include "npick/rational_inner.hpp"

namespace npick {

/// Kernel of a problem whose nodes are gamma(params[i]).
struct CurveKernelSpec {
    ParamCurve curve;
    std::vector<cplx> params;
    int degree = 16;
    int quad = 2048;
};

struct PickProblem {
    std::size_t dim = 1;
    std::vector<Point> nodes;
    std::vector<cplx> targets;
    std::optional<CurveKernelSpec> curve_kernel;  ///< empty: ambient Szego kernel

    std::size_t size() const noexcept { return nodes.size(); }
};

inline void validate(const PickProblem& p) {
    if (p.nodes.empty()) throw Error(Errc::input, "problem has no nodes");
    if (p.nodes.size() != p.targets.size()) throw Error(Errc::input, "node and target counts differ");
    for (const auto& z : p.nodes) {
        if (z.size() != p.dim) throw Error(Errc::dimension_mismatch, "node has wrong dimension");
        require_in_polydisc(z);
    }
    for (auto w : p.targets)
        if (std::abs(w) > 1.0 + 1e-12) throw Error(Errc::input, "target outside the closed unit disc");
    require_distinct(p.nodes);
    if (p.curve_kernel) {
        const auto& ck = *p.curve_kernel;
        if (ck.curve.dim() != p.dim) throw Error(Errc::dimension_mismatch, "curve dimension differs from problem dimension");
        if (ck.params.size() != p.nodes.size()) throw Error(Errc::input, "one curve parameter per node is required");
        for (std::size_t i = 0; i < p.nodes.size(); ++i) {
            const Point g = ck.curve(ck.params[i]);
            for (std::size_t l = 0; l < p.dim; ++l)
                if (std::abs(g[l] - p.nodes[i][l]) > 1e-10)
                    throw Error(Errc::input, "node " + std::to_string(i) + " is not gamma of its parameter");
        }
    }
}

/// Location of a new point for the extension formula on a curve kernel.
struct CurveParam {
    cplx t;
};

/// Evaluates k_{lambda_j} at nodes and new points for either kernel source.
class KernelEvaluator {
public:
    /// For curve problems, `space` may supply a prebuilt (or restored) kernel
    /// space; otherwise one is built from the problem's kernel spec.
    static KernelEvaluator for_problem(const PickProblem& p, std::shared_ptr<const KernelSpace> space = nullptr) {
        validate(p);
        KernelEvaluator ev;
        ev.nodes_ = p.nodes;
        if (p.curve_kernel) {
            const auto& ck = *p.curve_kernel;
            if (!space) space = std::make_shared<const KernelSpace>(ck.curve, ck.degree, ck.quad);
            if (space->max_total_degree() != ck.degree || space->quad_points() != ck.quad)
                throw Error(Errc::input, "kernel space does not match the problem's degree/quad settings");
            ev.space_ = std::move(space);
            ev.family_ = kernel_family(*ev.space_, ck.params);
        }
        return ev;
    }

    bool on_curve() const noexcept { return static_cast<bool>(space_); }
    const KernelSpace* space() const noexcept { return space_.get(); }
    const KernelFamily& family() const noexcept { return family_; }

    Eigen::MatrixXcd node_gram() const {
        return space_ ? kernel_gram(*space_, family_) : ambient_szego(nodes_);
    }

    /// k_{lambda_j}(x) for all nodes (ambient kernel only).
    Eigen::VectorXcd cross(const Point& x) const {
        if (space_) throw Error(Errc::input, "curve-kernel problems take a curve parameter, not a point");
        require_in_polydisc(x);
        Eigen::VectorXcd k(nodes_.size());
        for (std::size_t j = 0; j < nodes_.size(); ++j) k(j) = szego_kernel(x, nodes_[j]);
        return k;
    }

    /// k_{lambda_j}(gamma(t)) for all nodes (curve kernel only).
    Eigen::VectorXcd cross(CurveParam p) const {
        if (!space_) throw Error(Errc::input, "ambient-kernel problems take a point, not a curve parameter");
        return kernel_cross(*space_, family_, p.t);
    }

private:
    std::vector<Point> nodes_;
    std::shared_ptr<const KernelSpace> space_;
    KernelFamily family_;
};

struct PickMatrix {
    Eigen::MatrixXcd W;
    Eigen::MatrixXcd K;
    Eigen::MatrixXcd WK;
    Eigen::VectorXd svals;  ///< descending
    Eigen::MatrixXcd right;  ///< right singular vectors, column i for svals(i)

    double sigma_max() const { return svals.size() ? svals(0) : 0.0; }
    double sigma_min() const { return svals.size() ? svals(svals.size() - 1) : 0.0; }

    /// Count of singular values above rel_tol * sigma_max.
    int numerical_rank(double rel_tol) const {
        int r = 0;
        for (Eigen::Index i = 0; i < svals.size(); ++i)
            if (svals(i) > rel_tol * sigma_max()) ++r;
        return r;
    }

    /// Smallest eigenvalue of the Hermitian part of WK.
    double min_eigenvalue() const {
        const Eigen::MatrixXcd h = 0.5 * (WK + WK.adjoint());
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
    }
};

inline PickMatrix build_pick_matrix(const PickProblem& p, const KernelEvaluator& ev) {
    const auto n = static_cast<Eigen::Index>(p.size());
    PickMatrix pm;
    pm.W.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) pm.W(i, j) = 1.0 - p.targets[i] * std::conj(p.targets[j]);
    pm.K = ev.node_gram();
    pm.WK = pm.W.cwiseProduct(pm.K);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pm.WK, Eigen::ComputeFullV);
    pm.svals = svd.singularValues();
    pm.right = svd.matrixV();
    return pm;
}

inline PickMatrix build_pick_matrix(const PickProblem& p) {
    return build_pick_matrix(p, KernelEvaluator::for_problem(p));
}

inline constexpr double kDefaultNullTol = 1e-8;

/// Unit right singular vector of the smallest singular value when
/// sigma_min / sigma_max < rel_tol, phase-normalized so that its first
/// non-negligible entry is positive real.
inline std::optional<Eigen::VectorXcd> null_vector(const PickMatrix& pm, double rel_tol = kDefaultNullTol) {
    if (!(rel_tol > 0 && rel_tol < 1)) throw Error(Errc::input, "null-vector tolerance must lie in (0,1)");
    if (pm.svals.size() == 0) return std::nullopt;
    if (!(pm.sigma_min() < rel_tol * pm.sigma_max())) return std::nullopt;
    Eigen::VectorXcd g = pm.right.col(pm.right.cols() - 1);
    g.normalize();
    const double big = g.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        if (std::abs(g(i)) > 1e-8 * big) {
            g *= std::conj(g(i)) / std::abs(g(i));
            g(i) = std::abs(g(i));
            break;
        }
    }
    return g;
}

inline constexpr double kDefaultDenominatorTol = 1e-9;

struct ExtensionParts {
    cplx numerator;    ///< G(x) = sum_j g_j k_{lambda_j}(x)
    cplx denominator;  ///< sum_j conj(w_j) g_j k_{lambda_j}(x)
    double scale;      ///< sum_j |g_j k_{lambda_j}(x)|
};

inline ExtensionParts extension_parts(const PickProblem& p, const Eigen::VectorXcd& gamma, const Eigen::VectorXcd& cross) {
    if (gamma.size() != static_cast<Eigen::Index>(p.size())) throw Error(Errc::dimension_mismatch, "null vector has wrong length");
    ExtensionParts parts{0.0, 0.0, 0.0};
    for (Eigen::Index j = 0; j < gamma.size(); ++j) {
        const cplx kg = cross(j) * gamma(j);
        parts.numerator += kg;
        parts.denominator += std::conj(p.targets[j]) * kg;
        parts.scale += std::abs(kg);
    }
    return parts;
}

inline cplx extension_ratio(const ExtensionParts& parts, double denom_tol) {
    if (!(std::abs(parts.denominator) > denom_tol * parts.scale))
        throw Error(Errc::outside_uniqueness_domain, "extension denominator " + std::to_string(std::abs(parts.denominator)) +
                                                         " is below tolerance");
    return parts.numerator / parts.denominator;
}

/// Value forced on every solution at gamma(t).
inline cplx extend_value(const PickProblem& p, const KernelEvaluator& ev, const Eigen::VectorXcd& gamma, CurveParam at,
                         double denom_tol = kDefaultDenominatorTol) {
    return extension_ratio(extension_parts(p, gamma, ev.cross(at)), denom_tol);
}

/// Value forced on every solution at a point of the polydisc (ambient kernel).
inline cplx extend_value(const PickProblem& p, const KernelEvaluator& ev, const Eigen::VectorXcd& gamma, const Point& at,
                         double denom_tol = kDefaultDenominatorTol) {
    return extension_ratio(extension_parts(p, gamma, ev.cross(at)), denom_tol);
}

// ---------------------------------------------------------------------------
// Construction on a curve

struct ConstructedProblem {
    PickProblem problem;
    int degree_on_curve = 0;
    std::vector<std::string> warnings;
};

/// Nodes gamma(radius e^{2 pi i k / N}), k = 0..N-1, with targets F(node).
inline ConstructedProblem construct_problem(const ParamCurve& curve, const RationalInner& f, int n_nodes, double radius,
                                            int degree = 16, int quad = 2048) {
    if (!(radius > 0 && radius < 1)) throw Error(Errc::input, "radius must lie in (0,1)");
    ConstructedProblem out;
    out.degree_on_curve = deg_on_curve(curve, f);
    if (n_nodes <= out.degree_on_curve)
        throw Error(Errc::insufficient_nodes, "need more than deg_V(F) = " + std::to_string(out.degree_on_curve) +
                                                  " nodes, got " + std::to_string(n_nodes));
    if (const auto& polys = curve.defining_polys(); !polys || polys->empty()) {
        out.warnings.push_back("no-perturbation-guarantee: curve has no defining polynomials");
    } else {
        for (std::size_t i = 0; i < polys->size(); ++i)
            if (!ndeg((*polys)[i]).leq(f.ndeg()))
                out.warnings.push_back("no-perturbation-guarantee: ndeg(p_" + std::to_string(i + 1) + ") = " +
                                       ndeg((*polys)[i]).str() + " exceeds ndeg(F) = " + f.ndeg().str());
    }

    auto& p = out.problem;
    p.dim = curve.dim();
    CurveKernelSpec spec{curve, {}, degree, quad};
    for (int k = 0; k < n_nodes; ++k) {
        const cplx t = std::polar(radius, 2.0 * std::numbers::pi * k / n_nodes);
        spec.params.push_back(t);
        p.nodes.push_back(curve(t));
        p.targets.push_back(f(p.nodes.back()));
    }
    p.curve_kernel = std::move(spec);
    validate(p);
    return out;
}

// ---------------------------------------------------------------------------
// Certificates

struct CertifyConfig {
    double rank_tol = 1e-8;
    double null_tol = kDefaultNullTol;
    double psd_tol = 1e-8;
    double extension_tol = 1e-6;
    double sample_denominator_tol = 1e-6;
    double witness_tol = 1e-6;
    double interpolation_tol = 1e-10;
    double inner_tol = 1e-9;
    int inner_samples = 1000;
    int on_curve_samples = 100;
    double sample_radius = 0.8;
    int off_curve_witnesses = 10;
    double curve_clearance = 0.05;
    int regularity_grid = kDefaultRegularityGrid;
    std::optional<double> epsilon;          ///< fixed perturbation size; searched when empty
    std::vector<Point> extra_witness_points;  ///< checked before the random witnesses
    std::uint64_t seed = 0;
};

struct Clause {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct OnCurveSample {
    cplx t;
    cplx extended;
    cplx reference;
    double deviation;
};

struct OffCurveWitness {
    Point z;
    std::size_t poly_index = 0;
    double eps = 0;
    double separation = 0;
    double interpolation_error = 0;
    double inner_deviation = 0;
    bool passed = false;
};

struct UniquenessCertificate {
    PickProblem problem;
    RationalInner function;
    CertifyConfig config;
    DegreeReport degree;
    Eigen::VectorXd svals;
    int rank_estimate = 0;
    double min_eigenvalue = 0;
    std::optional<Eigen::VectorXcd> gamma;
    double null_residual = 0;
    std::vector<OnCurveSample> on_curve;
    std::vector<OffCurveWitness> witnesses;
    std::vector<Clause> clauses;
    std::vector<std::string> warnings;

    bool all_passed() const {
        for (const auto& c : clauses)
            if (!c.passed) return false;
        return true;
    }
};

/// Euclidean distance from z to gamma(closed disc), minimized over a polar
/// parameter grid.
inline double distance_to_curve(const ParamCurve& c, const Point& z, int radial = 40, int angular = 160) {
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= radial; ++a) {
        const double r = static_cast<double>(a) / radial;
        for (int b = 0; b < (a == 0 ? 1 : angular); ++b) {
            const Point g = c(std::polar(r, 2.0 * std::numbers::pi * b / angular));
            double d2 = 0;
            for (std::size_t l = 0; l < z.size(); ++l) d2 += std::norm(g[l] - z[l]);
            best = std::min(best, std::sqrt(d2));
        }
    }
    return best;
}

namespace detail {

inline Point random_polydisc_point(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Point z(n);
    for (auto& c : z) {
        const double r = std::sqrt(unit(rng));
        c = std::polar(r, 2.0 * std::numbers::pi * unit(rng));
    }
    return z;
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace detail

/// Samples both inclusions between the set of uniqueness and the curve:
/// forced values along the curve through the extension formula, and
/// off-curve points where a perturbation of F solving the same data differs
/// from F. Sub-check failures are recorded as failed clauses.
inline UniquenessCertificate certify(const PickProblem& problem, const RationalInner& f, const CertifyConfig& cfg = {},
                                     std::shared_ptr<const KernelSpace> space = nullptr) {
    if (!problem.curve_kernel) throw Error(Errc::input, "certify requires a curve-kernel problem");
    const ParamCurve& curve = problem.curve_kernel->curve;
    if (f.dim() != problem.dim) throw Error(Errc::dimension_mismatch, "function and problem dimensions differ");

    UniquenessCertificate cert{problem, f, cfg, {}, {}, 0, 0, std::nullopt, 0, {}, {}, {}, {}};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // degree of F on the curve, both routes
    cert.degree = degree_report(curve, f);
    const int deg = cert.degree.formula;
    cert.clauses.push_back({"degree_formula", cert.degree.formula == cert.degree.winding,
                            "formula " + std::to_string(cert.degree.formula) + ", winding " +
                                std::to_string(cert.degree.winding)});
    if (static_cast<int>(problem.size()) <= deg)
        cert.warnings.push_back("problem has " + std::to_string(problem.size()) + " nodes, not more than deg_V(F) = " +
                                std::to_string(deg));

    // Pick matrix, rank and null vector
    const auto ev = KernelEvaluator::for_problem(problem, std::move(space));
    if (ev.space())
        for (const auto& w : ev.space()->warnings()) cert.warnings.push_back(w);
    const auto pm = build_pick_matrix(problem, ev);
    cert.svals = pm.svals;
    cert.rank_estimate = pm.numerical_rank(cfg.rank_tol);
    cert.min_eigenvalue = pm.min_eigenvalue();
    cert.clauses.push_back({"psd", cert.min_eigenvalue >= -cfg.psd_tol * pm.sigma_max(),
                            "min eigenvalue " + detail::fmt(cert.min_eigenvalue) + ", sigma_max " +
                                detail::fmt(pm.sigma_max())});
    cert.clauses.push_back({"rank_bound", cert.rank_estimate <= deg,
                            "numerical rank " + std::to_string(cert.rank_estimate) + " vs deg_V(F) " +
                                std::to_string(deg)});

    cert.gamma = null_vector(pm, cfg.null_tol);
    if (cert.gamma) {
        cert.null_residual = (pm.WK * *cert.gamma).norm();
        cert.clauses.push_back({"null_vector", cert.null_residual <= cfg.null_tol * pm.sigma_max(),
                                "|WK g| = " + detail::fmt(cert.null_residual)});
    } else {
        cert.clauses.push_back({"null_vector", false,
                                "sigma_min / sigma_max = " + detail::fmt(pm.sigma_min() / pm.sigma_max())});
    }

    // forced values along the curve
    if (cert.gamma) {
        int skipped = 0;
        const int max_attempts = 20 * cfg.on_curve_samples;
        for (int attempt = 0; attempt < max_attempts && static_cast<int>(cert.on_curve.size()) < cfg.on_curve_samples;
             ++attempt) {
            const cplx t = std::polar(cfg.sample_radius * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
            try {
                const cplx ext = extend_value(problem, ev, *cert.gamma, CurveParam{t}, cfg.sample_denominator_tol);
                const cplx ref = f(curve(t));
                cert.on_curve.push_back({t, ext, ref, std::abs(ext - ref)});
            } catch (const Error& e) {
                if (e.code() != Errc::outside_uniqueness_domain) throw;
                ++skipped;
            }
        }
        double worst = 0;
        for (const auto& s : cert.on_curve) worst = std::max(worst, s.deviation);
        const bool enough = static_cast<int>(cert.on_curve.size()) >= cfg.on_curve_samples;
        cert.clauses.push_back({"on_curve_extension", enough && worst <= cfg.extension_tol,
                                std::to_string(cert.on_curve.size()) + " samples, max deviation " + detail::fmt(worst) +
                                    ", " + std::to_string(skipped) + " near the denominator zero set skipped"});
    } else {
        cert.clauses.push_back({"on_curve_extension", false, "no null vector"});
    }

    // perturbation witnesses off the curve
    const auto& polys = curve.defining_polys();
    if (!polys || polys->empty()) {
        cert.clauses.push_back({"off_curve_separation", false, "curve has no defining polynomials"});
        return cert;
    }
    for (const auto& p : *polys)
        if (!ndeg(p).leq(f.ndeg()))
            cert.warnings.push_back("no-perturbation-guarantee: ndeg " + ndeg(p).str() + " exceeds ndeg(F) " +
                                    f.ndeg().str());

    struct Perturbed {
        std::optional<RationalFunction> fn;
        double eps = 0;
        double inner_deviation = 0;
        std::string failure;
    };
    std::map<std::size_t, Perturbed> cache;
    auto perturbed = [&](std::size_t h) -> const Perturbed& {
        if (auto it = cache.find(h); it != cache.end()) return it->second;
        Perturbed out;
        try {
            if (cfg.epsilon) {
                PerturbationSpec spec{f, *polys, std::vector<double>(polys->size(), 0.0),
                                      std::vector<double>(polys->size(), 0.0)};
                spec.eps[h] = *cfg.epsilon;
                auto fn = perturb(spec, cfg.regularity_grid);
                const auto reg = check_regular(fn.den, cfg.regularity_grid);
                if (reg.status == Regularity::certified) {
                    out.fn = std::move(fn);
                    out.eps = *cfg.epsilon;
                } else {
                    out.failure = std::string("perturbed denominator ") + regularity_name(reg.status);
                }
            } else if (auto choice = search_epsilon(f, *polys, h, cfg.regularity_grid)) {
                out.fn = std::move(choice->f);
                out.eps = choice->eps;
            } else {
                out.failure = "no epsilon in the search sequence gives a regular denominator";
            }
        } catch (const Error& e) {
            out.failure = e.what();
        }
        if (out.fn) out.inner_deviation = check_inner_boundary(*out.fn, cfg.inner_samples, cfg.seed + 17);
        return cache.emplace(h, std::move(out)).first->second;
    };

    std::string failure;
    auto try_witness = [&](const Point& z) -> bool {
        std::optional<std::size_t> h;
        for (std::size_t i = 0; i < polys->size(); ++i)
            if (std::abs((*polys)[i](z)) > 1e-8) {
                h = i;
                break;
            }
        if (!h) return false;
        const auto& pert = perturbed(*h);
        if (!pert.fn) {
            failure = pert.failure;
            return false;
        }
        OffCurveWitness w;
        w.z = z;
        w.poly_index = *h;
        w.eps = pert.eps;
        w.inner_deviation = pert.inner_deviation;
        w.separation = std::abs((*pert.fn)(z) - f(z));
        for (std::size_t i = 0; i < problem.size(); ++i)
            w.interpolation_error = std::max(w.interpolation_error, std::abs((*pert.fn)(problem.nodes[i]) - problem.targets[i]));
        w.passed = w.separation > cfg.witness_tol && w.interpolation_error <= cfg.interpolation_tol &&
                   w.inner_deviation <= cfg.inner_tol;
        cert.witnesses.push_back(std::move(w));
        return true;
    };

    for (const auto& z : cfg.extra_witness_points) {
        if (z.size() != problem.dim) throw Error(Errc::dimension_mismatch, "witness point has wrong dimension");
        require_in_polydisc(z);
        try_witness(z);
    }
    int random_found = 0;
    for (int attempt = 0; attempt < 1000 && random_found < cfg.off_curve_witnesses; ++attempt) {
        const Point z = detail::random_polydisc_point(rng, problem.dim);
        if (distance_to_curve(curve, z) < cfg.curve_clearance) continue;
        if (try_witness(z)) ++random_found;
        else if (!failure.empty()) break;
    }

    int passed = 0;
    double min_sep = std::numeric_limits<double>::infinity(), max_interp = 0;
    for (const auto& w : cert.witnesses) {
        passed += w.passed;
        min_sep = std::min(min_sep, w.separation);
        max_interp = std::max(max_interp, w.interpolation_error);
    }
    const int wanted = cfg.off_curve_witnesses + static_cast<int>(cfg.extra_witness_points.size());
    std::string summary = std::to_string(passed) + "/" + std::to_string(cert.witnesses.size()) +
                         " witnesses separate, min separation " + detail::fmt(min_sep) + ", max interpolation error " +
                         detail::fmt(max_interp);
    if (!failure.empty()) summary += "; " + failure;
    cert.clauses.push_back({"off_curve_separation",
                            failure.empty() && static_cast<int>(cert.witnesses.size()) >= wanted &&
                                passed == static_cast<int>(cert.witnesses.size()),
                            summary});
    return cert;
}

}  // namespace npick
