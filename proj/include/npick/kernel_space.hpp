/*
 * kernel_space.hpp
 * ----------------
 * Finite-dimensional model of H^2(mu) on a parameterized inner curve.
 *
 * mu is the pushforward of normalized arclength d(theta)/2pi on the unit
 * circle under gamma, so for polynomials f, g
 *
 *     <f, g> = (1/M) sum_j f(gamma(e^{i theta_j})) conj(g(gamma(e^{i theta_j})))
 *
 * on a uniform grid of M angles. The space is truncated to the span of the
 * monomials of total degree <= D. Distinct monomials may coincide on the
 * curve (z^3 = w^2 on the Neil parabola), so the Gram matrix is singular in
 * general and all solves go through a rank-revealing spectral pseudo-inverse.
 *
 * Also provides the product Szego kernel of the polydisc for ambient problems.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "npick/curve.hpp"
#include "npick/polynomial.hpp"

namespace npick {

/// All exponents in n variables of total degree <= d, ordered by total degree
/// and then lexicographically.
inline std::vector<MultiIndex> monomials_up_to(std::size_t n, int d) {
    std::vector<MultiIndex> out;
    for (int total = 0; total <= d; ++total) {
        std::vector<MultiIndex> level;
        MultiIndex e(n);
        // enumerate compositions of `total` into n parts
        auto rec = [&](auto&& self, std::size_t i, int left) -> void {
            if (i + 1 == n) {
                e[i] = left;
                level.push_back(e);
                return;
            }
            for (int k = 0; k <= left; ++k) {
                e[i] = k;
                self(self, i + 1, left - k);
            }
        };
        rec(rec, 0, total);
        std::sort(level.begin(), level.end());
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// Representer of evaluation at gamma(t) inside the truncated space:
/// k = sum_a coeffs[a] * z^a.
struct KernelVector {
    cplx t;
    Point lambda;
    Eigen::VectorXcd coeffs;
    double residual = 0;  ///< max_a |<z^a, k> - (z^a)(lambda)|
    std::string warning;
};

class KernelSpace {
public:
    static constexpr double kDefaultCutoff = 1e-10;
    static constexpr int kOversampling = 8;

    /// Builds the Gram matrix by quadrature (build_space).
    KernelSpace(ParamCurve curve, int max_total_degree, int quad_points, double pinv_cutoff = kDefaultCutoff)
        : curve_(std::move(curve)), degree_(max_total_degree), quad_(quad_points), cutoff_(pinv_cutoff) {
        check_sizes();
        basis_ = monomials_up_to(curve_.dim(), degree_);
        boundary_ = sample_basis(0.0);
        gram_ = (boundary_.transpose() * boundary_.conjugate()) / static_cast<double>(quad_);

        // Refinement check: doubling M adds the midpoints of the grid.
        const Eigen::MatrixXcd mid = sample_basis(std::numbers::pi / quad_);
        const Eigen::MatrixXcd gram_mid = (mid.transpose() * mid.conjugate()) / static_cast<double>(quad_);
        refinement_change_ = (0.5 * (gram_ + gram_mid) - gram_).cwiseAbs().maxCoeff();
        if (refinement_change_ > 1e-10)
            warnings_.push_back("quadrature underresolved: Gram matrix changes by " + std::to_string(refinement_change_) +
                                " when quad_points doubles");
        factorize();
    }

    /// Restores a space from a stored Gram matrix without recomputing it.
    static KernelSpace from_gram(ParamCurve curve, int max_total_degree, int quad_points, double pinv_cutoff,
                                 Eigen::MatrixXcd gram) {
        return KernelSpace(std::move(curve), max_total_degree, quad_points, pinv_cutoff, std::move(gram));
    }

    const ParamCurve& curve() const noexcept { return curve_; }
    int max_total_degree() const noexcept { return degree_; }
    int quad_points() const noexcept { return quad_; }
    double pinv_cutoff() const noexcept { return cutoff_; }
    const std::vector<MultiIndex>& basis() const noexcept { return basis_; }
    const Eigen::MatrixXcd& gram() const noexcept { return gram_; }
    const Eigen::VectorXd& gram_eigenvalues() const noexcept { return evals_; }
    const std::vector<std::string>& warnings() const noexcept { return warnings_; }
    double refinement_change() const noexcept { return refinement_change_; }

    /// Numerical dimension of the truncated space (rank of the Gram matrix).
    int effective_dim() const noexcept { return static_cast<int>(kept_.size()); }

    /// Values of the basis on the quadrature grid, one row per angle.
    const Eigen::MatrixXcd& boundary_values() const noexcept { return boundary_; }

    /// (z^a)(gamma(t)) for every basis exponent a.
    Eigen::VectorXcd basis_values(cplx t) const {
        const Point z = curve_(t);
        return monomial_row(z).transpose();
    }

    /// Solves gram * conj(c) = v with v_a = (z^a)(gamma(t)).
    KernelVector kernel_at(cplx t) const {
        if (!(std::abs(t) < 1.0)) throw Error(Errc::domain, "kernel parameter must lie in the open unit disc");
        KernelVector kv;
        kv.t = t;
        kv.lambda = curve_(t);
        const Eigen::VectorXcd v = basis_values(t);
        const Eigen::VectorXcd y = apply_pinv(v);
        kv.coeffs = y.conjugate();
        kv.residual = (gram_ * y - v).cwiseAbs().maxCoeff();
        if (kv.residual > 1e-6)
            kv.warning = "truncation insufficient: reproducing residual " + std::to_string(kv.residual);
        return kv;
    }

    /// Samples of a kernel vector on the quadrature grid.
    Eigen::VectorXcd boundary_samples(const KernelVector& kv) const { return boundary_ * kv.coeffs; }

    /// Quadrature inner product of two functions sampled on the grid.
    cplx pair(const Eigen::VectorXcd& f, const Eigen::VectorXcd& g) const {
        return g.dot(f) / static_cast<double>(quad_);  // Eigen's dot conjugates its first argument
    }

    /// Pseudo-inverse of the Gram matrix applied to v.
    Eigen::VectorXcd apply_pinv(const Eigen::VectorXcd& v) const {
        const Eigen::VectorXcd proj = kept_vecs_.adjoint() * v;
        return kept_vecs_ * proj.cwiseQuotient(kept_vals_.cast<cplx>());
    }

private:
    KernelSpace(ParamCurve curve, int degree, int quad, double cutoff, Eigen::MatrixXcd gram)
        : curve_(std::move(curve)), degree_(degree), quad_(quad), cutoff_(cutoff), gram_(std::move(gram)) {
        check_sizes();
        basis_ = monomials_up_to(curve_.dim(), degree_);
        if (gram_.rows() != static_cast<Eigen::Index>(basis_.size()) || gram_.cols() != gram_.rows())
            throw Error(Errc::input, "stored Gram matrix does not match the monomial basis size");
        boundary_ = sample_basis(0.0);
        factorize();
    }

    void check_sizes() const {
        if (degree_ < 1) throw Error(Errc::input, "max_total_degree must be at least 1");
        int max_deg = 0;
        for (const auto& m : curve_.coords()) max_deg = std::max(max_deg, m.blaschke_degree());
        const int needed = kOversampling * max_deg * degree_ + 8;
        if (quad_ < needed)
            throw Error(Errc::input, "quad_points = " + std::to_string(quad_) + " below the required " + std::to_string(needed));
        if (!(cutoff_ > 0 && cutoff_ < 1)) throw Error(Errc::input, "pseudo-inverse cutoff must lie in (0,1)");
    }

    Eigen::RowVectorXcd monomial_row(const Point& z) const {
        const std::size_t n = z.size();
        std::vector<std::vector<cplx>> pw(n, std::vector<cplx>(degree_ + 1));
        for (std::size_t i = 0; i < n; ++i) {
            pw[i][0] = 1.0;
            for (int k = 1; k <= degree_; ++k) pw[i][k] = pw[i][k - 1] * z[i];
        }
        Eigen::RowVectorXcd row(basis_.size());
        for (std::size_t a = 0; a < basis_.size(); ++a) {
            cplx v = 1.0;
            for (std::size_t i = 0; i < n; ++i) v *= pw[i][basis_[a][i]];
            row(a) = v;
        }
        return row;
    }

    Eigen::MatrixXcd sample_basis(double offset) const {
        Eigen::MatrixXcd a(quad_, basis_.size());
        for (int j = 0; j < quad_; ++j)
            a.row(j) = monomial_row(curve_(std::polar(1.0, offset + 2.0 * std::numbers::pi * j / quad_)));
        return a;
    }

    void factorize() {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_);
        evals_ = es.eigenvalues();
        const double top = evals_.cwiseAbs().maxCoeff();
        kept_.clear();
        for (Eigen::Index i = 0; i < evals_.size(); ++i)
            if (evals_(i) > cutoff_ * top) kept_.push_back(i);
        kept_vecs_.resize(gram_.rows(), kept_.size());
        kept_vals_.resize(kept_.size());
        for (std::size_t k = 0; k < kept_.size(); ++k) {
            kept_vecs_.col(k) = es.eigenvectors().col(kept_[k]);
            kept_vals_(k) = evals_(kept_[k]);
        }
    }

    ParamCurve curve_;
    int degree_;
    int quad_;
    double cutoff_;
    std::vector<MultiIndex> basis_;
    Eigen::MatrixXcd boundary_;
    Eigen::MatrixXcd gram_;
    Eigen::VectorXd evals_;
    std::vector<Eigen::Index> kept_;
    Eigen::MatrixXcd kept_vecs_;
    Eigen::VectorXd kept_vals_;
    double refinement_change_ = 0;
    std::vector<std::string> warnings_;
};

inline KernelSpace build_space(const ParamCurve& curve, int max_total_degree, int quad_points,
                               double pinv_cutoff = KernelSpace::kDefaultCutoff) {
    return KernelSpace(curve, max_total_degree, quad_points, pinv_cutoff);
}

inline KernelVector kernel_at(const KernelSpace& ks, cplx t) { return ks.kernel_at(t); }

inline void require_distinct(const std::vector<Point>& pts) {
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double d = 0;
            for (std::size_t l = 0; l < pts[i].size(); ++l) d = std::max(d, std::abs(pts[i][l] - pts[j][l]));
            if (d < 1e-12)
                throw Error(Errc::duplicate_node, "nodes " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
        }
}

/// Kernel vectors at the given parameters together with their boundary samples.
struct KernelFamily {
    std::vector<KernelVector> vectors;
    Eigen::MatrixXcd samples;  ///< quad_points x N, column j = k_{lambda_j} on the grid
};

inline KernelFamily kernel_family(const KernelSpace& ks, const std::vector<cplx>& ts) {
    KernelFamily fam;
    std::vector<Point> images;
    for (auto t : ts) {
        fam.vectors.push_back(ks.kernel_at(t));
        images.push_back(fam.vectors.back().lambda);
    }
    require_distinct(images);
    fam.samples.resize(ks.quad_points(), ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) fam.samples.col(j) = ks.boundary_samples(fam.vectors[j]);
    return fam;
}

/// K[i][j] = <k_{lambda_j}, k_{lambda_i}> = k_{lambda_j}(lambda_i), computed by
/// quadrature pairing.
inline Eigen::MatrixXcd kernel_gram(const KernelSpace& ks, const KernelFamily& fam) {
    return (fam.samples.adjoint() * fam.samples) / static_cast<double>(ks.quad_points());
}

inline Eigen::MatrixXcd kernel_gram(const KernelSpace& ks, const std::vector<cplx>& ts) {
    return kernel_gram(ks, kernel_family(ks, ts));
}

/// k_{lambda_j}(gamma(t)) for every member of the family.
inline Eigen::VectorXcd kernel_cross(const KernelSpace& ks, const KernelFamily& fam, cplx t) {
    const Eigen::VectorXcd kn = ks.boundary_samples(ks.kernel_at(t));
    return (fam.samples.adjoint() * kn).conjugate() / static_cast<double>(ks.quad_points());
}

// ---------------------------------------------------------------------------
// Ambient polydisc kernel

/// prod_l 1 / (1 - x_l conj(y_l))
inline cplx szego_kernel(const Point& x, const Point& y) {
    if (x.size() != y.size()) throw Error(Errc::dimension_mismatch, "points of different dimension");
    cplx v = 1.0;
    for (std::size_t l = 0; l < x.size(); ++l) v /= (1.0 - x[l] * std::conj(y[l]));
    return v;
}

inline void require_in_polydisc(const Point& z) {
    for (auto c : z)
        if (!(std::abs(c) < 1.0)) throw Error(Errc::domain, "point is not in the open polydisc");
}

inline Eigen::MatrixXcd ambient_szego(const std::vector<Point>& nodes) {
    for (const auto& z : nodes) require_in_polydisc(z);
    require_distinct(nodes);
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Eigen::MatrixXcd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = szego_kernel(nodes[i], nodes[j]);
    return k;
}

}  // namespace npick
