/*
 * polynomial.hpp
 * --------------
 * Sparse multivariate polynomials with double-precision complex coefficients.
 *
 * A polynomial in n variables z_1..z_n is stored as an ordered map from
 * exponent multi-index to coefficient. The map ordering is lexicographic on
 * the exponents, which is also the canonical term order used for
 * serialization. Exactly-zero coefficients are never stored.
 *
 * Example: z^3 - w^2 in two variables is
 *   { (0,2): -1, (3,0): 1 }
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "npick/error.hpp"

namespace npick {

using cplx = std::complex<double>;

/// A point of C^n.
using Point = std::vector<cplx>;

/// Exponent tuple (one non-negative entry per variable). Also used for
/// n-degrees, Rudin monomial exponents and curve ranks.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::size_t dim) : e_(dim, 0) {}
    MultiIndex(std::initializer_list<int> e) : e_(e) { check(); }
    explicit MultiIndex(std::vector<int> e) : e_(std::move(e)) { check(); }

    std::size_t size() const noexcept { return e_.size(); }
    int operator[](std::size_t i) const { return e_[i]; }
    int& operator[](std::size_t i) { return e_[i]; }
    const std::vector<int>& values() const noexcept { return e_; }

    int total() const {
        int s = 0;
        for (int v : e_) s += v;
        return s;
    }

    /// Entrywise <=.
    bool leq(const MultiIndex& other) const {
        require_same(other);
        for (std::size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > other.e_[i]) return false;
        return true;
    }

    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        a.require_same(b);
        MultiIndex r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) r.e_[i] = a.e_[i] + b.e_[i];
        return r;
    }

    /// Entrywise difference; throws if any entry would go negative.
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
        a.require_same(b);
        MultiIndex r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            r.e_[i] = a.e_[i] - b.e_[i];
            if (r.e_[i] < 0) throw Error(Errc::input, "negative exponent in multi-index difference");
        }
        return r;
    }

    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

    std::string str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < e_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(e_[i]);
        }
        return s + ")";
    }

private:
    void check() const {
        for (int v : e_)
            if (v < 0) throw Error(Errc::input, "multi-index entries must be non-negative");
    }
    void require_same(const MultiIndex& other) const {
        if (other.size() != size())
            throw Error(Errc::dimension_mismatch, "multi-index lengths differ");
    }

    std::vector<int> e_;
};

class MultiPoly {
public:
    using Terms = std::map<MultiIndex, cplx>;

    explicit MultiPoly(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw Error(Errc::input, "polynomial dimension must be positive");
    }

    static MultiPoly constant(std::size_t dim, cplx c) {
        MultiPoly p(dim);
        p.add_term(MultiIndex(dim), c);
        return p;
    }

    static MultiPoly monomial(const MultiIndex& e, cplx c = 1.0) {
        MultiPoly p(e.size());
        p.add_term(e, c);
        return p;
    }

    /// The coordinate function z_i (0-based).
    static MultiPoly variable(std::size_t dim, std::size_t i) {
        MultiIndex e(dim);
        e[i] = 1;
        return monomial(e);
    }

    std::size_t dim() const noexcept { return dim_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    cplx coeff(const MultiIndex& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? cplx{} : it->second;
    }

    /// Accumulates c into the coefficient of z^e.
    void add_term(const MultiIndex& e, cplx c) {
        if (e.size() != dim_) throw Error(Errc::dimension_mismatch, "term exponent length differs from polynomial dimension");
        if (c == cplx{}) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == cplx{}) terms_.erase(it);
        }
    }

    /// Sum of |coefficient| over all terms.
    double coeff_l1() const {
        double s = 0;
        for (const auto& [e, c] : terms_) s += std::abs(c);
        return s;
    }

    cplx operator()(std::span<const cplx> z) const {
        if (z.size() != dim_)
            throw Error(Errc::dimension_mismatch,
                        "point has " + std::to_string(z.size()) + " coordinates, polynomial has " + std::to_string(dim_));
        if (terms_.empty()) return {};
        // powers[i][k] = z_i^k up to the degree in z_i
        std::vector<std::vector<cplx>> powers(dim_);
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < dim_; ++i)
                if (static_cast<std::size_t>(e[i]) + 1 > powers[i].size()) powers[i].resize(e[i] + 1);
        for (std::size_t i = 0; i < dim_; ++i) {
            if (powers[i].empty()) continue;
            powers[i][0] = 1.0;
            for (std::size_t k = 1; k < powers[i].size(); ++k) powers[i][k] = powers[i][k - 1] * z[i];
        }
        cplx sum{};
        for (const auto& [e, c] : terms_) {
            cplx t = c;
            for (std::size_t i = 0; i < dim_; ++i)
                if (e[i]) t *= powers[i][e[i]];
            sum += t;
        }
        return sum;
    }

    cplx operator()(std::initializer_list<cplx> z) const { return (*this)(std::span<const cplx>(z.begin(), z.size())); }

    MultiPoly& operator+=(const MultiPoly& q) {
        require_dim(q);
        for (const auto& [e, c] : q.terms_) add_term(e, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& q) {
        require_dim(q);
        for (const auto& [e, c] : q.terms_) add_term(e, -c);
        return *this;
    }
    MultiPoly& operator*=(cplx a) {
        if (a == cplx{}) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= a;
        return *this;
    }

    friend MultiPoly operator+(MultiPoly p, const MultiPoly& q) { return p += q; }
    friend MultiPoly operator-(MultiPoly p, const MultiPoly& q) { return p -= q; }
    friend MultiPoly operator*(MultiPoly p, cplx a) { return p *= a; }
    friend MultiPoly operator*(cplx a, MultiPoly p) { return p *= a; }
    friend MultiPoly operator-(MultiPoly p) { return p *= -1.0; }

    friend MultiPoly operator*(const MultiPoly& p, const MultiPoly& q) {
        p.require_dim(q);
        MultiPoly r(p.dim_);
        for (const auto& [a, ca] : p.terms_)
            for (const auto& [b, cb] : q.terms_) r.add_term(a + b, ca * cb);
        return r;
    }

    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

private:
    void require_dim(const MultiPoly& q) const {
        if (q.dim_ != dim_) throw Error(Errc::dimension_mismatch, "polynomial dimensions differ");
    }

    std::size_t dim_;
    Terms terms_;
};

/// Per-variable degree of a nonzero polynomial.
inline MultiIndex ndeg(const MultiPoly& p) {
    if (p.is_zero()) throw Error(Errc::undefined_degree, "the zero polynomial has no n-degree");
    MultiIndex d(p.dim());
    for (const auto& [e, c] : p.terms())
        for (std::size_t i = 0; i < p.dim(); ++i) d[i] = std::max(d[i], e[i]);
    return d;
}

/// z^d * conj(p(1/conj(z))): conjugates every coefficient and sends z^a to z^(d-a).
inline MultiPoly reflect(const MultiPoly& p, const MultiIndex& d) {
    if (d.size() != p.dim()) throw Error(Errc::dimension_mismatch, "reflection degree length differs from polynomial dimension");
    MultiPoly r(p.dim());
    for (const auto& [e, c] : p.terms()) {
        if (!e.leq(d))
            throw Error(Errc::invalid_reflection_degree,
                        "term " + e.str() + " exceeds reflection degree " + d.str());
        r.add_term(d - e, std::conj(c));
    }
    return r;
}

inline MultiPoly reflect(const MultiPoly& p) { return reflect(p, ndeg(p)); }

/// Max coefficient difference is at most tol.
inline bool approx_equal(const MultiPoly& p, const MultiPoly& q, double tol) {
    if (p.dim() != q.dim()) throw Error(Errc::dimension_mismatch, "polynomial dimensions differ");
    auto diff = p - q;
    for (const auto& [e, c] : diff.terms())
        if (std::abs(c) > tol) return false;
    return true;
}

/// z^e evaluated at a point.
inline cplx monomial_value(const MultiIndex& e, std::span<const cplx> z) {
    cplx v = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) v *= z[i];
    return v;
}

}  // namespace npick
