#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace npick::detail {

/// Roots of c[0] + c[1] t + ... + c[d] t^d via companion-matrix eigenvalues.
/// Trailing coefficients below 1e-14 * max|c| are dropped before solving.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> c) {
    double scale = 0;
    for (auto v : c) scale = std::max(scale, std::abs(v));
    while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
    const int d = static_cast<int>(c.size()) - 1;
    if (d < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i] / c[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<std::complex<double>> out(d);
    for (int i = 0; i < d; ++i) out[i] = es.eigenvalues()(i);
    return out;
}

/// Coefficients of the product of two ascending-order polynomials.
inline std::vector<std::complex<double>> poly_mul(const std::vector<std::complex<double>>& a,
                                                  const std::vector<std::complex<double>>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::complex<double>> r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

}  // namespace npick::detail
