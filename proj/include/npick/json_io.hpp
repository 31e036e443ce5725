/*
 * json_io.hpp
 * -----------
 * JSON encodings of polynomials, rational inner functions, curves, problems,
 * kernel-space snapshots and certificates. Complex scalars are [re, im]
 * pairs. Top-level documents carry "format": 1.
 */
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "npick/curve.hpp"
#include "npick/kernel_space.hpp"
#include "npick/pick.hpp"
#include "npick/polynomial.hpp"
#include "npick/rational_inner.hpp"

namespace npick::io {

using json = nlohmann::json;

inline constexpr int kFormat = 1;

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw Error(Errc::input, what); }

inline const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

inline double number(const json& j, const char* what) {
    if (!j.is_number()) fail(std::string(what) + " must be a number");
    return j.get<double>();
}

inline int integer(const json& j, const char* what) {
    if (!j.is_number_integer()) fail(std::string(what) + " must be an integer");
    return j.get<int>();
}

inline const json& array(const json& j, const char* what) {
    if (!j.is_array()) fail(std::string(what) + " must be an array");
    return j;
}

inline void check_format(const json& j) {
    if (j.contains("format") && j.at("format") != kFormat) fail("unsupported format version");
}

}  // namespace detail

inline json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        detail::fail("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json to_json(const Point& z) {
    json a = json::array();
    for (auto c : z) a.push_back(to_json(c));
    return a;
}

inline Point point_from_json(const json& j) {
    Point z;
    for (const auto& c : detail::array(j, "point")) z.push_back(complex_from_json(c));
    return z;
}

inline json to_json(const MultiIndex& e) { return e.values(); }

inline MultiIndex multi_index_from_json(const json& j) {
    std::vector<int> e;
    for (const auto& v : detail::array(j, "multi-index")) e.push_back(detail::integer(v, "exponent"));
    return MultiIndex(std::move(e));
}

// --- polynomials -----------------------------------------------------------

inline json to_json(const MultiPoly& p) {
    json terms = json::array();
    for (const auto& [e, c] : p.terms())
        terms.push_back({{"exp", to_json(e)}, {"re", c.real()}, {"im", c.imag()}});
    return {{"dim", p.dim()}, {"terms", terms}};
}

inline MultiPoly poly_from_json(const json& j) {
    const int dim = detail::integer(detail::field(j, "dim"), "dim");
    if (dim < 1) detail::fail("dim must be positive");
    MultiPoly p(dim);
    for (const auto& t : detail::array(detail::field(j, "terms"), "terms")) {
        const MultiIndex e = multi_index_from_json(detail::field(t, "exp"));
        if (e.size() != static_cast<std::size_t>(dim)) detail::fail("term exponent length differs from dim");
        const double re = t.contains("re") ? detail::number(t.at("re"), "re") : 0.0;
        const double im = t.contains("im") ? detail::number(t.at("im"), "im") : 0.0;
        p.add_term(e, {re, im});
    }
    return p;
}

// --- rational functions ----------------------------------------------------

inline json to_json(const RationalInner& f) {
    return {{"tau", to_json(f.tau())}, {"m", to_json(f.m())}, {"q", to_json(f.q())}};
}

inline RationalInner rational_inner_from_json(const json& j) {
    return RationalInner(complex_from_json(detail::field(j, "tau")), multi_index_from_json(detail::field(j, "m")),
                         poly_from_json(detail::field(j, "q")));
}

inline json to_json(const RationalFunction& f) {
    return {{"tau", to_json(f.tau)}, {"num", to_json(f.num)}, {"den", to_json(f.den)}};
}

inline json to_json(const PerturbationSpec& s) {
    json polys = json::array();
    for (const auto& p : s.polys) polys.push_back(to_json(p));
    return {{"base", to_json(s.base)}, {"polys", polys}, {"eps", s.eps}, {"delta", s.delta}};
}

inline PerturbationSpec perturbation_spec_from_json(const json& j) {
    std::vector<MultiPoly> polys;
    for (const auto& p : detail::array(detail::field(j, "polys"), "polys")) polys.push_back(poly_from_json(p));
    auto reals = [&](const char* key) {
        std::vector<double> v;
        if (!j.contains(key)) return std::vector<double>(polys.size(), 0.0);
        for (const auto& x : detail::array(j.at(key), key)) v.push_back(detail::number(x, key));
        return v;
    };
    return PerturbationSpec{rational_inner_from_json(detail::field(j, "base")), std::move(polys), reals("eps"),
                            reals("delta")};
}

// --- curves ----------------------------------------------------------------

inline json to_json(const ParamCurve& c) {
    json coords = json::array();
    for (const auto& m : c.coords()) {
        json zeros = json::array();
        for (const auto& b : m.factors()) zeros.push_back(to_json(b.zero));
        coords.push_back({{"tau", to_json(m.tau())}, {"power", m.power()}, {"zeros", zeros}});
    }
    json j = {{"coords", coords}};
    if (c.defining_polys()) {
        json polys = json::array();
        for (const auto& p : *c.defining_polys()) polys.push_back(to_json(p));
        j["defining_polys"] = polys;
    }
    return j;
}

inline ParamCurve curve_from_json(const json& j) {
    if (j.is_object() && !j.contains("coords") && j.contains("defining_polys"))
        detail::fail("implicit-only varieties are not supported; give a rational parameterization in \"coords\"");
    std::vector<OneVarInner> coords;
    for (const auto& c : detail::array(detail::field(j, "coords"), "coords")) {
        std::vector<BlaschkeFactor> factors;
        if (c.contains("zeros"))
            for (const auto& z : detail::array(c.at("zeros"), "zeros")) factors.emplace_back(complex_from_json(z));
        const cplx tau = c.contains("tau") ? complex_from_json(c.at("tau")) : cplx{1.0};
        const int power = c.contains("power") ? detail::integer(c.at("power"), "power") : 0;
        coords.emplace_back(tau, power, std::move(factors));
    }
    std::optional<std::vector<MultiPoly>> polys;
    if (j.contains("defining_polys")) {
        polys.emplace();
        for (const auto& p : detail::array(j.at("defining_polys"), "defining_polys")) polys->push_back(poly_from_json(p));
    }
    return ParamCurve(std::move(coords), std::move(polys));
}

// --- problems --------------------------------------------------------------

inline json to_json(const PickProblem& p) {
    json nodes = json::array(), targets = json::array();
    for (const auto& z : p.nodes) nodes.push_back(to_json(z));
    for (auto w : p.targets) targets.push_back(to_json(w));
    json kernel = "szego";
    if (p.curve_kernel) {
        json params = json::array();
        for (auto t : p.curve_kernel->params) params.push_back(to_json(t));
        kernel = {{"curve", to_json(p.curve_kernel->curve)},
                  {"params", params},
                  {"degree", p.curve_kernel->degree},
                  {"quad", p.curve_kernel->quad}};
    }
    return {{"format", kFormat}, {"dim", p.dim}, {"nodes", nodes}, {"targets", targets}, {"kernel", kernel}};
}

inline PickProblem problem_from_json(const json& j) {
    detail::check_format(j);
    PickProblem p;
    const int dim = detail::integer(detail::field(j, "dim"), "dim");
    if (dim < 1) detail::fail("dim must be positive");
    p.dim = static_cast<std::size_t>(dim);
    for (const auto& z : detail::array(detail::field(j, "nodes"), "nodes")) p.nodes.push_back(point_from_json(z));
    for (const auto& w : detail::array(detail::field(j, "targets"), "targets")) p.targets.push_back(complex_from_json(w));
    const json& k = detail::field(j, "kernel");
    if (k.is_string()) {
        if (k.get<std::string>() != "szego") detail::fail("unknown kernel \"" + k.get<std::string>() + "\"");
    } else {
        CurveKernelSpec spec{curve_from_json(detail::field(k, "curve")), {}, 16, 2048};
        for (const auto& t : detail::array(detail::field(k, "params"), "params")) spec.params.push_back(complex_from_json(t));
        if (k.contains("degree")) spec.degree = detail::integer(k.at("degree"), "degree");
        if (k.contains("quad")) spec.quad = detail::integer(k.at("quad"), "quad");
        p.curve_kernel = std::move(spec);
    }
    validate(p);
    return p;
}

// --- matrices and snapshots --------------------------------------------------

/// Row-major list of [re, im] pairs.
inline json matrix_to_json(const Eigen::MatrixXcd& m) {
    json a = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) a.push_back(to_json(m(i, k)));
    return a;
}

inline Eigen::MatrixXcd matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols) detail::fail("matrix has wrong number of entries");
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(j[i * cols + k]);
    return m;
}

inline json vector_to_json(const Eigen::VectorXcd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
    return a;
}

inline json snapshot_to_json(const KernelSpace& ks) {
    return {{"format", kFormat},
            {"curve", to_json(ks.curve())},
            {"degree", ks.max_total_degree()},
            {"quad", ks.quad_points()},
            {"cutoff", ks.pinv_cutoff()},
            {"basis_size", ks.basis().size()},
            {"gram", matrix_to_json(ks.gram())}};
}

inline KernelSpace snapshot_from_json(const json& j) {
    detail::check_format(j);
    ParamCurve curve = curve_from_json(detail::field(j, "curve"));
    const int degree = detail::integer(detail::field(j, "degree"), "degree");
    const int quad = detail::integer(detail::field(j, "quad"), "quad");
    const double cutoff = j.contains("cutoff") ? detail::number(j.at("cutoff"), "cutoff") : KernelSpace::kDefaultCutoff;
    const auto size = static_cast<Eigen::Index>(monomials_up_to(curve.dim(), std::max(degree, 0)).size());
    return KernelSpace::from_gram(std::move(curve), degree, quad, cutoff,
                                  matrix_from_json(detail::field(j, "gram"), size, size));
}

// --- certificates ----------------------------------------------------------

inline json to_json(const CertifyConfig& c) {
    json extra = json::array();
    for (const auto& z : c.extra_witness_points) extra.push_back(to_json(z));
    json j = {{"rank_tol", c.rank_tol},
              {"null_tol", c.null_tol},
              {"psd_tol", c.psd_tol},
              {"extension_tol", c.extension_tol},
              {"sample_denominator_tol", c.sample_denominator_tol},
              {"witness_tol", c.witness_tol},
              {"interpolation_tol", c.interpolation_tol},
              {"inner_tol", c.inner_tol},
              {"inner_samples", c.inner_samples},
              {"on_curve_samples", c.on_curve_samples},
              {"sample_radius", c.sample_radius},
              {"off_curve_witnesses", c.off_curve_witnesses},
              {"curve_clearance", c.curve_clearance},
              {"regularity_grid", c.regularity_grid},
              {"extra_witness_points", extra},
              {"seed", c.seed}};
    j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
    return j;
}

inline CertifyConfig certify_config_from_json(const json& j) {
    CertifyConfig c;
    auto num = [&](const char* key, double& dst) {
        if (j.contains(key)) dst = detail::number(j.at(key), key);
    };
    auto integer = [&](const char* key, int& dst) {
        if (j.contains(key)) dst = detail::integer(j.at(key), key);
    };
    num("rank_tol", c.rank_tol);
    num("null_tol", c.null_tol);
    num("psd_tol", c.psd_tol);
    num("extension_tol", c.extension_tol);
    num("sample_denominator_tol", c.sample_denominator_tol);
    num("witness_tol", c.witness_tol);
    num("interpolation_tol", c.interpolation_tol);
    num("inner_tol", c.inner_tol);
    integer("inner_samples", c.inner_samples);
    integer("on_curve_samples", c.on_curve_samples);
    num("sample_radius", c.sample_radius);
    integer("off_curve_witnesses", c.off_curve_witnesses);
    num("curve_clearance", c.curve_clearance);
    integer("regularity_grid", c.regularity_grid);
    if (j.contains("epsilon") && !j.at("epsilon").is_null()) c.epsilon = detail::number(j.at("epsilon"), "epsilon");
    if (j.contains("extra_witness_points"))
        for (const auto& z : j.at("extra_witness_points")) c.extra_witness_points.push_back(point_from_json(z));
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

inline json clauses_to_json(const std::vector<Clause>& clauses) {
    json a = json::array();
    for (const auto& c : clauses) a.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return a;
}

inline json to_json(const UniquenessCertificate& c) {
    json svals = json::array();
    for (Eigen::Index i = 0; i < c.svals.size(); ++i) svals.push_back(c.svals(i));
    json on_curve = json::array();
    for (const auto& s : c.on_curve)
        on_curve.push_back({{"t", to_json(s.t)},
                            {"extended", to_json(s.extended)},
                            {"reference", to_json(s.reference)},
                            {"deviation", s.deviation}});
    json witnesses = json::array();
    for (const auto& w : c.witnesses)
        witnesses.push_back({{"z", to_json(w.z)},
                             {"poly_index", w.poly_index},
                             {"eps", w.eps},
                             {"separation", w.separation},
                             {"interpolation_error", w.interpolation_error},
                             {"inner_deviation", w.inner_deviation},
                             {"passed", w.passed}});
    return {{"format", kFormat},
            {"problem", to_json(c.problem)},
            {"function", to_json(c.function)},
            {"config", to_json(c.config)},
            {"degree", {{"formula", c.degree.formula}, {"winding", c.degree.winding}, {"samples", c.degree.samples}}},
            {"svals", svals},
            {"rank_estimate", c.rank_estimate},
            {"min_eigenvalue", c.min_eigenvalue},
            {"null_vector", c.gamma ? vector_to_json(*c.gamma) : json(nullptr)},
            {"null_residual", c.null_residual},
            {"on_curve_samples", on_curve},
            {"off_curve_witnesses", witnesses},
            {"clauses", clauses_to_json(c.clauses)},
            {"warnings", c.warnings},
            {"all_passed", c.all_passed()}};
}

// --- files -----------------------------------------------------------------

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) detail::fail("cannot open \"" + path + "\"");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        detail::fail("malformed JSON in \"" + path + "\": " + e.what());
    }
}

inline void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) detail::fail("cannot write \"" + path + "\"");
    out << j.dump(2) << '\n';
}

}  // namespace npick::io
