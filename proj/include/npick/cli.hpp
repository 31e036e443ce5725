/*
 * cli.hpp
 * -------
 * Command dispatch behind the `npick` executable. Argument parsing lives in
 * tools/npick.cpp; everything here works on a filled-in RunConfig so the
 * commands can be driven directly from tests.
 *
 * Exit status: 0 all checks pass, 2 artifact written with failed checks,
 * 1 input or validation error.
 */
#pragma once

#include <cctype>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "npick/json_io.hpp"
#include "npick/pick.hpp"

namespace npick::cli {

using io::json;

enum class Command { construct, certify, extend, degree, perturb, neil_demo, kernel_gram, replay };

struct RunConfig {
    Command command = Command::neil_demo;
    std::string in;        ///< primary input (problem, perturbation spec or certificate)
    std::string out;       ///< artifact path; the artifact goes to stdout when empty
    std::string curve;
    std::string function;
    std::string snapshot;
    std::string at;
    std::uint64_t seed = 0;
    std::optional<double> tol_rank;
    std::optional<double> tol_extend;
    std::optional<double> epsilon;
    std::optional<double> radius;
    std::optional<int> degree;
    std::optional<int> quad;
    std::optional<int> nodes;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitFailedChecks = 2;

/// Parses "0.5", "0.333i", "-i", "0.2-0.1i", "1e-3+2e-3i".
inline cplx parse_complex(std::string s) {
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    if (s.empty()) throw Error(Errc::input, "empty complex literal");
    auto to_double = [&](const std::string& part) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw Error(Errc::input, "malformed complex literal \"" + s + "\"");
        }
        if (used != part.size()) throw Error(Errc::input, "malformed complex literal \"" + s + "\"");
        return v;
    };
    if (s.back() != 'i' && s.back() != 'j') return to_double(s);
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    const std::string re = split == std::string::npos ? "" : body.substr(0, split);
    std::string im = split == std::string::npos ? body : body.substr(split);
    if (im.empty() || im == "+") im = "1";
    else if (im == "-") im = "-1";
    return {re.empty() ? 0.0 : to_double(re), to_double(im)};
}

/// Comma-separated complex coordinates.
inline Point parse_point(const std::string& s) {
    Point z;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        z.push_back(parse_complex(s.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return z;
}

namespace detail {

inline const std::string& require(const std::string& value, const char* flag) {
    if (value.empty()) throw Error(Errc::input, std::string("missing required option ") + flag);
    return value;
}

inline void emit(const RunConfig& cfg, const json& artifact, std::ostream& out) {
    if (cfg.out.empty())
        out << artifact.dump(2) << '\n';
    else
        io::write_file(cfg.out, artifact);
}

/// Summary lines go to stdout only when the artifact goes to a file.
class Summary {
public:
    Summary(const RunConfig& cfg, std::ostream& out) : quiet_(cfg.out.empty()), out_(out) {}
    template <class T>
    Summary& operator<<(const T& v) {
        if (!quiet_) out_ << v;
        return *this;
    }

private:
    bool quiet_;
    std::ostream& out_;
};

inline CertifyConfig certify_config(const RunConfig& cfg) {
    CertifyConfig c;
    c.seed = cfg.seed;
    if (cfg.tol_rank) c.rank_tol = *cfg.tol_rank;
    if (cfg.tol_extend) c.extension_tol = *cfg.tol_extend;
    c.epsilon = cfg.epsilon;
    return c;
}

inline void print_clauses(Summary& s, const std::vector<Clause>& clauses) {
    for (const auto& c : clauses) s << (c.passed ? "  [pass] " : "  [FAIL] ") << c.name << ": " << c.detail << '\n';
}

inline int run_construct(const RunConfig& cfg, std::ostream& out) {
    const auto curve = io::curve_from_json(io::read_file(require(cfg.curve, "--curve")));
    const auto f = io::rational_inner_from_json(io::read_file(require(cfg.function, "--function")));
    const int deg = deg_on_curve(curve, f);
    const auto built = construct_problem(curve, f, cfg.nodes.value_or(deg + 1), cfg.radius.value_or(0.7),
                                         cfg.degree.value_or(16), cfg.quad.value_or(2048));
    emit(cfg, io::to_json(built.problem), out);
    Summary s(cfg, out);
    s << "constructed " << built.problem.size() << "-node problem, deg_V(F) = " << built.degree_on_curve << '\n';
    for (const auto& w : built.warnings) s << "warning: " << w << '\n';
    return kExitOk;
}

inline std::shared_ptr<const KernelSpace> load_snapshot(const std::string& path) {
    if (path.empty()) return nullptr;
    return std::make_shared<const KernelSpace>(io::snapshot_from_json(io::read_file(path)));
}

inline int run_certify(const RunConfig& cfg, std::ostream& out) {
    const auto problem = io::problem_from_json(io::read_file(require(cfg.in, "--problem")));
    const auto f = io::rational_inner_from_json(io::read_file(require(cfg.function, "--function")));
    const auto cert = certify(problem, f, certify_config(cfg), load_snapshot(cfg.snapshot));
    emit(cfg, io::to_json(cert), out);
    Summary s(cfg, out);
    s << "certificate for " << problem.size() << "-node problem, deg_V(F) = " << cert.degree.formula
      << ", numerical rank " << cert.rank_estimate << '\n';
    print_clauses(s, cert.clauses);
    return cert.all_passed() ? kExitOk : kExitFailedChecks;
}

inline int run_extend(const RunConfig& cfg, std::ostream& out) {
    const auto problem = io::problem_from_json(io::read_file(require(cfg.in, "--problem")));
    const auto ev = KernelEvaluator::for_problem(problem, load_snapshot(cfg.snapshot));
    const auto pm = build_pick_matrix(problem, ev);
    const auto gamma = null_vector(pm, cfg.tol_rank.value_or(kDefaultNullTol));
    if (!gamma) throw Error(Errc::input, "Pick matrix is not singular; the extension formula does not apply");
    const std::string& at = require(cfg.at, "--at");
    json artifact = {{"format", io::kFormat}, {"null_vector", io::vector_to_json(*gamma)}};
    cplx value;
    if (problem.curve_kernel) {
        const cplx t = parse_complex(at);
        value = extend_value(problem, ev, *gamma, CurveParam{t});
        artifact["param"] = io::to_json(t);
        artifact["point"] = io::to_json(problem.curve_kernel->curve(t));
    } else {
        const Point z = parse_point(at);
        if (z.size() != problem.dim) throw Error(Errc::dimension_mismatch, "--at has wrong number of coordinates");
        value = extend_value(problem, ev, *gamma, z);
        artifact["point"] = io::to_json(z);
    }
    artifact["value"] = io::to_json(value);
    emit(cfg, artifact, out);
    Summary(cfg, out) << "forced value at " << at << ": " << value.real() << (value.imag() < 0 ? " - " : " + ")
                      << std::abs(value.imag()) << "i\n";
    return kExitOk;
}

inline int run_degree(const RunConfig& cfg, std::ostream& out) {
    const auto curve = io::curve_from_json(io::read_file(require(cfg.curve, "--curve")));
    const auto f = io::rational_inner_from_json(io::read_file(require(cfg.function, "--function")));
    const auto rep = degree_report(curve, f);
    emit(cfg, {{"formula", rep.formula}, {"winding", rep.winding}}, out);
    Summary(cfg, out) << "deg_V(F): formula " << rep.formula << ", winding " << rep.winding << '\n';
    return rep.formula == rep.winding ? kExitOk : kExitFailedChecks;
}

inline int run_perturb(const RunConfig& cfg, std::ostream& out) {
    const auto spec = io::perturbation_spec_from_json(io::read_file(require(cfg.in, "--in")));
    const auto f = perturb(spec);
    const auto reg = check_regular(f.den, kDefaultRegularityGrid);
    const double inner = check_inner_boundary(f, 1000, cfg.seed);
    const bool ok = reg.status == Regularity::certified && inner <= 1e-9;
    emit(cfg,
         {{"format", io::kFormat},
          {"function", io::to_json(f)},
          {"regularity", regularity_name(reg.status)},
          {"min_denominator", reg.min_modulus},
          {"inner_deviation", inner}},
         out);
    Summary(cfg, out) << "perturbed denominator " << regularity_name(reg.status) << " (min |den| " << reg.min_modulus
                      << "), boundary deviation " << inner << '\n';
    return ok ? kExitOk : kExitFailedChecks;
}

inline int run_kernel_gram(const RunConfig& cfg, std::ostream& out) {
    json artifact;
    if (!cfg.in.empty()) {
        const auto problem = io::problem_from_json(io::read_file(cfg.in));
        const auto ev = KernelEvaluator::for_problem(problem);
        artifact = ev.space() ? io::snapshot_to_json(*ev.space()) : json{{"format", io::kFormat}};
        artifact["node_kernel"] = io::matrix_to_json(ev.node_gram());
        artifact["nodes"] = problem.size();
    } else {
        const auto curve = io::curve_from_json(io::read_file(require(cfg.curve, "--curve")));
        const KernelSpace ks(curve, cfg.degree.value_or(16), cfg.quad.value_or(2048));
        artifact = io::snapshot_to_json(ks);
        for (const auto& w : ks.warnings()) std::cerr << "warning: " << w << '\n';
    }
    emit(cfg, artifact, out);
    Summary(cfg, out) << "kernel snapshot written to " << cfg.out << '\n';
    return kExitOk;
}

inline json neil_function_json() {
    return io::to_json(RationalInner(1.0, MultiIndex{3, 2}, MultiPoly::constant(2, 1.0)));
}

inline int run_neil_demo(const RunConfig& cfg, std::ostream& out) {
    const ParamCurve curve = neil_parabola();
    const RationalInner f = io::rational_inner_from_json(neil_function_json());
    const auto built = construct_problem(curve, f, cfg.nodes.value_or(13), cfg.radius.value_or(0.7),
                                         cfg.degree.value_or(16), cfg.quad.value_or(2048));
    CertifyConfig cc = certify_config(cfg);
    if (!cc.epsilon) cc.epsilon = 0.1;
    cc.extra_witness_points = {{0.0, 0.5}};
    const auto cert = certify(built.problem, f, cc);
    emit(cfg, io::to_json(cert), out);

    Summary s(cfg, out);
    s << "Neil parabola z^3 = w^2, gamma(t) = (t^2, t^3), F = z^3 w^2\n"
      << "  deg_V(F): formula " << cert.degree.formula << ", winding " << cert.degree.winding << '\n'
      << "  " << built.problem.size() << "x" << built.problem.size() << " Pick matrix: sigma_min/sigma_max = "
      << cert.svals(cert.svals.size() - 1) / cert.svals(0) << ", numerical rank " << cert.rank_estimate << '\n';
    if (!cert.witnesses.empty())
        s << "  |F_eps - F| at (0, 1/2) with eps = " << cert.witnesses.front().eps << ": "
          << cert.witnesses.front().separation << '\n';
    for (const auto& w : built.warnings) s << "warning: " << w << '\n';
    print_clauses(s, cert.clauses);
    return cert.all_passed() ? kExitOk : kExitFailedChecks;
}

inline int run_replay(const RunConfig& cfg, std::ostream& out) {
    const json stored = io::read_file(require(cfg.in, "--in"));
    const auto problem = io::problem_from_json(io::detail::field(stored, "problem"));
    const auto f = io::rational_inner_from_json(io::detail::field(stored, "function"));
    const auto cc = io::certify_config_from_json(io::detail::field(stored, "config"));
    const auto cert = certify(problem, f, cc, load_snapshot(cfg.snapshot));

    const json& before = io::detail::field(stored, "clauses");
    json comparison = json::array();
    bool identical = before.size() == cert.clauses.size();
    for (std::size_t i = 0; i < cert.clauses.size(); ++i) {
        const bool was = i < before.size() && before[i].value("passed", false);
        const bool same = i < before.size() && before[i].value("name", "") == cert.clauses[i].name &&
                          was == cert.clauses[i].passed;
        identical = identical && same;
        comparison.push_back({{"name", cert.clauses[i].name}, {"stored", was}, {"replayed", cert.clauses[i].passed}});
    }
    emit(cfg,
         {{"format", io::kFormat},
          {"identical", identical},
          {"clauses", comparison},
          {"certificate", io::to_json(cert)}},
         out);
    Summary s(cfg, out);
    s << "replay " << (identical ? "matches" : "DIFFERS FROM") << " the stored certificate\n";
    print_clauses(s, cert.clauses);
    return identical ? kExitOk : kExitFailedChecks;
}

}  // namespace detail

/// Executes one command. Errors are reported on `err` and mapped to exit 1.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        switch (cfg.command) {
            case Command::construct: return detail::run_construct(cfg, out);
            case Command::certify: return detail::run_certify(cfg, out);
            case Command::extend: return detail::run_extend(cfg, out);
            case Command::degree: return detail::run_degree(cfg, out);
            case Command::perturb: return detail::run_perturb(cfg, out);
            case Command::neil_demo: return detail::run_neil_demo(cfg, out);
            case Command::kernel_gram: return detail::run_kernel_gram(cfg, out);
            case Command::replay: return detail::run_replay(cfg, out);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: invalid JSON content: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace npick::cli
