#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace npick {

/// Failure categories raised by library operations.
enum class Errc {
    input,
    dimension_mismatch,
    undefined_degree,
    invalid_reflection_degree,
    normalization,
    invalid_unimodular,
    pole,
    perturbation_degree,
    not_inner,
    domain,
    resolution,
    pullback,
    degree_consistency,
    duplicate_node,
    insufficient_nodes,
    outside_uniqueness_domain,
};

inline std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::input: return "input";
        case Errc::dimension_mismatch: return "dimension-mismatch";
        case Errc::undefined_degree: return "undefined-degree";
        case Errc::invalid_reflection_degree: return "invalid-reflection-degree";
        case Errc::normalization: return "normalization";
        case Errc::invalid_unimodular: return "invalid-unimodular";
        case Errc::pole: return "pole";
        case Errc::perturbation_degree: return "perturbation-degree";
        case Errc::not_inner: return "not-inner";
        case Errc::domain: return "domain";
        case Errc::resolution: return "resolution";
        case Errc::pullback: return "pullback";
        case Errc::degree_consistency: return "degree-consistency";
        case Errc::duplicate_node: return "duplicate-node";
        case Errc::insufficient_nodes: return "insufficient-nodes";
        case Errc::outside_uniqueness_domain: return "outside-uniqueness-domain";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace npick
