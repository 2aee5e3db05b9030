#include "latticeforge/error.hpp"

namespace latticeforge {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Bounds: return "bounds";
        case ErrorKind::NotFound: return "not-found";
        case ErrorKind::Invariant: return "invariant";
        case ErrorKind::InvalidChoice: return "invalid-choice";
        case ErrorKind::Comparability: return "comparability";
        case ErrorKind::Resource: return "resource";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::BranchImpossible: return "branch-impossible";
        case ErrorKind::Collision: return "collision";
        case ErrorKind::Geometry: return "geometry";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Version: return "version";
        case ErrorKind::UnsupportedGate: return "unsupported-gate";
        case ErrorKind::Routing: return "routing";
        case ErrorKind::UnboundTheta: return "unbound-theta";
        case ErrorKind::UnknownTarget: return "unknown-target";
        case ErrorKind::File: return "file";
        case ErrorKind::Configuration: return "configuration";
        case ErrorKind::Transport: return "transport";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Conflict: return "conflict";
    }
    return "unknown";
}

nlohmann::json Error::to_json() const {
    nlohmann::json out{{"error", std::string(to_string(kind_))}, {"message", what()}};
    if (!detail_.is_null()) out["detail"] = detail_;
    return out;
}

}  // namespace latticeforge
