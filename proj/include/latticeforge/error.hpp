#pragma once

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace latticeforge {

enum class ErrorKind {
    Bounds,
    NotFound,
    Invariant,
    InvalidChoice,
    Comparability,
    Resource,
    Domain,
    BranchImpossible,
    Collision,
    Geometry,
    Parse,
    Version,
    UnsupportedGate,
    Routing,
    UnboundTheta,
    UnknownTarget,
    File,
    Configuration,
    Transport,
    Validation,
    Conflict,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the core carries a kind and optional structured
// detail (diagnostics, missing bindings, ...). The C API flattens it to JSON.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& message, nlohmann::json detail = nullptr)
        : std::runtime_error(message), kind_(kind), detail_(std::move(detail)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const nlohmann::json& detail() const noexcept { return detail_; }

    nlohmann::json to_json() const;

   private:
    ErrorKind kind_;
    nlohmann::json detail_;
};

}  // namespace latticeforge
