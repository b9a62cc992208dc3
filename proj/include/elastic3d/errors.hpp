#pragma once

#include <stdexcept>
#include <string>

namespace elastic3d {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Layered model or parameter volume that violates physical constraints.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario configuration rejected before any compute.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested execution backend cannot run on this machine or build.
class BackendUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace elastic3d
