#pragma once

#include <stdexcept>
#include <string>

namespace gielab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched or out-of-range matrix/tensor dimensions.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// A numerical precondition was violated (non-Hermitian input, invalid
/// density matrix, non-unitary mediator, ...).
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error(what) {}
};

/// Degenerate physical geometry (e.g. superposition split >= separation).
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& what) : Error(what) {}
};

/// Invalid run configuration (CLI / config file schema violations).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace gielab
