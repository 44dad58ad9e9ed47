#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace specht {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

enum class ErrorKind {
    NonSymmetric,
    NonFinite,
    SizeMismatch,
    NotCommuting,
    SeedNotEigenvector,
    IndexOutOfRange,
    InvalidInput,
    InvalidEdge,
    CycleTooSmall,
    InvalidStep,
    InvalidElement,
    OrderMismatch,
    FactorCountMismatch,
    NotAPartition,
    AlphaZero,
    NotRegular,
    MultiplicityMismatch,
    Parse,
    Io,
    SolverFailure,
    Usage,
};

/// Stable machine-readable name, used in CLI error lines ("error:<kind>: ...").
inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonSymmetric: return "non_symmetric";
        case ErrorKind::NonFinite: return "non_finite";
        case ErrorKind::SizeMismatch: return "size_mismatch";
        case ErrorKind::NotCommuting: return "not_commuting";
        case ErrorKind::SeedNotEigenvector: return "seed_not_eigenvector";
        case ErrorKind::IndexOutOfRange: return "index_out_of_range";
        case ErrorKind::InvalidInput: return "invalid_input";
        case ErrorKind::InvalidEdge: return "invalid_edge";
        case ErrorKind::CycleTooSmall: return "cycle_too_small";
        case ErrorKind::InvalidStep: return "invalid_step";
        case ErrorKind::InvalidElement: return "invalid_element";
        case ErrorKind::OrderMismatch: return "order_mismatch";
        case ErrorKind::FactorCountMismatch: return "factor_count_mismatch";
        case ErrorKind::NotAPartition: return "not_a_partition";
        case ErrorKind::AlphaZero: return "alpha_zero";
        case ErrorKind::NotRegular: return "not_regular";
        case ErrorKind::MultiplicityMismatch: return "multiplicity_mismatch";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Io: return "io";
        case ErrorKind::SolverFailure: return "solver_failure";
        case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace specht
