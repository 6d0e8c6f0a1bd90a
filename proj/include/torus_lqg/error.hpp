#pragma once

#include <stdexcept>
#include <string>

namespace torus_lqg {

enum class ErrorKind {
    InvalidArgument,
    NonConvergence,
    SingularPoint,
    IndexOutOfCutoff,
    InvalidGamma,
    DuplicateInsertion,
    SeibergViolationSum,
    SeibergViolationLocal,
    InvalidCentralCharge,
    NoAdmissibleRoot,
    TruncationTooTight,
    SchemaMismatch,
    Io,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

// numeric failures map to exit code 2, everything else is a validation problem
inline bool is_numeric_failure(ErrorKind k)
{
    return k == ErrorKind::NonConvergence || k == ErrorKind::SingularPoint ||
           k == ErrorKind::TruncationTooTight;
}

}  // namespace torus_lqg
