#include "torus_lqg/error.hpp"

namespace torus_lqg {

const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::IndexOutOfCutoff: return "IndexOutOfCutoff";
    case ErrorKind::InvalidGamma: return "InvalidGamma";
    case ErrorKind::DuplicateInsertion: return "DuplicateInsertion";
    case ErrorKind::SeibergViolationSum: return "SeibergViolationSum";
    case ErrorKind::SeibergViolationLocal: return "SeibergViolationLocal";
    case ErrorKind::InvalidCentralCharge: return "InvalidCentralCharge";
    case ErrorKind::NoAdmissibleRoot: return "NoAdmissibleRoot";
    case ErrorKind::TruncationTooTight: return "TruncationTooTight";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace torus_lqg
