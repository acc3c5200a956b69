#pragma once

#include <stdexcept>
#include <string>

namespace tpb {

enum class ErrorKind {
    ZeroDenominator,
    MissingField,
    IncompatibleData,
    InconsistentPair,
    InfeasibleInputs,
    InvalidInterval,
    EmptyPolytope,
    UnknownPreset,
    InvalidSpec,
    EmptyStratumArm,
    ParseError,
    SchemaError,
    ValueError,
};

inline const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::ZeroDenominator: return "ZeroDenominator";
        case ErrorKind::MissingField: return "MissingField";
        case ErrorKind::IncompatibleData: return "IncompatibleData";
        case ErrorKind::InconsistentPair: return "InconsistentPair";
        case ErrorKind::InfeasibleInputs: return "InfeasibleInputs";
        case ErrorKind::InvalidInterval: return "InvalidInterval";
        case ErrorKind::EmptyPolytope: return "EmptyPolytope";
        case ErrorKind::UnknownPreset: return "UnknownPreset";
        case ErrorKind::InvalidSpec: return "InvalidSpec";
        case ErrorKind::EmptyStratumArm: return "EmptyStratumArm";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaError: return "SchemaError";
        case ErrorKind::ValueError: return "ValueError";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    // Exit-code classes used by the CLI: bad input vs. data that two valid
    // studies cannot jointly produce.
    bool is_input_error() const {
        return kind_ != ErrorKind::IncompatibleData && kind_ != ErrorKind::EmptyPolytope;
    }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace tpb
