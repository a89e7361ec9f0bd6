#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mastudy {

/// Failure categories shared by every module. Each maps to one named error
/// condition of an operation contract.
enum class ErrorKind {
    EmptySeries,
    NonPositivePrice,
    DateOutOfRange,
    InsufficientHistory,
    InsufficientObservations,
    DegenerateRegressor,
    MissingOffset,
    EmptySample,
    MissingResiduals,
    SampleTooSmall,
    MissingThresholds,
    MissingClassification,
    MalformedSic,
    MissingOwnership,
    UnknownFeature,
    DegenerateDesign,
    SingularDesign,
    ConstantColumn,
    MissingAr,
    NonPositiveMarketCap,
    MissingTransactionValue,
    NonPositiveTransactionValue,
    EventTooEarly,
    InvalidArgument,
    Parse,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::EmptySeries: return "EmptySeries";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::DateOutOfRange: return "DateOutOfRange";
    case ErrorKind::InsufficientHistory: return "InsufficientHistory";
    case ErrorKind::InsufficientObservations: return "InsufficientObservations";
    case ErrorKind::DegenerateRegressor: return "DegenerateRegressor";
    case ErrorKind::MissingOffset: return "MissingOffset";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::MissingResiduals: return "MissingResiduals";
    case ErrorKind::SampleTooSmall: return "SampleTooSmall";
    case ErrorKind::MissingThresholds: return "MissingThresholds";
    case ErrorKind::MissingClassification: return "MissingClassification";
    case ErrorKind::MalformedSic: return "MalformedSic";
    case ErrorKind::MissingOwnership: return "MissingOwnership";
    case ErrorKind::UnknownFeature: return "UnknownFeature";
    case ErrorKind::DegenerateDesign: return "DegenerateDesign";
    case ErrorKind::SingularDesign: return "SingularDesign";
    case ErrorKind::ConstantColumn: return "ConstantColumn";
    case ErrorKind::MissingAr: return "MissingAr";
    case ErrorKind::NonPositiveMarketCap: return "NonPositiveMarketCap";
    case ErrorKind::MissingTransactionValue: return "MissingTransactionValue";
    case ErrorKind::NonPositiveTransactionValue: return "NonPositiveTransactionValue";
    case ErrorKind::EventTooEarly: return "EventTooEarly";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace mastudy
