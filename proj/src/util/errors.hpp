#pragma once

#include <stdexcept>
#include <string>

namespace kpforge {

// Error categories surfaced through the C API as exit/status codes.
enum class ErrorCode {
    runtime = 1,
    config_invalid = 2,
    missing_upstream = 3,
    budget_exceeded = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

#define KPF_DEFINE_ERROR(Name, Code)                                          \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what) : Error(Code, #Name ": " + what) {} \
    }

// Markup / parsing
KPF_DEFINE_ERROR(MalformedMarkup, ErrorCode::runtime);
KPF_DEFINE_ERROR(UnbalancedTags, ErrorCode::runtime);
KPF_DEFINE_ERROR(UnbalancedBraces, ErrorCode::runtime);

// Gateway
KPF_DEFINE_ERROR(ProviderError, ErrorCode::runtime);
// Transport-level failure (connect/5xx); the only retryable provider error.
class ProviderTransportError : public ProviderError {
public:
    explicit ProviderTransportError(const std::string& what) : ProviderError(what) {}
};
KPF_DEFINE_ERROR(BudgetExceeded, ErrorCode::budget_exceeded);
KPF_DEFINE_ERROR(CacheMiss, ErrorCode::runtime);
KPF_DEFINE_ERROR(DimensionMismatch, ErrorCode::runtime);
KPF_DEFINE_ERROR(MissingBinding, ErrorCode::runtime);

// Knowledge / tcpm
KPF_DEFINE_ERROR(UnknownLabel, ErrorCode::runtime);
KPF_DEFINE_ERROR(TopicOutOfRange, ErrorCode::runtime);
KPF_DEFINE_ERROR(DegenerateDistribution, ErrorCode::runtime);
KPF_DEFINE_ERROR(EmptyTopic, ErrorCode::runtime);

// Synthesis
KPF_DEFINE_ERROR(UnparseableScore, ErrorCode::runtime);

// Pipeline
KPF_DEFINE_ERROR(MissingUpstream, ErrorCode::missing_upstream);
KPF_DEFINE_ERROR(ConfigInvalid, ErrorCode::config_invalid);
KPF_DEFINE_ERROR(ManifestCorrupt, ErrorCode::runtime);

#undef KPF_DEFINE_ERROR

}  // namespace kpforge
