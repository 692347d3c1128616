#pragma once

#include <stdexcept>
#include <string>

namespace gkforge {

enum class ErrorKind {
    Parse,
    Schema,
    NonFinite,
    SingularMetric,
    NotPositiveDefinite,
    NotLeftSymmetric,
    ResourceCap,
    InadmissibleParams,
    Unsatisfiable,
    DomainContainsOrigin,
    SingularMetricAtPoint,
    NotHessian,
    Irrational,
};

inline const char* kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotLeftSymmetric: return "NotLeftSymmetric";
    case ErrorKind::ResourceCap: return "ResourceCap";
    case ErrorKind::InadmissibleParams: return "InadmissibleParams";
    case ErrorKind::Unsatisfiable: return "Unsatisfiable";
    case ErrorKind::DomainContainsOrigin: return "DomainContainsOrigin";
    case ErrorKind::SingularMetricAtPoint: return "SingularMetricAtPoint";
    case ErrorKind::NotHessian: return "NotHessian";
    case ErrorKind::Irrational: return "Irrational";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gkforge
