#ifndef CAMLOC_ERROR_HPP
#define CAMLOC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace camloc {

enum class ErrorCode {
    InvalidArgument,
    ParallelImagePlanes,
    BehindCamera,
    DegenerateArrangement,
    CellNotFound,
    NoSolution,
    RankDeficient,
    SingularFit,
};

inline constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParallelImagePlanes: return "ParallelImagePlanes";
    case ErrorCode::BehindCamera: return "BehindCamera";
    case ErrorCode::DegenerateArrangement: return "DegenerateArrangement";
    case ErrorCode::CellNotFound: return "CellNotFound";
    case ErrorCode::NoSolution: return "NoSolution";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::SingularFit: return "SingularFit";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI and the HTTP service can map it to an exit code or status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

    /// Numerical failures, as opposed to bad input.
    [[nodiscard]] bool is_numerical() const noexcept { return code_ != ErrorCode::InvalidArgument; }

private:
    ErrorCode code_;
};

namespace detail {
inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::InvalidArgument, what);
}
}  // namespace detail

}  // namespace camloc

#endif  // CAMLOC_ERROR_HPP
