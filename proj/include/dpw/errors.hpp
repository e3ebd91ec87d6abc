#ifndef DPW_ERRORS_HPP
#define DPW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpw {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct SingularLoop : Error {
    explicit SingularLoop(const std::string& msg) : Error(msg) {}
};

struct TruncationOverflow : Error {
    explicit TruncationOverflow(const std::string& msg) : Error(msg) {}
};

struct EvaluationAtPole : Error {
    explicit EvaluationAtPole(const std::string& msg) : Error(msg) {}
};

struct NotInAlgebra : Error {
    explicit NotInAlgebra(const std::string& msg) : Error(msg) {}
};

struct AlreadyCompact : Error {
    explicit AlreadyCompact(const std::string& msg) : Error(msg) {}
};

struct NonIntegralElement : Error {
    explicit NonIntegralElement(const std::string& msg) : Error(msg) {}
};

struct NonQuantizedSpectrum : Error {
    explicit NonQuantizedSpectrum(const std::string& msg) : Error(msg) {}
};

struct HalfIntegerConvention : Error {
    explicit HalfIntegerConvention(const std::string& msg) : Error(msg) {}
};

struct OutsideBigCell : Error {
    explicit OutsideBigCell(const std::string& msg) : Error(msg) {}
};

struct IwasawaCellBoundary : Error {
    explicit IwasawaCellBoundary(const std::string& msg) : Error(msg) {}
};

struct NonGenericCell : Error {
    explicit NonGenericCell(const std::string& msg) : Error(msg) {}
};

struct GradingViolation : Error {
    explicit GradingViolation(const std::string& msg) : Error(msg) {}
};

struct ParityViolation : Error {
    explicit ParityViolation(const std::string& msg) : Error(msg) {}
};

struct PathThroughPole : Error {
    explicit PathThroughPole(const std::string& msg) : Error(msg) {}
};

struct SupportOverflow : Error {
    explicit SupportOverflow(const std::string& msg) : Error(msg) {}
};

struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& msg) : Error(msg) {}
};

struct FitDegreeExceeded : Error {
    explicit FitDegreeExceeded(const std::string& msg) : Error(msg) {}
};

struct BranchPoint : Error {
    explicit BranchPoint(const std::string& msg) : Error(msg) {}
};

struct NoMatch : Error {
    explicit NoMatch(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(int line, int column, const std::string& msg)
        : Error("line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + msg),
          line(line),
          column(column) {}
    int line;
    int column;
};

}  // namespace dpw

#endif
