#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rcsurf {

/// Failure categories shared by every module. Each maps onto one of the
/// named error conditions in the public contracts.
enum class Errc {
    NonUnitAxis,
    NotRotation,
    SingularMetric,
    SyntaxError,
    UnknownVariable,
    UnknownFunction,
    EvalDomainError,
    SingularFrame,
    OutsideChart,
    MetricIncompatible,
    DegeneratePlane,
    DegenerateParameterization,
    StencilOutsideDomain,
    NotIsothermal,
    NotWeitzenboeck,
    AxisNotNormal,
    NotClosed,
    UndefinedField,
    IoError,
    SceneFormatError,
    UnknownScene,
    ConfigError,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Parse failure inside an expression. `offset` is a byte offset into the
/// parsed text; line/column are 1-based and may be shifted by the caller
/// when the text is embedded in a larger document.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, int line, int column, std::string expected,
                const std::string& message);

    std::size_t offset() const noexcept { return offset_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::string& expected() const noexcept { return expected_; }
    /// Message without the location suffix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t offset_;
    int line_;
    int column_;
    std::string expected_;
};

class EvalDomainError : public Error {
public:
    EvalDomainError(std::string function, double argument);

    const std::string& function() const noexcept { return function_; }
    double argument() const noexcept { return argument_; }

private:
    std::string function_;
    double argument_;
};

class NotIsothermal : public Error {
public:
    NotIsothermal(double E, double F, double G);

    double E() const noexcept { return E_; }
    double F() const noexcept { return F_; }
    double G() const noexcept { return G_; }

private:
    double E_, F_, G_;
};

class SceneFormatError : public Error {
public:
    SceneFormatError(std::string field_path, const std::string& message);

    const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

}  // namespace rcsurf
