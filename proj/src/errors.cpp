#include "rcsurf/errors.hpp"

#include <cstdio>

namespace rcsurf {

std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::NonUnitAxis: return "NonUnitAxis";
        case Errc::NotRotation: return "NotRotation";
        case Errc::SingularMetric: return "SingularMetric";
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnknownVariable: return "UnknownVariable";
        case Errc::UnknownFunction: return "UnknownFunction";
        case Errc::EvalDomainError: return "EvalDomainError";
        case Errc::SingularFrame: return "SingularFrame";
        case Errc::OutsideChart: return "OutsideChart";
        case Errc::MetricIncompatible: return "MetricIncompatible";
        case Errc::DegeneratePlane: return "DegeneratePlane";
        case Errc::DegenerateParameterization: return "DegenerateParameterization";
        case Errc::StencilOutsideDomain: return "StencilOutsideDomain";
        case Errc::NotIsothermal: return "NotIsothermal";
        case Errc::NotWeitzenboeck: return "NotWeitzenboeck";
        case Errc::AxisNotNormal: return "AxisNotNormal";
        case Errc::NotClosed: return "NotClosed";
        case Errc::UndefinedField: return "UndefinedField";
        case Errc::IoError: return "IoError";
        case Errc::SceneFormatError: return "SceneFormatError";
        case Errc::UnknownScene: return "UnknownScene";
        case Errc::ConfigError: return "ConfigError";
    }
    return "Error";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

SyntaxError::SyntaxError(std::size_t offset, int line, int column, std::string expected,
                         const std::string& message)
    : Error(Errc::SyntaxError, message + " at line " + std::to_string(line) + ", column " +
                                   std::to_string(column) + " (offset " + std::to_string(offset) +
                                   "); expected " + expected),
      detail_(message),
      offset_(offset),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

namespace {
std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
}  // namespace

EvalDomainError::EvalDomainError(std::string function, double argument)
    : Error(Errc::EvalDomainError, function + " undefined at argument " + fmt_double(argument)),
      function_(std::move(function)),
      argument_(argument) {}

NotIsothermal::NotIsothermal(double E, double F, double G)
    : Error(Errc::NotIsothermal, "induced metric E=" + fmt_double(E) + " F=" + fmt_double(F) +
                                     " G=" + fmt_double(G) + " is not conformal"),
      E_(E),
      F_(F),
      G_(G) {}

SceneFormatError::SceneFormatError(std::string field_path, const std::string& message)
    : Error(Errc::SceneFormatError, field_path + ": " + message), field_path_(std::move(field_path)) {}

}  // namespace rcsurf
