#pragma once

// File formats. Clifford numbers are arrays of 2^n reals in ascending mask
// order; see docs/formats.md.

#include <iosfwd>
#include <string>
#include <vector>

#include "sspec/calculus.hpp"
#include "sspec/module.hpp"
#include "sspec/quadratic.hpp"
#include "sspec/s_spectrum.hpp"
#include "sspec/slice_function.hpp"

namespace sspec {

std::string readTextFile(const std::string& path);
/// Throws IoError when the file cannot be written.
void writeTextFile(const std::string& path, const std::string& content);

/// {"n", "m", "matrix": m x m arrays of 2^n reals}. SchemaError names the field.
CliffordOperator parseOperatorJson(const std::string& text);
CliffordOperator parseOperatorFile(const std::string& path);
std::string operatorToJson(const CliffordOperator& t);

/// {"n", "m", "entries": m arrays of 2^n reals}.
ModuleVector parseVectorJson(const std::string& text);
ModuleVector parseVectorFile(const std::string& path);
std::string vectorToJson(const ModuleVector& v);

/// One registry entry {"name", "params"} or an array of them. `defaultTheta`
/// applies unless params carry "theta". Entries without an analytic
/// certificate are certified by sampling.
std::vector<IntrinsicFunction> parseFunctionJson(const std::string& text, double defaultTheta);
/// A file path, inline JSON, or a bare builtin name.
std::vector<IntrinsicFunction> resolveFunctionArg(const std::string& arg, double defaultTheta);

/// Operator JSON plus "trunc_err" and "disc_err".
std::string calculusResultToJson(const CalculusResult& r);

/// {cLower, dUpper, thetaEigenvalues, grid, errorEstimates}.
std::string frameReportToJson(const FrameBounds& fb);

std::string bisectorReportToJson(const BisectorReport& r);

/// Header "x,y,sigma_min", one row per node, then a "# detections" line and
/// a JSON block.
void writeScanCsv(const SpectrumScan& scan, std::ostream& out);

struct ParsedScan {
  std::vector<double> x, y, sigmaMin;
  std::vector<SpectrumDetection> detections;
};
ParsedScan parseScanCsv(const std::string& text);

}  // namespace sspec
