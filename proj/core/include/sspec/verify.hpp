#pragma once

// The inequality suite behind the boundedness characterization: every
// quantitative bound is evaluated on one operator and recorded as
// lhs <= rhs + tolerance.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sspec/calculus.hpp"
#include "sspec/quadratic.hpp"
#include "sspec/s_spectrum.hpp"
#include "sspec/slice_function.hpp"

namespace sspec {

inline constexpr int kReportVersion = 1;

struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  double margin = 0.0;  // rhs + tolerance - lhs
  bool pass = false;
  bool oneSided = false;  // rhs rests on a sampled lower bound, see note
  std::string note;
};

struct StageStatus {
  std::string name;
  bool ok = true;
  std::string reason;
};

struct SuiteConfig {
  double omega = 0.1;
  double theta = 1.2;
  std::optional<double> phi;  // contour angle, default (omega + theta) / 2
  ContourConfig contour;
  QuadGridConfig grid;
  RaySamplingPlan plan;
  std::uint64_t seed = 0;
  int randomVectors = 100;
  int pointwisePairs = 25;
  int integralTaus = 5;
  int fAbSteps = 4;
  int signWindow = 5;
  // echoed only
  std::vector<std::string> functionArgs;
  std::vector<std::string> gArgs;
};

/// Frame functions g, and the f registry split by certificate.
struct FunctionRegistry {
  std::vector<IntrinsicFunction> frame;
  std::vector<IntrinsicFunction> functions;
};
/// g in {e, e^2, g3} with g3 = (s + s^2 + s^3)/(1+s^2)^2; f covers constants,
/// bounded rationals, e_alpha, scalings, f_ab and products.
FunctionRegistry defaultRegistry(double theta);

struct FrameEntry {
  std::string g;
  FrameBounds op;
  FrameBounds adjoint;
};

struct NormEntry {
  std::string f;
  double norm = 0.0;
  double error = 0.0;
  double supNorm = 0.0;
};

struct VerificationReport {
  std::string operatorId;
  CliffordOperator op{1, 1};
  SuiteConfig config;
  std::vector<std::string> frameNames;
  std::vector<std::string> functionNames;
  std::optional<BisectorReport> bisector;
  std::optional<BisectorReport> adjointBisector;
  std::vector<FrameEntry> frames;
  std::vector<NormEntry> norms;
  std::vector<InequalityRecord> records;
  std::vector<StageStatus> stages;

  bool allPass() const noexcept;
  bool preconditionsMet() const noexcept;
  /// 0 all pass, 1 an inequality failed, 2 a stage failed its precondition.
  int exitCode() const noexcept;
  const InequalityRecord* find(const std::string& name) const;
};

/// Empty lists select the defaults. Stage failures are recorded; stages
/// that need bisectoriality are skipped with the reason when it fails.
VerificationReport runTheoremSuite(const CliffordOperator& t, const std::vector<IntrinsicFunction>& gs,
                                   const std::vector<IntrinsicFunction>& fs, const SuiteConfig& cfg,
                                   std::string operatorId = "T");

std::string reportToJson(const VerificationReport& report);

/// CSV heatmap of sigma_min over the grid plus the detections block.
/// Throws IoError when the path cannot be written.
void emitHeatmap(const CliffordOperator& t, const ScanGrid& grid, const std::string& path);

}  // namespace sspec
