#pragma once

// omega- and H-infinity functional calculus by quadrature of the S-resolvent
// Cauchy integral over the four rays of the boundary of D_phi in one slice.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sspec/module.hpp"
#include "sspec/s_spectrum.hpp"
#include "sspec/slice_function.hpp"

namespace sspec {

enum class QuadratureRule {
  Trapezoid,  // error from halving (every second node, doubled weight)
  GaussKronrod,  // 21-point panels, error from the embedded 10-point rule
};

struct ContourConfig {
  std::optional<Paravector> J;  // default e_1
  std::optional<double> phi;    // default (omega + theta) / 2
  double uMin = -30.0;          // log-radius window
  double uMax = 30.0;
  int nodes = 2000;             // per ray
  QuadratureRule rule = QuadratureRule::Trapezoid;
};

struct CalculusResult {
  CliffordOperator op;
  Eigen::MatrixXd real;  // rho(op) as computed, before reading entries back
  double truncationError = 0.0;
  double discretizationError = 0.0;

  double errorBound() const noexcept { return truncationError + discretizationError; }
};

/// Contour angle actually used for f on a given report.
double contourAngle(const ContourConfig& cfg, const BisectorReport& report, double theta);

/// Throws PreconditionError unless the report certifies bisectoriality with
/// omega < phi < theta and f carries a decay certificate; NumericalError with
/// the node location on non-finite intermediate values.
CalculusResult omegaCalculus(const IntrinsicFunction& f, const CliffordOperator& t,
                             const BisectorReport& report, const ContourConfig& cfg = {});

/// Several functions on one contour; every resolvent is computed once.
std::vector<CalculusResult> omegaCalculusBatch(const std::vector<IntrinsicFunction>& fs,
                                               const CliffordOperator& t,
                                               const BisectorReport& report,
                                               const ContourConfig& cfg = {});

/// p(T) q(T)^{-1} for rational f. NotInvertibleError if q(T) is singular.
CliffordOperator rationalCalculus(const IntrinsicFunction& f, const CliffordOperator& t);
Eigen::MatrixXd rationalCalculusReal(const RationalForm& r, const Eigen::MatrixXd& rho);

/// e(T)^{-1} (ef)(T). Needs a bounded certificate and an injective T.
CalculusResult hInfCalculus(const IntrinsicFunction& f, const CliffordOperator& t,
                            const BisectorReport& report, const ContourConfig& cfg = {});
std::vector<CalculusResult> hInfCalculusBatch(const std::vector<IntrinsicFunction>& fs,
                                              const CliffordOperator& t,
                                              const BisectorReport& report,
                                              const ContourConfig& cfg = {});

/// omegaCalculus when f decays, hInfCalculus when it is only bounded.
CalculusResult functionalCalculus(const IntrinsicFunction& f, const CliffordOperator& t,
                                  const BisectorReport& report, const ContourConfig& cfg = {});

/// Contour window widened by |log|t|| (same step) so s -> f(t s) is resolved.
ContourConfig widenedFor(const ContourConfig& cfg, double logScale);

/// f(tT), computed as the calculus of s -> f(t s).
CalculusResult scaledCalculus(const IntrinsicFunction& f, double t, const CliffordOperator& op,
                              const BisectorReport& report, const ContourConfig& cfg = {});
std::vector<CalculusResult> scaledCalculusBatch(const IntrinsicFunction& f,
                                                const std::vector<double>& ts,
                                                const CliffordOperator& op,
                                                const BisectorReport& report,
                                                const ContourConfig& cfg = {});

/// Integral of f(tT) dt/t over (-b,-a) u (a,b), Gauss-Kronrod panels in log t.
CalculusResult fAbOperator(const IntrinsicFunction& f, double a, double b,
                           const CliffordOperator& t, const BisectorReport& report,
                           const ContourConfig& cfg = {});

struct AdjointGap {
  double gap = 0.0;        // ||f(T*) - f(T)*||
  double tolerance = 0.0;  // sum of both error bounds
};
AdjointGap adjointCalculusCheck(const IntrinsicFunction& f, const CliffordOperator& t,
                                const BisectorReport& report, const BisectorReport& adjointReport,
                                const ContourConfig& cfg = {});

/// C_phi C_alpha / alpha: the a-priori bound on ||f(T)|| for f with a decay certificate.
double omegaNormBound(const IntrinsicFunction& f, const BisectorReport& report, double phi);

}  // namespace sspec
