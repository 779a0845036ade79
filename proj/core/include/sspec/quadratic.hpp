#pragma once

// Quadratic estimates: the measure dt/|t| discretized on a log grid, the frame
// operator Theta = sum_k w_k rho(g(t_k T))^T rho(g(t_k T)), its extreme
// eigenvalues, the dyadic random-sign identity and the discrete dual selection.

#include <Eigen/Dense>
#include <vector>

#include "sspec/calculus.hpp"

namespace sspec {

/// |t| in [tMin, tMax] / ||T|| (or absolute when relativeToNorm is false),
/// `nodes` log-spaced points on each sign.
struct QuadGridConfig {
  double tMin = 1e-5;
  double tMax = 1e5;
  int nodes = 400;
  bool relativeToNorm = true;
};

/// g(t_k T) on the grid, both signs: t_k > 0 at even k, -t_k at odd k.
struct FrameSamples {
  std::vector<double> ts;
  std::vector<double> weights;        // trapezoid weights in u = log|t|
  std::vector<double> coarseWeights;  // every second node, doubled
  std::vector<Eigen::MatrixXd> g;     // rho(g(t_k T))
  std::vector<double> errors;         // calculus error bound per node
  double beta = 0.0;                  // decay exponent of g
  double tailEstimate = 0.0;          // ~ integrand at the cut / (2 beta), in operator norm
};

FrameSamples sampleFrame(const IntrinsicFunction& g, const CliffordOperator& t,
                         const BisectorReport& report, const QuadGridConfig& qcfg = {},
                         const ContourConfig& cfg = {});

struct FrameBounds {
  double cLower = 0.0;
  double dUpper = 0.0;
  Eigen::MatrixXd theta;
  Eigen::VectorXd thetaEigenvalues;  // ascending
  double discretizationError = 0.0;  // ||Theta_h - Theta_2h||
  double tailError = 0.0;
  double calculusError = 0.0;        // propagated from the g(tT) errors
  QuadGridConfig grid;

  double thetaError() const noexcept { return discretizationError + tailError + calculusError; }
  /// First-order error of sqrt(lambda) from the Theta error.
  double cLowerError() const noexcept;
  double dUpperError() const noexcept;
};

Eigen::MatrixXd frameOperator(const FrameSamples& samples);
FrameBounds frameBounds(const FrameSamples& samples, const QuadGridConfig& qcfg = {});
FrameBounds frameBounds(const IntrinsicFunction& g, const CliffordOperator& t,
                        const BisectorReport& report, const QuadGridConfig& qcfg = {},
                        const ContourConfig& cfg = {});
/// The same for T*, using a report certified for T*.
FrameBounds adjointFrameBounds(const IntrinsicFunction& g, const CliffordOperator& t,
                               const BisectorReport& adjointReport,
                               const QuadGridConfig& qcfg = {}, const ContourConfig& cfg = {});

/// (integral of ||g(tT)v||^2 dt/|t|)^(1/2).
double quadraticNorm(const FrameSamples& samples, const ModuleVector& v);
double quadraticNorm(const IntrinsicFunction& g, const CliffordOperator& t, const ModuleVector& v,
                     const BisectorReport& report, const QuadGridConfig& qcfg = {},
                     const ContourConfig& cfg = {});

/// Largest supported window half-size: 2n <= 20 sign variables.
inline constexpr int kMaxSignWindow = 10;

struct SignIdentity {
  double lhs = 0.0;  // sum_k ||g(t 2^k T) v||^2, k = -n..n-1
  double rhs = 0.0;  // mean over all sign vectors of ||sum_k a_k g(t 2^k T) v||^2
};

/// Throws ArgumentError unless 1 <= n <= kMaxSignWindow.
SignIdentity dyadicSignIdentity(const IntrinsicFunction& g, const CliffordOperator& t,
                                const ModuleVector& v, double tScale, int n,
                                const BisectorReport& report, const ContourConfig& cfg = {});
/// Same identity on given vectors w_k: ||sum a_k w_k||^2 averaged over a in {-1,1}^K.
SignIdentity signIdentity(const std::vector<Eigen::VectorXd>& w);

/// Mean of a_k a_l over all sign vectors of length `size`; the identity matrix.
Eigen::MatrixXd signProjectorGram(int size);

struct DualSamples {
  std::vector<double> times;
  std::vector<ModuleVector> psi;
  std::vector<ModuleVector> psiEps;
};

/// Exact maximizer of Sc<psi(t), v> on ||v|| = ||psi(t)||: psi itself, or 0.
DualSamples dualSelect(const std::vector<double>& times, const std::vector<ModuleVector>& psi);

}  // namespace sspec
