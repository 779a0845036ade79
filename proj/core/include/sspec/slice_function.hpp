#pragma once

// Intrinsic slice functions on double sectors D_theta, realized by complex
// profiles phi with phi(conj z) = conj(phi(z)). At x + J y the value is
// Re phi(x + i y) + J Im phi(x + i y).

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sspec/clifford.hpp"

namespace sspec {

using Complex = std::complex<double>;

/// |f(s)| <= cAlpha |s|^alpha / (1 + |s|^(2 alpha)) on the sampled set (or analytically).
struct DecayCertificate {
  double alpha = 0.0;
  double cAlpha = 0.0;
  int samples = 0;  // 0 marks an analytic bound
};

struct BoundedCertificate {
  double supNorm = 0.0;
  int samples = 0;
};

enum class FunctionKind { Rational, EAlpha, Scaled, FAb, Product, Sum };

const char* kindName(FunctionKind kind) noexcept;

/// p(s) / q(s) with real coefficients in ascending powers.
struct RationalForm {
  std::vector<double> num;
  std::vector<double> den;
};

class IntrinsicFunction {
 public:
  struct Node;

  Complex operator()(Complex z) const;

  double theta() const noexcept;
  FunctionKind kind() const noexcept;
  const std::string& name() const noexcept;
  const std::optional<DecayCertificate>& decay() const noexcept;
  const std::optional<BoundedCertificate>& bounded() const noexcept;

  IntrinsicFunction withDecay(const DecayCertificate& c) const;
  IntrinsicFunction withBounded(const BoundedCertificate& c) const;
  IntrinsicFunction renamed(std::string name) const;

  /// Closed rational form when every component is rational (products, sums
  /// and scalings of rationals).
  std::optional<RationalForm> toRational() const;

  explicit IntrinsicFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

 private:
  std::shared_ptr<const Node> node_;
};

/// Throws ArgumentError unless 0 < theta < pi/2, and DomainError if q has a
/// zero in the closed sector.
IntrinsicFunction rationalFunction(std::vector<double> num, std::vector<double> den, double theta,
                                   std::string name = "rational");
IntrinsicFunction constantFunction(double c, double theta);

/// e(s) = s / (1 + s^2) with the analytic certificates (1, 1/cos theta) and
/// sup 1/(2 cos theta).
IntrinsicFunction regularizer(double theta);

/// s^a / (1+s^2)^a on Sc s > 0 and (-s)^a / (1+s^2)^a on Sc s < 0, a in (0, 1].
IntrinsicFunction eAlphaFamily(double alpha, double theta);

/// s -> f(t s). Certificates scale by max(|t|^a, |t|^-a).
IntrinsicFunction scaleFunction(const IntrinsicFunction& f, double t);

/// Integral of f(t s) dt / t over (-b, -a) u (a, b), by Gauss-Kronrod panels in log t.
IntrinsicFunction fAbFunction(const IntrinsicFunction& f, double a, double b);

IntrinsicFunction productFunction(const IntrinsicFunction& f, const IntrinsicFunction& g);
IntrinsicFunction sumFunction(const IntrinsicFunction& f, const IntrinsicFunction& g);

/// Value at s in D_theta; DomainError outside.
Paravector evalIntrinsic(const IntrinsicFunction& f, const Paravector& s);

struct SamplingConfig {
  int samplesPerRay = 1000;
  double rMin = 1e-6;
  double rMax = 1e6;
};

/// Smallest C with the decay bound on the sample set, or nullopt if the
/// bound ratio keeps growing over the last decade at either end (no decay
/// of that order) or a sample is not finite.
std::optional<DecayCertificate> certifyDecay(const IntrinsicFunction& f, double alpha,
                                             const SamplingConfig& cfg = {});
BoundedCertificate certifyBounded(const IntrinsicFunction& f, const SamplingConfig& cfg = {});

/// Fills in missing certificates by sampling. The decay exponent is `alpha`
/// when given, else the smaller vanishing order at 0 and at infinity of the
/// rational form; functions without one stay uncertified for decay.
IntrinsicFunction withSampledCertificates(const IntrinsicFunction& f,
                                          std::optional<double> alpha = std::nullopt,
                                          const SamplingConfig& cfg = {});

/// Polar angles of the sampled rays (boundary rays of D_theta plus interior rays).
std::vector<double> sampleRayAngles(double theta);

/// Integral of f(t) dt / t over the real line. Requires a decay certificate.
double f0Infty(const IntrinsicFunction& f);

/// Same integral along the ray t s, s = e^{i psi} in one slice.
Complex f0InftyAlong(const IntrinsicFunction& f, double psi);

/// Gauss-Kronrod 21/10 panel rule on [-1, 1].
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> kronrod;
  std::vector<double> gauss;  // zero on Kronrod-only nodes
};
const PanelRule& gaussKronrodPanel();

}  // namespace sspec
