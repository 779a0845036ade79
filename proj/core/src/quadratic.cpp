#include "sspec/quadratic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "sspec/errors.hpp"

namespace sspec {

namespace {

void validate(const QuadGridConfig& q) {
  if (!(q.tMin > 0.0 && q.tMin < q.tMax)) throw ArgumentError("t-grid needs 0 < tMin < tMax");
  if (q.nodes < 32) throw ArgumentError("t-grid needs at least 32 nodes per sign");
}

double sqrtError(double lambda, double err) {
  // |sqrt(l + e) - sqrt(l)| <= e / (2 sqrt(l)), and <= sqrt(e) near zero
  if (lambda <= 0.0) return std::sqrt(err);
  return std::min(err / (2.0 * std::sqrt(lambda)), std::sqrt(err));
}

}  // namespace

double FrameBounds::cLowerError() const noexcept {
  return sqrtError(thetaEigenvalues.size() ? thetaEigenvalues[0] : 0.0, thetaError());
}

double FrameBounds::dUpperError() const noexcept {
  return sqrtError(thetaEigenvalues.size() ? thetaEigenvalues[thetaEigenvalues.size() - 1] : 0.0,
                   thetaError());
}

FrameSamples sampleFrame(const IntrinsicFunction& g, const CliffordOperator& t,
                         const BisectorReport& report, const QuadGridConfig& qcfg,
                         const ContourConfig& cfg) {
  validate(qcfg);
  const auto& cert = g.decay();
  if (!cert) throw PreconditionError("quadratic estimates need a decay certificate for " + g.name());
  const double scale = qcfg.relativeToNorm && report.normT > 0.0 ? 1.0 / report.normT : 1.0;
  const double uLo = std::log(qcfg.tMin * scale);
  const double uHi = std::log(qcfg.tMax * scale);
  const int n = qcfg.nodes;
  const double h = (uHi - uLo) / (n - 1);
  const int lastEven = (n - 1) % 2 == 0 ? n - 1 : n - 2;

  FrameSamples s;
  s.beta = cert->alpha;
  for (int k = 0; k < n; ++k) {
    const double tk = std::exp(uLo + k * h);
    const double w = (k == 0 || k == n - 1) ? 0.5 * h : h;
    double wc = 0.0;
    if (k % 2 == 0 && k <= lastEven) wc = (k == 0 || k == lastEven) ? h : 2.0 * h;
    for (double sign : {1.0, -1.0}) {
      s.ts.push_back(sign * tk);
      s.weights.push_back(w);
      s.coarseWeights.push_back(wc);
    }
  }
  auto values = scaledCalculusBatch(g, s.ts, t, report, cfg);
  s.g.reserve(values.size());
  for (auto& v : values) {
    s.g.push_back(std::move(v.real));
    s.errors.push_back(v.errorBound());
  }
  // integrand ~ e^{-2 beta |u - u_cut|} beyond each cut
  const std::size_t m = s.g.size();
  for (std::size_t k : {std::size_t{0}, std::size_t{1}, m - 2, m - 1}) {
    const double nrm = spectralNorm(s.g[k]);
    s.tailEstimate += nrm * nrm / (2.0 * s.beta);
  }
  return s;
}

Eigen::MatrixXd frameOperator(const FrameSamples& samples) {
  const Eigen::Index d = samples.g.front().rows();
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < samples.g.size(); ++k) {
    theta.noalias() += samples.weights[k] * (samples.g[k].transpose() * samples.g[k]);
  }
  return 0.5 * (theta + theta.transpose());
}

FrameBounds frameBounds(const FrameSamples& samples, const QuadGridConfig& qcfg) {
  FrameBounds fb;
  fb.grid = qcfg;
  fb.theta = frameOperator(samples);
  const Eigen::Index d = fb.theta.rows();
  Eigen::MatrixXd coarse = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t k = 0; k < samples.g.size(); ++k) {
    if (samples.coarseWeights[k] == 0.0) continue;
    coarse.noalias() += samples.coarseWeights[k] * (samples.g[k].transpose() * samples.g[k]);
  }
  coarse = 0.5 * (coarse + coarse.transpose());
  fb.discretizationError = spectralNorm(fb.theta - coarse);
  for (std::size_t k = 0; k < samples.g.size(); ++k) {
    const double nrm = spectralNorm(samples.g[k]);
    const double e = samples.errors[k];
    fb.calculusError += samples.weights[k] * (2.0 * nrm * e + e * e);
  }
  fb.tailError = samples.tailEstimate;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(fb.theta, Eigen::EigenvaluesOnly);
  fb.thetaEigenvalues = es.eigenvalues();
  fb.cLower = std::sqrt(std::max(0.0, fb.thetaEigenvalues[0]));
  fb.dUpper = std::sqrt(std::max(0.0, fb.thetaEigenvalues[d - 1]));
  return fb;
}

FrameBounds frameBounds(const IntrinsicFunction& g, const CliffordOperator& t,
                        const BisectorReport& report, const QuadGridConfig& qcfg,
                        const ContourConfig& cfg) {
  return frameBounds(sampleFrame(g, t, report, qcfg, cfg), qcfg);
}

FrameBounds adjointFrameBounds(const IntrinsicFunction& g, const CliffordOperator& t,
                               const BisectorReport& adjointReport, const QuadGridConfig& qcfg,
                               const ContourConfig& cfg) {
  return frameBounds(g, adjointOperator(t), adjointReport, qcfg, cfg);
}

double quadraticNorm(const FrameSamples& samples, const ModuleVector& v) {
  const Eigen::VectorXd x = v.flatten();
  if (x.size() != samples.g.front().cols()) throw DimensionError("vector does not match operator");
  double sum = 0.0;
  for (std::size_t k = 0; k < samples.g.size(); ++k) {
    sum += samples.weights[k] * (samples.g[k] * x).squaredNorm();
  }
  return std::sqrt(sum);
}

double quadraticNorm(const IntrinsicFunction& g, const CliffordOperator& t, const ModuleVector& v,
                     const BisectorReport& report, const QuadGridConfig& qcfg,
                     const ContourConfig& cfg) {
  return quadraticNorm(sampleFrame(g, t, report, qcfg, cfg), v);
}

SignIdentity signIdentity(const std::vector<Eigen::VectorXd>& w) {
  const int count = static_cast<int>(w.size());
  if (count < 1 || count > 2 * kMaxSignWindow) {
    throw ArgumentError("sign window must hold 1.." + std::to_string(2 * kMaxSignWindow) +
                        " terms");
  }
  SignIdentity out;
  for (const auto& x : w) out.lhs += x.squaredNorm();
  // Gray-code walk: one term flips per step
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(w.front().size());
  for (const auto& x : w) acc += x;
  const std::uint64_t total = std::uint64_t{1} << count;
  std::uint64_t signs = 0;  // bit set -> -1
  double sum = 0.0;
  for (std::uint64_t step = 0; step < total; ++step) {
    sum += acc.squaredNorm();
    if (step + 1 == total) break;
    const int bit = std::countr_zero(step + 1);
    signs ^= std::uint64_t{1} << bit;
    if (signs & (std::uint64_t{1} << bit)) {
      acc -= 2.0 * w[bit];
    } else {
      acc += 2.0 * w[bit];
    }
  }
  out.rhs = sum / static_cast<double>(total);
  return out;
}

SignIdentity dyadicSignIdentity(const IntrinsicFunction& g, const CliffordOperator& t,
                                const ModuleVector& v, double tScale, int n,
                                const BisectorReport& report, const ContourConfig& cfg) {
  if (n < 1 || n > kMaxSignWindow) {
    throw ArgumentError("dyadic window n must lie in 1.." + std::to_string(kMaxSignWindow));
  }
  if (tScale == 0.0) throw ArgumentError("dyadic base point t must be nonzero");
  std::vector<double> ts;
  for (int k = -n; k < n; ++k) ts.push_back(tScale * std::ldexp(1.0, k));
  const auto values = scaledCalculusBatch(g, ts, t, report, cfg);
  const Eigen::VectorXd x = v.flatten();
  std::vector<Eigen::VectorXd> w;
  for (const auto& r : values) w.push_back(r.real * x);
  return signIdentity(w);
}

Eigen::MatrixXd signProjectorGram(int size) {
  if (size < 1 || size > 2 * kMaxSignWindow) throw ArgumentError("sign window too large");
  const std::uint64_t total = std::uint64_t{1} << size;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(size, size);
  for (std::uint64_t a = 0; a < total; ++a) {
    for (int k = 0; k < size; ++k) {
      const double sk = (a >> k) & 1 ? -1.0 : 1.0;
      for (int l = 0; l < size; ++l) {
        const double sl = (a >> l) & 1 ? -1.0 : 1.0;
        gram(k, l) += sk * sl;
      }
    }
  }
  return gram / static_cast<double>(total);
}

DualSamples dualSelect(const std::vector<double>& times, const std::vector<ModuleVector>& psi) {
  if (times.size() != psi.size()) throw DimensionError("one sample per time is required");
  DualSamples out{times, psi, {}};
  out.psiEps.reserve(psi.size());
  for (const auto& p : psi) {
    if (p.norm() > 0.0) {
      out.psiEps.push_back(p);
    } else {
      out.psiEps.emplace_back(p.n(), p.m());
    }
  }
  return out;
}

}  // namespace sspec
