#include "sspec/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <string>

#include "parallel.hpp"
#include "sspec/errors.hpp"

namespace sspec {

namespace {

constexpr std::ptrdiff_t kChunk = 512;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct QuadNode {
  double x, y;      // s = x + J y
  Complex z;        // same point in the complex model slice
  Complex factor;   // orientation, ds_J and the Jacobian |r|, over 2 pi
  double wFine, wCoarse;
};

// Pairwise sums over chunks in arrival order. The tree shape only depends on
// the number of chunks, so the result is independent of the thread count.
class PairwiseSum {
 public:
  void add(Eigen::MatrixXd m) {
    std::size_t level = 0;
    while (level < levels_.size() && levels_[level].size() != 0) {
      m = levels_[level] + m;
      levels_[level].resize(0, 0);
      ++level;
    }
    if (level == levels_.size()) levels_.emplace_back();
    levels_[level] = std::move(m);
  }

  Eigen::MatrixXd total() const {
    Eigen::MatrixXd out;
    for (const auto& m : levels_) {
      if (m.size() == 0) continue;
      if (out.size() == 0) {
        out = m;
      } else {
        out = m + out;
      }
    }
    return out;
  }

 private:
  std::vector<Eigen::MatrixXd> levels_;
};

void logWeights(const ContourConfig& cfg, std::vector<double>& u, std::vector<double>& fine,
                std::vector<double>& coarse) {
  u.clear();
  fine.clear();
  coarse.clear();
  if (cfg.rule == QuadratureRule::Trapezoid) {
    const int n = cfg.nodes;
    const double h = (cfg.uMax - cfg.uMin) / (n - 1);
    const int lastEven = (n - 1) % 2 == 0 ? n - 1 : n - 2;
    for (int k = 0; k < n; ++k) {
      u.push_back(cfg.uMin + k * h);
      fine.push_back((k == 0 || k == n - 1) ? 0.5 * h : h);
      double wc = 0.0;
      if (k % 2 == 0 && k <= lastEven) wc = (k == 0 || k == lastEven) ? h : 2.0 * h;
      coarse.push_back(wc);
    }
    return;
  }
  const PanelRule& rule = gaussKronrodPanel();
  const int panels = std::max(1, cfg.nodes / static_cast<int>(rule.nodes.size()));
  const double half = 0.5 * (cfg.uMax - cfg.uMin) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = cfg.uMin + (2 * p + 1) * half;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      u.push_back(mid + half * rule.nodes[k]);
      fine.push_back(half * rule.kronrod[k]);
      coarse.push_back(half * rule.gauss[k]);
    }
  }
}

std::vector<QuadNode> contourNodes(const ContourConfig& cfg, double phi) {
  std::vector<double> u, fine, coarse;
  logWeights(cfg, u, fine, coarse);
  std::vector<QuadNode> nodes;
  nodes.reserve(4 * u.size());
  const Complex iunit(0.0, 1.0);
  for (int sr : {1, -1}) {      // sign of r
    for (int sp : {1, -1}) {    // e^{+i phi} or e^{-i phi}
      const Complex dir = std::polar(1.0, sp * phi);
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double r = std::exp(u[k]);
        const Complex z = static_cast<double>(sr) * r * dir;
        // (-+ sgn r) e^{+-i phi} / i * |r| / (2 pi)
        const Complex factor =
            static_cast<double>(-sp * sr) * dir * (-iunit) * r / (2.0 * std::numbers::pi);
        nodes.push_back({z.real(), z.imag(), z, factor, fine[k], coarse[k]});
      }
    }
  }
  return nodes;
}

double tailIntegral(double alpha, double uMin, double uMax) {
  return (std::atan(std::exp(alpha * uMin)) + std::numbers::pi / 2 -
          std::atan(std::exp(alpha * uMax))) /
         alpha;
}

void validate(const ContourConfig& cfg) {
  if (!(cfg.uMin < cfg.uMax)) throw ArgumentError("contour window needs uMin < uMax");
  if (cfg.nodes < 16) throw ArgumentError("contour needs at least 16 nodes per ray");
}

Paravector sliceUnit(const ContourConfig& cfg, const CliffordOperator& t) {
  Paravector J = cfg.J ? *cfg.J : Paravector::unit(t.n(), 1);
  if (J.n() != t.n()) throw DimensionError("slice unit lives in a different algebra");
  if (!isImaginaryUnit(J, 1e-12)) throw ArgumentError("slice unit J must satisfy J^2 = -1");
  return J;
}

void rethrowFirst(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

double contourAngle(const ContourConfig& cfg, const BisectorReport& report, double theta) {
  return cfg.phi ? *cfg.phi : 0.5 * (report.omega + theta);
}

ContourConfig widenedFor(const ContourConfig& cfg, double logScale) {
  const double l = std::abs(logScale);
  if (l == 0.0) return cfg;
  ContourConfig out = cfg;
  const double width = cfg.uMax - cfg.uMin;
  out.uMin -= l;
  out.uMax += l;
  out.nodes = static_cast<int>(std::lround((cfg.nodes - 1) * (width + 2 * l) / width)) + 1;
  return out;
}

std::vector<CalculusResult> omegaCalculusBatch(const std::vector<IntrinsicFunction>& fs,
                                               const CliffordOperator& t,
                                               const BisectorReport& report,
                                               const ContourConfig& cfg) {
  if (fs.empty()) return {};
  validate(cfg);
  if (!report.bisectorial()) {
    throw PreconditionError("operator is not certified bisectorial at omega = " +
                            std::to_string(report.omega));
  }
  double theta = fs.front().theta();
  for (const auto& f : fs) {
    if (!f.decay()) throw PreconditionError("missing decay certificate for " + f.name());
    theta = std::min(theta, f.theta());
  }
  const double phi = contourAngle(cfg, report, theta);
  if (!(report.omega < phi && phi < theta)) {
    throw PreconditionError("contour angle must satisfy omega < phi < theta");
  }
  const double cPhi = report.cPhiAt(phi);
  if (!std::isfinite(cPhi)) throw PreconditionError("resolvent bound C_phi is not finite");

  const Paravector J = sliceUnit(cfg, t);
  const SliceResolvent kernel(t, J);
  const Eigen::MatrixXd& leftJ = kernel.leftJ();
  const int d = kernel.dim();
  const Eigen::Index d2 = static_cast<Eigen::Index>(d) * d;
  const std::vector<QuadNode> nodes = contourNodes(cfg, phi);
  const auto total = static_cast<std::ptrdiff_t>(nodes.size());
  const auto nf = static_cast<Eigen::Index>(fs.size());
  const double logN = std::log2(static_cast<double>(total));

  PairwiseSum sum;
  std::vector<double> roundoff(fs.size(), 0.0);
  for (std::ptrdiff_t start = 0; start < total; start += kChunk) {
    const std::ptrdiff_t count = std::min(kChunk, total - start);
    Eigen::MatrixXd stacked(d2, 2 * count);  // columns vec(A_k), vec(A_k L_J)
    Eigen::MatrixXd coeff(2 * count, 2 * nf);  // fine columns, then coarse
    std::vector<double> scale(count, 0.0);
    std::vector<std::exception_ptr> errors(count);
    detail::parallelFor(count, [&](std::ptrdiff_t k) {
      try {
        const QuadNode& q = nodes[start + k];
        const auto value = kernel.left(q.x, q.y);
        const Eigen::MatrixXd b = value.matrix * leftJ;
        if (!value.matrix.allFinite()) {
          throw NumericalError("non-finite resolvent at s = " + std::to_string(q.x) + " + J " +
                               std::to_string(q.y));
        }
        stacked.col(2 * k) = Eigen::Map<const Eigen::VectorXd>(value.matrix.data(), d2);
        stacked.col(2 * k + 1) = Eigen::Map<const Eigen::VectorXd>(b.data(), d2);
        scale[k] = value.matrix.norm() * (d + 1.0 / value.rcond + logN);
        for (Eigen::Index f = 0; f < nf; ++f) {
          const Complex c = q.factor * fs[f](q.z);
          if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw NumericalError(fs[f].name() + " is not finite at z = " +
                                 std::to_string(q.z.real()) + " + i " +
                                 std::to_string(q.z.imag()));
          }
          coeff(2 * k, f) = c.real() * q.wFine;
          coeff(2 * k + 1, f) = c.imag() * q.wFine;
          coeff(2 * k, nf + f) = c.real() * q.wCoarse;
          coeff(2 * k + 1, nf + f) = c.imag() * q.wCoarse;
        }
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
    rethrowFirst(errors);
    sum.add(stacked * coeff);
    for (Eigen::Index f = 0; f < nf; ++f) {
      for (std::ptrdiff_t k = 0; k < count; ++k) {
        roundoff[f] += std::hypot(coeff(2 * k, f), coeff(2 * k + 1, f)) * scale[k];
      }
    }
  }

  const Eigen::MatrixXd result = sum.total();
  std::vector<CalculusResult> out;
  out.reserve(fs.size());
  for (Eigen::Index f = 0; f < nf; ++f) {
    Eigen::MatrixXd fine = Eigen::Map<const Eigen::MatrixXd>(result.col(f).data(), d, d);
    const Eigen::MatrixXd coarse =
        Eigen::Map<const Eigen::MatrixXd>(result.col(nf + f).data(), d, d);
    const auto& cert = *fs[f].decay();
    CalculusResult r{fromRealRepresentation(t.n(), t.m(), fine), fine, 0.0, 0.0};
    r.truncationError = cPhi / (2.0 * std::numbers::pi) * 4.0 * cert.cAlpha *
                        tailIntegral(cert.alpha, cfg.uMin, cfg.uMax);
    r.discretizationError = spectralNorm(fine - coarse) + kEps * roundoff[f];
    out.push_back(std::move(r));
  }
  return out;
}

CalculusResult omegaCalculus(const IntrinsicFunction& f, const CliffordOperator& t,
                             const BisectorReport& report, const ContourConfig& cfg) {
  return std::move(omegaCalculusBatch({f}, t, report, cfg).front());
}

Eigen::MatrixXd rationalCalculusReal(const RationalForm& r, const Eigen::MatrixXd& rho) {
  const Eigen::Index d = rho.rows();
  auto poly = [&](const std::vector<double>& c) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      acc = acc * rho;
      acc.diagonal().array() += *it;
    }
    return acc;
  };
  if (r.den.empty()) throw ArgumentError("rational function with zero denominator");
  const OperatorSolver q(poly(r.den));
  return q.solve(poly(r.num));
}

CliffordOperator rationalCalculus(const IntrinsicFunction& f, const CliffordOperator& t) {
  const auto r = f.toRational();
  if (!r) throw ArgumentError(f.name() + " has no closed rational form");
  return fromRealRepresentation(t.n(), t.m(),
                                rationalCalculusReal(*r, realRepresentation(t).matrix));
}

std::vector<CalculusResult> hInfCalculusBatch(const std::vector<IntrinsicFunction>& fs,
                                              const CliffordOperator& t,
                                              const BisectorReport& report,
                                              const ContourConfig& cfg) {
  if (fs.empty()) return {};
  if (!report.injective) throw PreconditionError("H-infinity calculus needs an injective operator");
  std::vector<IntrinsicFunction> regularized;
  for (const auto& f : fs) {
    if (!f.bounded()) throw PreconditionError("missing bounded certificate for " + f.name());
    regularized.push_back(productFunction(regularizer(f.theta()), f));
  }
  const auto ef = omegaCalculusBatch(regularized, t, report, cfg);
  const RationalForm e{{0.0, 1.0}, {1.0, 0.0, 1.0}};
  const OperatorSolver solver(rationalCalculusReal(e, realRepresentation(t).matrix));
  const double invNorm = 1.0 / solver.sigmaMin();
  std::vector<CalculusResult> out;
  out.reserve(fs.size());
  for (const auto& r : ef) {
    Eigen::MatrixXd x = solver.solve(r.real);
    out.push_back({fromRealRepresentation(t.n(), t.m(), x), x, invNorm * r.truncationError,
                   invNorm * r.discretizationError});
  }
  return out;
}

CalculusResult hInfCalculus(const IntrinsicFunction& f, const CliffordOperator& t,
                            const BisectorReport& report, const ContourConfig& cfg) {
  return std::move(hInfCalculusBatch({f}, t, report, cfg).front());
}

CalculusResult functionalCalculus(const IntrinsicFunction& f, const CliffordOperator& t,
                                  const BisectorReport& report, const ContourConfig& cfg) {
  if (f.decay()) return omegaCalculus(f, t, report, cfg);
  if (f.bounded()) return hInfCalculus(f, t, report, cfg);
  throw PreconditionError(f.name() + " carries neither a decay nor a bounded certificate");
}

std::vector<CalculusResult> scaledCalculusBatch(const IntrinsicFunction& f,
                                                const std::vector<double>& ts,
                                                const CliffordOperator& op,
                                                const BisectorReport& report,
                                                const ContourConfig& cfg) {
  double widen = 0.0;
  std::vector<IntrinsicFunction> scaled;
  scaled.reserve(ts.size());
  for (double t : ts) {
    scaled.push_back(scaleFunction(f, t));
    widen = std::max(widen, std::abs(std::log(std::abs(t))));
  }
  const ContourConfig wide = widenedFor(cfg, widen);
  if (f.decay()) return omegaCalculusBatch(scaled, op, report, wide);
  return hInfCalculusBatch(scaled, op, report, wide);
}

CalculusResult scaledCalculus(const IntrinsicFunction& f, double t, const CliffordOperator& op,
                              const BisectorReport& report, const ContourConfig& cfg) {
  return std::move(scaledCalculusBatch(f, {t}, op, report, cfg).front());
}

CalculusResult fAbOperator(const IntrinsicFunction& f, double a, double b,
                           const CliffordOperator& t, const BisectorReport& report,
                           const ContourConfig& cfg) {
  if (!(a > 0.0 && a <= b && std::isfinite(b))) throw ArgumentError("f_ab needs 0 < a <= b < inf");
  const int d = t.realDim();
  if (a == b) {
    return {CliffordOperator(t.n(), t.m()), Eigen::MatrixXd::Zero(d, d), 0.0, 0.0};
  }
  const double lo = std::log(a);
  const double hi = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.5)));
  const double half = 0.5 * (hi - lo) / panels;
  const PanelRule& rule = gaussKronrodPanel();
  std::vector<double> ts, wk, wg;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (2 * p + 1) * half;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double e = std::exp(mid + half * rule.nodes[k]);
      ts.push_back(e);
      ts.push_back(-e);
      wk.push_back(half * rule.kronrod[k]);
      wg.push_back(half * rule.gauss[k]);
    }
  }
  const auto values = scaledCalculusBatch(f, ts, t, report, cfg);
  Eigen::MatrixXd kron = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd gauss = Eigen::MatrixXd::Zero(d, d);
  double trunc = 0.0, disc = 0.0;
  for (std::size_t k = 0; k < wk.size(); ++k) {
    const Eigen::MatrixXd diff = values[2 * k].real - values[2 * k + 1].real;
    kron += wk[k] * diff;
    gauss += wg[k] * diff;
    trunc += wk[k] * (values[2 * k].truncationError + values[2 * k + 1].truncationError);
    disc += wk[k] * (values[2 * k].discretizationError + values[2 * k + 1].discretizationError);
  }
  disc += spectralNorm(kron - gauss);
  return {fromRealRepresentation(t.n(), t.m(), kron), kron, trunc, disc};
}

AdjointGap adjointCalculusCheck(const IntrinsicFunction& f, const CliffordOperator& t,
                                const BisectorReport& report, const BisectorReport& adjointReport,
                                const ContourConfig& cfg) {
  const CalculusResult direct = functionalCalculus(f, t, report, cfg);
  const CalculusResult adj = functionalCalculus(f, adjointOperator(t), adjointReport, cfg);
  return {spectralNorm(adj.real - direct.real.transpose()), direct.errorBound() + adj.errorBound()};
}

double omegaNormBound(const IntrinsicFunction& f, const BisectorReport& report, double phi) {
  const auto& d = f.decay();
  if (!d) throw PreconditionError("missing decay certificate for " + f.name());
  return report.cPhiAt(phi) * d->cAlpha / d->alpha;
}

}  // namespace sspec
