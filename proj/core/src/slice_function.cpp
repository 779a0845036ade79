#include "sspec/slice_function.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "sspec/errors.hpp"

namespace sspec {

struct IntrinsicFunction::Node {
  FunctionKind kind = FunctionKind::Rational;
  double theta = 0.0;
  std::string name;
  std::function<Complex(Complex)> eval;
  std::optional<RationalForm> rational;
  std::optional<DecayCertificate> decay;
  std::optional<BoundedCertificate> bounded;
};

namespace {

using Node = IntrinsicFunction::Node;

void checkTheta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
    throw ArgumentError("domain angle theta must lie in (0, pi/2)");
  }
}

IntrinsicFunction make(Node node) {
  return IntrinsicFunction(std::make_shared<const Node>(std::move(node)));
}

Complex horner(const std::vector<double>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<double> trimmed(std::vector<double> c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  return c;
}

std::vector<double> polyMul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<double> polyAdd(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  return out;
}

// Roots of a real polynomial (ascending coefficients, nonzero leading term).
std::vector<Complex> polyRoots(const std::vector<double>& c) {
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / c[deg];
  const Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<Complex> roots;
  for (int i = 0; i < deg; ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

double decayScale(double alpha, double t) {
  const double p = std::pow(std::abs(t), alpha);
  return std::max(p, 1.0 / p);
}

}  // namespace

const char* kindName(FunctionKind kind) noexcept {
  switch (kind) {
    case FunctionKind::Rational: return "rational";
    case FunctionKind::EAlpha: return "e_alpha";
    case FunctionKind::Scaled: return "scaled";
    case FunctionKind::FAb: return "f_ab";
    case FunctionKind::Product: return "product";
    case FunctionKind::Sum: return "sum";
  }
  return "unknown";
}

Complex IntrinsicFunction::operator()(Complex z) const { return node_->eval(z); }
double IntrinsicFunction::theta() const noexcept { return node_->theta; }
FunctionKind IntrinsicFunction::kind() const noexcept { return node_->kind; }
const std::string& IntrinsicFunction::name() const noexcept { return node_->name; }
const std::optional<DecayCertificate>& IntrinsicFunction::decay() const noexcept {
  return node_->decay;
}
const std::optional<BoundedCertificate>& IntrinsicFunction::bounded() const noexcept {
  return node_->bounded;
}

IntrinsicFunction IntrinsicFunction::withDecay(const DecayCertificate& c) const {
  Node n = *node_;
  n.decay = c;
  return make(std::move(n));
}

IntrinsicFunction IntrinsicFunction::withBounded(const BoundedCertificate& c) const {
  Node n = *node_;
  n.bounded = c;
  return make(std::move(n));
}

IntrinsicFunction IntrinsicFunction::renamed(std::string name) const {
  Node n = *node_;
  n.name = std::move(name);
  return make(std::move(n));
}

std::optional<RationalForm> IntrinsicFunction::toRational() const { return node_->rational; }

IntrinsicFunction rationalFunction(std::vector<double> num, std::vector<double> den, double theta,
                                   std::string name) {
  checkTheta(theta);
  num = trimmed(std::move(num));
  den = trimmed(std::move(den));
  if (den.empty()) throw ArgumentError("rational function with zero denominator");
  for (double c : num) {
    if (!std::isfinite(c)) throw ArgumentError("non-finite numerator coefficient");
  }
  for (double c : den) {
    if (!std::isfinite(c)) throw ArgumentError("non-finite denominator coefficient");
  }
  if (den[0] == 0.0) throw DomainError("denominator vanishes at the origin");
  for (const Complex& r : polyRoots(den)) {
    const double ang = std::atan2(std::abs(r.imag()), r.real());
    if (ang <= theta + 1e-12 || ang >= std::numbers::pi - theta - 1e-12) {
      throw DomainError("denominator has a zero in the closed sector at " +
                        std::to_string(r.real()) + (r.imag() < 0 ? " - " : " + ") +
                        std::to_string(std::abs(r.imag())) + "i");
    }
  }
  Node n;
  n.kind = FunctionKind::Rational;
  n.theta = theta;
  n.name = std::move(name);
  n.eval = [num, den](Complex z) { return horner(num, z) / horner(den, z); };
  n.rational = RationalForm{num, den};
  return make(std::move(n));
}

IntrinsicFunction constantFunction(double c, double theta) {
  return rationalFunction({c}, {1.0}, theta, "constant")
      .withBounded({std::abs(c), 0});
}

IntrinsicFunction regularizer(double theta) {
  const double ct = std::cos(theta);
  return rationalFunction({0.0, 1.0}, {1.0, 0.0, 1.0}, theta, "regularizer")
      .withDecay({1.0, 1.0 / ct, 0})
      .withBounded({1.0 / (2.0 * ct), 0});
}

IntrinsicFunction eAlphaFamily(double alpha, double theta) {
  checkTheta(theta);
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ArgumentError("e_alpha needs alpha in (0, 1]");
  Node n;
  n.kind = FunctionKind::EAlpha;
  n.theta = theta;
  n.name = "e_alpha";
  n.eval = [alpha](Complex z) {
    const Complex w = z.real() >= 0.0 ? z : -z;
    return std::pow(w, alpha) / std::pow(1.0 + z * z, alpha);
  };
  const double ct = std::cos(theta);
  // |1+s^2| >= cos(theta)(1+|s|^2) on D_theta, and 1+x^a <= 2^(1-a)(1+x)^a
  n.decay = DecayCertificate{alpha, std::pow(2.0, 1.0 - alpha) / std::pow(ct, alpha), 0};
  n.bounded = BoundedCertificate{std::pow(1.0 / (2.0 * ct), alpha), 0};
  return make(std::move(n));
}

IntrinsicFunction scaleFunction(const IntrinsicFunction& f, double t) {
  if (t == 0.0 || !std::isfinite(t)) throw ArgumentError("scale factor must be finite and nonzero");
  Node n;
  n.kind = FunctionKind::Scaled;
  n.theta = f.theta();
  n.name = "scaled(" + f.name() + ")";
  n.eval = [f, t](Complex z) { return f(t * z); };
  if (auto r = f.toRational()) {
    double p = 1.0;
    for (double& c : r->num) {
      c *= p;
      p *= t;
    }
    p = 1.0;
    for (double& c : r->den) {
      c *= p;
      p *= t;
    }
    n.rational = std::move(r);
  }
  if (const auto& d = f.decay()) {
    n.decay = DecayCertificate{d->alpha, d->cAlpha * decayScale(d->alpha, t), d->samples};
  }
  n.bounded = f.bounded();
  return make(std::move(n));
}

const PanelRule& gaussKronrodPanel() {
  static const PanelRule rule = [] {
    using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
    using G = boost::math::quadrature::gauss<double, 10>;
    const auto& ka = GK::abscissa();
    const auto& kw = GK::weights();
    const auto& ga = G::abscissa();
    const auto& gw = G::weights();
    PanelRule r;
    auto gaussWeight = [&](double x) {
      for (std::size_t i = 0; i < ga.size(); ++i) {
        if (std::abs(ga[i] - std::abs(x)) < 1e-12) return static_cast<double>(gw[i]);
      }
      return 0.0;
    };
    for (std::size_t i = ka.size(); i-- > 1;) {
      r.nodes.push_back(-ka[i]);
      r.kronrod.push_back(kw[i]);
      r.gauss.push_back(gaussWeight(ka[i]));
    }
    for (std::size_t i = 0; i < ka.size(); ++i) {
      r.nodes.push_back(ka[i]);
      r.kronrod.push_back(kw[i]);
      r.gauss.push_back(gaussWeight(ka[i]));
    }
    return r;
  }();
  return rule;
}

IntrinsicFunction fAbFunction(const IntrinsicFunction& f, double a, double b) {
  if (!(a > 0.0 && a <= b && std::isfinite(b))) throw ArgumentError("f_ab needs 0 < a <= b < inf");
  const double lo = std::log(a);
  const double hi = std::log(b);
  const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.5)));
  Node n;
  n.kind = FunctionKind::FAb;
  n.theta = f.theta();
  n.name = "f_ab(" + f.name() + ")";
  n.eval = [f, lo, hi, panels](Complex z) {
    if (hi == lo) return Complex(0.0);
    const PanelRule& rule = gaussKronrodPanel();
    const double half = 0.5 * (hi - lo) / panels;
    Complex total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = lo + (2 * p + 1) * half;
      Complex panel = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double e = std::exp(mid + half * rule.nodes[k]);
        panel += rule.kronrod[k] * (f(e * z) - f(-e * z));
      }
      total += half * panel;
    }
    return total;
  };
  if (const auto& d = f.decay()) {
    // 2 C int_a^b max(t^al, t^-al) dt/t, split at t = 1
    const double al = d->alpha;
    double integral = 0.0;
    if (a < 1.0) integral += (std::pow(a, -al) - std::pow(std::min(b, 1.0), -al)) / al;
    if (b > 1.0) integral += (std::pow(b, al) - std::pow(std::max(a, 1.0), al)) / al;
    n.decay = DecayCertificate{al, 2.0 * d->cAlpha * integral, d->samples};
    n.bounded = BoundedCertificate{d->cAlpha * std::numbers::pi / al, d->samples};
  }
  return make(std::move(n));
}

IntrinsicFunction productFunction(const IntrinsicFunction& f, const IntrinsicFunction& g) {
  Node n;
  n.kind = FunctionKind::Product;
  n.theta = std::min(f.theta(), g.theta());
  n.name = "(" + f.name() + ")*(" + g.name() + ")";
  n.eval = [f, g](Complex z) { return f(z) * g(z); };
  const auto rf = f.toRational();
  const auto rg = g.toRational();
  if (rf && rg) n.rational = RationalForm{polyMul(rf->num, rg->num), polyMul(rf->den, rg->den)};
  const auto &df = f.decay(), &dg = g.decay();
  const auto &bf = f.bounded(), &bg = g.bounded();
  const int samples = std::max({df ? df->samples : 0, dg ? dg->samples : 0,
                                bf ? bf->samples : 0, bg ? bg->samples : 0});
  if (df && dg) {
    n.decay = DecayCertificate{df->alpha + dg->alpha, df->cAlpha * dg->cAlpha, samples};
  } else if (df && bg) {
    n.decay = DecayCertificate{df->alpha, df->cAlpha * bg->supNorm, samples};
  } else if (dg && bf) {
    n.decay = DecayCertificate{dg->alpha, dg->cAlpha * bf->supNorm, samples};
  }
  if (bf && bg) n.bounded = BoundedCertificate{bf->supNorm * bg->supNorm, samples};
  return make(std::move(n));
}

IntrinsicFunction sumFunction(const IntrinsicFunction& f, const IntrinsicFunction& g) {
  Node n;
  n.kind = FunctionKind::Sum;
  n.theta = std::min(f.theta(), g.theta());
  n.name = "(" + f.name() + ")+(" + g.name() + ")";
  n.eval = [f, g](Complex z) { return f(z) + g(z); };
  const auto rf = f.toRational();
  const auto rg = g.toRational();
  if (rf && rg) {
    n.rational = RationalForm{polyAdd(polyMul(rf->num, rg->den), polyMul(rg->num, rf->den)),
                              polyMul(rf->den, rg->den)};
  }
  const auto &df = f.decay(), &dg = g.decay();
  if (df && dg) {
    // x^a / (1 + x^2a) decreases in a for every x
    n.decay = DecayCertificate{std::min(df->alpha, dg->alpha), df->cAlpha + dg->cAlpha,
                               std::max(df->samples, dg->samples)};
  }
  const auto &bf = f.bounded(), &bg = g.bounded();
  if (bf && bg) {
    n.bounded = BoundedCertificate{bf->supNorm + bg->supNorm, std::max(bf->samples, bg->samples)};
  }
  return make(std::move(n));
}

Paravector evalIntrinsic(const IntrinsicFunction& f, const Paravector& s) {
  const DoubleSector domain(f.theta());
  const double y = s.absImag();
  if (!domain.contains(s.s0(), y)) throw DomainError("point outside the function's double sector");
  const Complex w = f(Complex(s.s0(), y));
  if (y == 0.0) return Paravector::real(s.n(), w.real());
  std::vector<double> v(s.imag().begin(), s.imag().end());
  for (double& c : v) c *= w.imag() / y;
  return Paravector(w.real(), std::move(v));
}

std::vector<double> sampleRayAngles(double theta) {
  const double pi = std::numbers::pi;
  return {theta,        -theta,       pi - theta,        -(pi - theta),      0.0,
          pi,           0.5 * theta,  -0.5 * theta,      pi - 0.5 * theta, -(pi - 0.5 * theta)};
}

std::optional<DecayCertificate> certifyDecay(const IntrinsicFunction& f, double alpha,
                                             const SamplingConfig& cfg) {
  if (!(alpha > 0.0)) throw ArgumentError("decay exponent must be positive");
  const int nr = std::max(cfg.samplesPerRay, 16);
  const double decades = std::log10(cfg.rMax / cfg.rMin);
  const int perDecade = std::max(1, static_cast<int>(std::lround((nr - 1) / decades)));
  double c = 0.0;
  int samples = 0;
  std::vector<double> ratio(nr);
  for (double psi : sampleRayAngles(f.theta())) {
    const Complex dir = std::polar(1.0, psi);
    for (int k = 0; k < nr; ++k) {
      const double r = cfg.rMin * std::pow(cfg.rMax / cfg.rMin, static_cast<double>(k) / (nr - 1));
      const double v = std::abs(f(r * dir));
      const double ra = std::pow(r, alpha);
      ratio[k] = v * (1.0 + ra * ra) / ra;
      if (!std::isfinite(ratio[k])) return std::nullopt;
      c = std::max(c, ratio[k]);
      ++samples;
    }
    constexpr double growth = 1e-3;
    if (ratio[0] > ratio[perDecade] * (1.0 + growth)) return std::nullopt;
    if (ratio[nr - 1] > ratio[nr - 1 - perDecade] * (1.0 + growth)) return std::nullopt;
  }
  return DecayCertificate{alpha, c, samples};
}

BoundedCertificate certifyBounded(const IntrinsicFunction& f, const SamplingConfig& cfg) {
  const int nr = std::max(cfg.samplesPerRay, 16);
  BoundedCertificate out;
  for (double psi : sampleRayAngles(f.theta())) {
    const Complex dir = std::polar(1.0, psi);
    for (int k = 0; k < nr; ++k) {
      const double r = cfg.rMin * std::pow(cfg.rMax / cfg.rMin, static_cast<double>(k) / (nr - 1));
      const double v = std::abs(f(r * dir));
      if (!std::isfinite(v)) throw NumericalError("non-finite sample while bounding " + f.name());
      out.supNorm = std::max(out.supNorm, v);
      ++out.samples;
    }
  }
  return out;
}

namespace {

int lowestPower(const std::vector<double>& p) {
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] != 0.0) return static_cast<int>(k);
  }
  return -1;
}

int degree(const std::vector<double>& p) {
  for (std::size_t k = p.size(); k-- > 0;) {
    if (p[k] != 0.0) return static_cast<int>(k);
  }
  return -1;
}

}  // namespace

IntrinsicFunction withSampledCertificates(const IntrinsicFunction& f, std::optional<double> alpha,
                                          const SamplingConfig& cfg) {
  IntrinsicFunction out = f;
  if (!out.decay()) {
    if (!alpha) {
      if (const auto r = f.toRational()) {
        const int atZero = lowestPower(r->num) - lowestPower(r->den);
        const int atInf = degree(r->den) - degree(r->num);
        if (lowestPower(r->num) >= 0 && std::min(atZero, atInf) > 0) {
          alpha = static_cast<double>(std::min(atZero, atInf));
        }
      }
    }
    if (alpha) {
      if (auto c = certifyDecay(f, *alpha, cfg)) out = out.withDecay(*c);
    }
  }
  if (!out.bounded()) {
    if (const auto r = f.toRational(); r && degree(r->num) > degree(r->den)) return out;
    out = out.withBounded(certifyBounded(f, cfg));
  }
  return out;
}

namespace {

// Trapezoid in u = log t of f(e^u s) - f(-e^u s), truncated where the tail
// bound (4C/alpha) arctan(e^{alpha u}) drops below 1e-10.
Complex logTrapezoid(const IntrinsicFunction& f, Complex dir) {
  const auto& d = f.decay();
  if (!d) throw PreconditionError("f_{0,inf} needs a decay certificate for " + f.name());
  if (d->cAlpha == 0.0) return 0.0;
  constexpr double eps = 1e-10;
  const double arg = std::min(eps * d->alpha / (4.0 * d->cAlpha), 1.0);
  const double uHi = -std::log(std::tan(arg)) / d->alpha;
  const double uLo = -uHi;
  const int steps = std::max(64, static_cast<int>(std::ceil((uHi - uLo) / 0.05)));
  const double h = (uHi - uLo) / steps;
  Complex sum = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double e = std::exp(uLo + k * h);
    const Complex v = f(e * dir) - f(-e * dir);
    sum += (k == 0 || k == steps ? 0.5 : 1.0) * v;
  }
  return h * sum;
}

}  // namespace

double f0Infty(const IntrinsicFunction& f) { return logTrapezoid(f, 1.0).real(); }

Complex f0InftyAlong(const IntrinsicFunction& f, double psi) {
  return logTrapezoid(f, std::polar(1.0, psi));
}

}  // namespace sspec
