#include "sspec/verify.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"
#include "sspec/errors.hpp"
#include "sspec/io.hpp"

namespace sspec {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kRelativeRecordTol = 1e-3;  // lower frame bound from the adjoint side

InequalityRecord makeRecord(std::string name, double lhs, double rhs, double tol,
                            std::string note = {}) {
  InequalityRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = tol;
  r.margin = rhs + tol - lhs;
  r.pass = std::isfinite(r.margin) && lhs <= rhs + tol;
  r.note = std::move(note);
  return r;
}

// Keep the record with the smallest margin.
void keepWorst(std::optional<InequalityRecord>& worst, InequalityRecord r) {
  if (!worst || r.margin < worst->margin) worst = std::move(r);
}

bool isSelfAdjoint(const CliffordOperator& t) {
  const Eigen::MatrixXd rho = realRepresentation(t).matrix;
  return (rho - rho.transpose()).norm() <= 1e-14 * std::max(1.0, rho.norm());
}

Eigen::VectorXd randomUnit(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(d);
  for (Eigen::Index k = 0; k < d; ++k) v[k] = normal(rng);
  return v / v.norm();
}

std::size_t randomIndex(std::mt19937_64& rng, std::size_t size) {
  return std::uniform_int_distribution<std::size_t>(0, size - 1)(rng);
}

struct FrameData {
  IntrinsicFunction g;
  FrameSamples samples;
  FrameSamples adjointSamples;
  FrameBounds bounds;
  FrameBounds adjointBounds;
  std::vector<double> norms;  // ||rho(g(t_k T))||
  double beta = 0.0, cBeta = 0.0, sup = 0.0;
  double eg2 = 0.0;  // (e g^2)_{0,inf}
  double g2 = 0.0;   // (g^2)_{0,inf}
  double cg = std::numeric_limits<double>::infinity();
};

struct FunctionValue {
  IntrinsicFunction f;
  CalculusResult value;
  double norm = 0.0;
  double sup = 0.0;
};

// Runs one stage; precondition-type failures mark the stage, anything else
// propagates as a failed stage with its message.
template <class Body>
void stage(VerificationReport& rep, const std::string& name, Body&& body) {
  StageStatus s{name, true, {}};
  try {
    body();
  } catch (const std::exception& e) {
    s.ok = false;
    s.reason = e.what();
  }
  rep.stages.push_back(std::move(s));
}

void skip(VerificationReport& rep, const std::string& name, const std::string& reason) {
  rep.stages.push_back({name, false, "skipped: " + reason});
}

// Newton iteration X <- (X + X^{-1}) / 2; the spectrum stays off the imaginary axis.
Eigen::MatrixXd matrixSign(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd x = a;
  for (int it = 0; it < 100; ++it) {
    const Eigen::MatrixXd next = 0.5 * (x + x.partialPivLu().inverse());
    const double step = (next - x).norm();
    x = next;
    if (step <= 1e-15 * x.norm()) break;
  }
  return x;
}

std::string bisectorFailure(const BisectorReport& r, const std::string& which) {
  std::ostringstream ss;
  ss << which << " is not bisectorial for omega = " << r.omega << ":";
  if (!r.spectrumInSector) ss << " S-spectrum leaves the closed double sector;";
  if (!r.cPhiFinite()) ss << " a sampled sector boundary meets the S-spectrum;";
  std::string s = ss.str();
  s.pop_back();
  return s;
}

}  // namespace

FunctionRegistry defaultRegistry(double theta) {
  FunctionRegistry reg;
  const IntrinsicFunction e = regularizer(theta);
  const IntrinsicFunction e2 = productFunction(e, e).renamed("e^2");
  const IntrinsicFunction g3 =
      withSampledCertificates(rationalFunction({0, 1, 1, 1}, {1, 0, 2, 0, 1}, theta, "g3"));
  reg.frame = {e, e2, g3};

  const auto rational = [&](std::vector<double> num, std::vector<double> den, std::string name) {
    return withSampledCertificates(rationalFunction(std::move(num), std::move(den), theta, std::move(name)));
  };
  reg.functions = {
      constantFunction(1.0, theta).renamed("one"),
      rational({0, 0, 1}, {1, 0, 1}, "s^2/(1+s^2)"),
      rational({1}, {1, 0, 1}, "1/(1+s^2)"),
      eAlphaFamily(0.5, theta),
      e,
      e2,
      g3,
      rational({0, 1}, {1, 0, 2, 0, 1}, "s/(1+s^2)^2"),
      scaleFunction(e, 2.0).renamed("e(2s)"),
      fAbFunction(e, 0.5, 2.0).renamed("e_{0.5,2}"),
      withSampledCertificates(productFunction(e, rationalFunction({1}, {1, 0, 1}, theta))).renamed("e/(1+s^2)"),
  };
  return reg;
}

bool VerificationReport::allPass() const noexcept {
  return preconditionsMet() &&
         std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

bool VerificationReport::preconditionsMet() const noexcept {
  return std::all_of(stages.begin(), stages.end(), [](const auto& s) { return s.ok; });
}

int VerificationReport::exitCode() const noexcept {
  if (!preconditionsMet()) return 2;
  return allPass() ? 0 : 1;
}

const InequalityRecord* VerificationReport::find(const std::string& name) const {
  for (const auto& r : records) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

VerificationReport runTheoremSuite(const CliffordOperator& t, const std::vector<IntrinsicFunction>& gsIn,
                                   const std::vector<IntrinsicFunction>& fsIn, const SuiteConfig& cfgIn,
                                   std::string operatorId) {
  VerificationReport rep;
  rep.operatorId = std::move(operatorId);
  rep.op = t;
  rep.config = cfgIn;
  SuiteConfig& cfg = rep.config;
  if (!(cfg.omega > 0.0 && cfg.omega < cfg.theta && cfg.theta < std::numbers::pi / 2)) {
    throw ArgumentError("need 0 < omega < theta < pi/2");
  }
  const double phi = cfg.phi.value_or(0.5 * (cfg.omega + cfg.theta));
  if (!(phi > cfg.omega && phi < cfg.theta)) throw ArgumentError("need omega < phi < theta");
  cfg.phi = phi;
  cfg.contour.phi = phi;
  if (cfg.plan.phis.empty()) cfg.plan.phis = {phi, cfg.theta};

  FunctionRegistry defaults;
  if (gsIn.empty() || fsIn.empty()) defaults = defaultRegistry(cfg.theta);
  const std::vector<IntrinsicFunction> gs = gsIn.empty() ? defaults.frame : gsIn;
  const std::vector<IntrinsicFunction> fs = fsIn.empty() ? defaults.functions : fsIn;
  for (const auto& g : gs) rep.frameNames.push_back(g.name());
  for (const auto& f : fs) rep.functionNames.push_back(f.name());

  std::mt19937_64 rng(cfg.seed);
  const CliffordOperator tStar = adjointOperator(t);

  // 1. bisectoriality of T and T*
  stage(rep, "bisectoriality", [&] {
    rep.bisector = checkBisectorial(t, cfg.omega, cfg.plan);
    rep.adjointBisector = checkBisectorial(tStar, cfg.omega, cfg.plan);
    if (!rep.bisector->bisectorial()) throw PreconditionError(bisectorFailure(*rep.bisector, "T"));
    if (!rep.adjointBisector->bisectorial()) {
      throw PreconditionError(bisectorFailure(*rep.adjointBisector, "T*"));
    }
    if (!rep.bisector->injective) throw PreconditionError("T is not injective: bounded functions need e(T)^{-1}");
  });
  const std::vector<std::string> later = {"frame bounds", "function norms", "frame inequalities",
                                          "limit of truncated integrals", "adjoint calculus",
                                          "sign identity", "dual selection"};
  if (!rep.stages.back().ok) {
    for (const auto& s : later) skip(rep, s, rep.stages.front().reason);
    return rep;
  }
  const BisectorReport& report = *rep.bisector;
  const BisectorReport& adjReport = *rep.adjointBisector;
  const double cTheta = report.cPhiAt(cfg.theta);
  const double cosTheta = std::cos(cfg.theta);
  const IntrinsicFunction e = regularizer(cfg.theta);

  // 2. frame bounds on T and T*
  std::vector<FrameData> frames;
  stage(rep, "frame bounds", [&] {
    for (const auto& g : gs) {
      if (!g.decay()) throw PreconditionError("frame function " + g.name() + " has no decay certificate");
      if (!g.bounded()) throw PreconditionError("frame function " + g.name() + " has no bounded certificate");
      FrameData fd{g, sampleFrame(g, t, report, cfg.grid, cfg.contour),
                   sampleFrame(g, tStar, adjReport, cfg.grid, cfg.contour), {}, {}, {}};
      fd.bounds = frameBounds(fd.samples, cfg.grid);
      fd.adjointBounds = frameBounds(fd.adjointSamples, cfg.grid);
      for (const auto& m : fd.samples.g) fd.norms.push_back(spectralNorm(m));
      fd.beta = g.decay()->alpha;
      fd.cBeta = g.decay()->cAlpha;
      fd.sup = g.bounded()->supNorm;
      const IntrinsicFunction g2 = productFunction(g, g);
      fd.g2 = f0Infty(g2);
      fd.eg2 = f0Infty(productFunction(e, g2));
      if (fd.eg2 > 0.0) {
        fd.cg = cTheta * cTheta * fd.cBeta * fd.cBeta * std::numbers::pi /
                (2.0 * cosTheta * fd.beta * fd.beta * fd.eg2);
      }
      rep.frames.push_back({g.name(), fd.bounds, fd.adjointBounds});
      frames.push_back(std::move(fd));
    }
  });

  // 3. norms of f(T) for the registry
  std::vector<FunctionValue> values;
  stage(rep, "function norms", [&] {
    for (const auto& f : fs) {
      if (!f.bounded()) throw PreconditionError(f.name() + " has no bounded certificate");
      FunctionValue fv{f, functionalCalculus(f, t, report, cfg.contour), 0.0, f.bounded()->supNorm};
      fv.norm = spectralNorm(fv.value.real);
      rep.norms.push_back({f.name(), fv.norm, fv.value.errorBound(), fv.sup});
      values.push_back(std::move(fv));
    }
  });

  // 4. quadratic-estimate inequalities, per frame function
  stage(rep, "frame inequalities", [&] {
    const bool selfAdjoint = isSelfAdjoint(t);
    double cRegistry = 0.0;
    for (const auto& fv : values) {
      if (fv.sup > 0.0) cRegistry = std::max(cRegistry, (fv.norm - fv.value.errorBound()) / fv.sup);
    }
    for (const auto& fd : frames) {
      const std::string tag = "[g=" + fd.g.name() + "]";
      const FrameBounds& fb = fd.bounds;
      const FrameSamples& S = fd.samples;
      const Eigen::Index d = fb.theta.rows();

      // sandwich on random unit vectors
      std::optional<InequalityRecord> lower, upper;
      for (int k = 0; k < cfg.randomVectors; ++k) {
        const Eigen::VectorXd v = randomUnit(rng, d);
        const double q = std::sqrt(std::max(0.0, v.dot(fb.theta * v)));
        keepWorst(lower, makeRecord("frame sandwich lower" + tag, fb.cLower, q, fb.cLowerError()));
        keepWorst(upper, makeRecord("frame sandwich upper" + tag, q, fb.dUpper, fb.dUpperError()));
      }
      rep.records.push_back(*lower);
      rep.records.push_back(*upper);

      rep.records.push_back(makeRecord("regularized square mean positive" + tag, -fd.eg2, 0.0, 0.0));
      rep.records.back().pass = fd.eg2 > 0.0;

      // square-function bound for f in the decaying registry
      const double lamMin = fb.thetaEigenvalues[0];
      const double thetaNorm = fb.thetaEigenvalues[d - 1];
      const double dTheta = fb.thetaError();
      for (const auto& fv : values) {
        if (!fv.f.decay()) continue;
        const Eigen::MatrixXd& X = fv.value.real;
        const Eigen::MatrixXd num = X.transpose() * fb.theta * X;
        const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(
            0.5 * (num + num.transpose()), fb.theta, Eigen::EigenvaluesOnly);
        const double lhs = ges.eigenvalues()[d - 1];
        const double xn = fv.norm, ef = fv.value.errorBound();
        const double tol = lamMin > dTheta
                               ? (xn * xn * dTheta + 2.0 * thetaNorm * xn * ef + thetaNorm * ef * ef +
                                  lhs * dTheta) / (lamMin - dTheta)
                               : std::numeric_limits<double>::infinity();
        rep.records.push_back(makeRecord("square function bound[f=" + fv.f.name() + "]" + tag, lhs,
                                         fd.cg * fd.cg * fv.sup * fv.sup, tol));
      }

      // pointwise product bound ||g(tT) g(tau T)||
      const std::size_t nodes = S.g.size();
      const double alpha = fd.beta;
      {
        const double rhs = cTheta * fd.cBeta / alpha * fd.sup;
        std::optional<InequalityRecord> worst;
        for (int k = 0; k < cfg.pointwisePairs; ++k) {
          const std::size_t a = randomIndex(rng, nodes), b = randomIndex(rng, nodes);
          const double lhs = spectralNorm(S.g[a] * S.g[b]);
          const double tol = fd.norms[a] * S.errors[b] + fd.norms[b] * S.errors[a] + S.errors[a] * S.errors[b];
          keepWorst(worst, makeRecord("product pointwise bound" + tag, lhs, rhs, tol));
        }
        rep.records.push_back(*worst);
      }

      // integral of ||g(tT) g(tau T)|| dt/|t| at sampled tau
      const double kernelBound = cTheta * fd.cBeta * fd.cBeta * std::numbers::pi / (2.0 * alpha * alpha);
      {
        std::optional<InequalityRecord> worst;
        for (int k = 0; k < cfg.integralTaus; ++k) {
          const std::size_t b = randomIndex(rng, nodes);
          double fine = 0.0, coarse = 0.0, err = 0.0;
          for (std::size_t a = 0; a < nodes; ++a) {
            const double kv = spectralNorm(S.g[a] * S.g[b]);
            fine += S.weights[a] * kv;
            coarse += S.coarseWeights[a] * kv;
            err += S.weights[a] * (fd.norms[a] * S.errors[b] + fd.norms[b] * S.errors[a]);
          }
          double tail = 0.0;
          for (std::size_t a : {std::size_t{0}, std::size_t{1}, nodes - 2, nodes - 1}) {
            tail += fd.norms[a] * fd.norms[b] / alpha;
          }
          keepWorst(worst, makeRecord("product integral bound" + tag, fine + tail, kernelBound,
                                      std::abs(fine - coarse) + err));
        }
        rep.records.push_back(*worst);
      }

      // weighted double integral with a random indicator-weighted Psi
      {
        const std::size_t stride = std::max<std::size_t>(1, nodes / 200);
        std::vector<std::size_t> idx;
        for (std::size_t a = 0; a < nodes; a += stride) idx.push_back(a);
        std::vector<double> w(idx.size()), psi(idx.size());
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = 0; i < idx.size(); ++i) {
          w[i] = S.weights[idx[i]] * static_cast<double>(stride);
          psi[i] = unit(rng) < 0.5 ? unit(rng) : 0.0;
        }
        double lhs = 0.0, errSum = 0.0, psiMass = 0.0;
        for (std::size_t i = 0; i < idx.size(); ++i) psiMass += w[i] * psi[i] * psi[i];
        for (std::size_t j = 0; j < idx.size(); ++j) {
          double inner = 0.0, innerErr = 0.0;
          for (std::size_t i = 0; i < idx.size(); ++i) {
            if (psi[i] == 0.0) continue;
            const std::size_t a = idx[i], b = idx[j];
            inner += w[i] * spectralNorm(S.g[a] * S.g[b]) * psi[i];
            innerErr += w[i] * (fd.norms[a] * S.errors[b] + fd.norms[b] * S.errors[a]) * psi[i];
          }
          lhs += w[j] * inner * inner;
          errSum += w[j] * (2.0 * inner * innerErr + innerErr * innerErr);
        }
        rep.records.push_back(makeRecord("weighted product integral bound" + tag, lhs,
                                         kernelBound * kernelBound * psiMass, errSum));
      }

      // upper frame bound from a bounded calculus
      {
        const double c = selfAdjoint ? 1.0 : cRegistry;
        const double rhs = std::sqrt(8.0 * std::log(2.0)) * c * fd.cBeta / (1.0 - std::pow(2.0, -fd.beta));
        auto r = makeRecord("upper frame bound from calculus" + tag, fb.dUpper, rhs, fb.dUpperError(),
                            selfAdjoint ? "self-adjoint: c = 1 exactly"
                                        : "c is the registry supremum of ||f(T)||/||f||_inf, a lower bound");
        r.oneSided = !selfAdjoint;
        rep.records.push_back(std::move(r));
      }

      // calculus bound from the frame bounds
      if (fb.cLower > fb.cLowerError()) {
        const double cl = fb.cLower - fb.cLowerError();
        const double du = fb.dUpper + fb.dUpperError();
        for (const auto& fv : values) {
          const double rhs = fd.cg * du / (cl * cosTheta) * fv.sup;
          rep.records.push_back(makeRecord("calculus bound from frame[f=" + fv.f.name() + "]" + tag,
                                           fv.norm, rhs, fv.value.errorBound()));
        }
      } else {
        rep.records.push_back(makeRecord("calculus bound from frame" + tag, 0.0, fb.cLower, fb.cLowerError(),
                                         "lower frame bound is zero within error"));
        rep.records.back().pass = false;
      }

      // lower frame bound from the adjoint upper bound
      {
        const FrameBounds& ab = fd.adjointBounds;
        const double lhs = fd.g2 / ab.dUpper;
        const double tol = kRelativeRecordTol * fb.cLower + fb.cLowerError() +
                           std::abs(lhs) * ab.dUpperError() / ab.dUpper;
        rep.records.push_back(makeRecord("lower frame bound from adjoint" + tag, lhs, fb.cLower, tol,
                                         fd.g2 == 0.0 ? "g^2 is even, the bound is trivial" : ""));
        const double rhs = cTheta * fd.cBeta * fd.cBeta * std::numbers::pi /
                           (2.0 * fd.beta * fd.beta * std::max(fb.cLower - fb.cLowerError(), 0.0));
        rep.records.push_back(
            makeRecord("adjoint upper frame bound" + tag, ab.dUpper, rhs, ab.dUpperError()));
      }
    }
  });

  // 5. truncated integrals f_{a,b}(T) approach f_{0,inf} Id
  stage(rep, "limit of truncated integrals", [&] {
    // for odd f the integral over t s, s in the left sector, is -f_{0,inf}
    const double limit = f0Infty(e);
    const Eigen::MatrixXd target = limit * matrixSign(realRepresentation(t).matrix);
    double prev = 0.0, prevErr = 0.0;
    for (int k = 1; k <= cfg.fAbSteps; ++k) {
      const double a = std::pow(10.0, -k);
      const CalculusResult r = fAbOperator(e, a, 1.0 / a, t, report, cfg.contour);
      const double dist = spectralNorm(r.real - target);
      if (k > 1) {
        rep.records.push_back(makeRecord("truncated integral decrease[k=" + std::to_string(k) + "]", dist,
                                         1.1 * prev, r.errorBound() + 1.1 * prevErr,
                                         "distance to f_{0,inf} sign(T)"));
      }
      prev = dist;
      prevErr = r.errorBound();
    }
  });

  // 6. f(T*) = f(T)*
  stage(rep, "adjoint calculus", [&] {
    for (const auto& f : fs) {
      const AdjointGap gap = adjointCalculusCheck(f, t, report, adjReport, cfg.contour);
      rep.records.push_back(makeRecord("adjoint calculus[f=" + f.name() + "]", gap.gap, 0.0,
                                       gap.tolerance + 1e-12));
    }
  });

  // 7. dyadic sign identity and projector orthonormality
  stage(rep, "sign identity", [&] {
    const Eigen::VectorXd x = randomUnit(rng, t.realDim());
    const ModuleVector v = ModuleVector::fromFlat(t.n(), t.m(), x);
    const double tScale = report.normT > 0.0 ? 1.0 / report.normT : 1.0;
    const SignIdentity s = dyadicSignIdentity(gs.front(), t, v, tScale, cfg.signWindow, report, cfg.contour);
    rep.records.push_back(makeRecord("dyadic sign identity[g=" + gs.front().name() + "]",
                                     std::abs(s.lhs - s.rhs), 0.0, 1e-10 * std::max(1.0, s.lhs)));
    const Eigen::MatrixXd gram = signProjectorGram(2 * cfg.signWindow);
    const double dev = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    rep.records.push_back(makeRecord("sign projector orthonormality", dev, 0.0, 0.0));
  });

  // 8. discrete dual selection on g(tT)v samples, some of them zero
  stage(rep, "dual selection", [&] {
    if (frames.empty()) throw PreconditionError("no frame samples");
    const FrameSamples& S = frames.front().samples;
    const Eigen::VectorXd x = randomUnit(rng, t.realDim());
    std::vector<double> times;
    std::vector<ModuleVector> psi;
    for (std::size_t k = 0; k < S.g.size(); k += 16) {
      times.push_back(S.ts[k]);
      const Eigen::VectorXd y = (k / 16) % 3 == 2 ? Eigen::VectorXd::Zero(x.size()) : Eigen::VectorXd(S.g[k] * x);
      psi.push_back(ModuleVector::fromFlat(t.n(), t.m(), y));
    }
    const DualSamples ds = dualSelect(times, psi);
    double normGap = 0.0, pairingGap = 0.0;
    for (std::size_t k = 0; k < psi.size(); ++k) {
      const double np = psi[k].norm();
      normGap = std::max(normGap, std::abs(ds.psiEps[k].norm() - np));
      pairingGap = std::max(pairingGap, np * np - innerProduct(psi[k], ds.psiEps[k]).scalarPart() -
                                            1e-14 * np * np);
    }
    rep.records.push_back(makeRecord("dual selection norm", normGap, 0.0, 0.0));
    rep.records.push_back(makeRecord("dual selection pairing", pairingGap, 0.0, 0.0));
  });
  return rep;
}

namespace {

Json recordJson(const InequalityRecord& r) {
  Json j;
  j["name"] = r.name;
  j["lhs"] = std::isfinite(r.lhs) ? Json(r.lhs) : Json(nullptr);
  j["rhs"] = std::isfinite(r.rhs) ? Json(r.rhs) : Json(nullptr);
  j["tolerance"] = std::isfinite(r.tolerance) ? Json(r.tolerance) : Json(nullptr);
  j["margin"] = std::isfinite(r.margin) ? Json(r.margin) : Json(nullptr);
  j["pass"] = r.pass;
  if (r.oneSided) j["one_sided"] = true;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

Json configJson(const SuiteConfig& c) {
  Json j;
  j["omega"] = c.omega;
  j["theta"] = c.theta;
  j["phi"] = c.phi ? Json(*c.phi) : Json(nullptr);
  Json contour;
  if (c.contour.J) {
    Json jv = Json::array();
    for (double x : c.contour.J->imag()) jv.push_back(x);
    contour["J"] = std::move(jv);
  } else {
    contour["J"] = nullptr;
  }
  contour["u_min"] = c.contour.uMin;
  contour["u_max"] = c.contour.uMax;
  contour["nodes"] = c.contour.nodes;
  contour["rule"] = c.contour.rule == QuadratureRule::Trapezoid ? "trapezoid" : "gauss_kronrod";
  j["contour"] = std::move(contour);
  j["grid"] = {{"tMin", c.grid.tMin}, {"tMax", c.grid.tMax}, {"nodes", c.grid.nodes},
               {"relativeToNorm", c.grid.relativeToNorm}};
  Json phis = Json::array();
  for (double p : c.plan.phis) phis.push_back(p);
  j["ray_sampling"] = {{"phis", std::move(phis)},
                       {"radii", c.plan.radii},
                       {"radius_decades", c.plan.radiusDecades},
                       {"fan_angles", c.plan.fanAngles},
                       {"scan_nx", c.plan.scan.nx},
                       {"scan_ny", c.plan.scan.ny}};
  j["random_vectors"] = c.randomVectors;
  j["pointwise_pairs"] = c.pointwisePairs;
  j["integral_taus"] = c.integralTaus;
  j["truncation_steps"] = c.fAbSteps;
  j["sign_window"] = c.signWindow;
  j["function_args"] = c.functionArgs;
  j["g_args"] = c.gArgs;
  j["rng"] = "mt19937_64";
  j["seed"] = c.seed;
  return j;
}

Json parseDoc(const std::string& s) { return Json::parse(s); }

}  // namespace

std::string reportToJson(const VerificationReport& rep) {
  Json j;
  j["report_version"] = kReportVersion;
  j["operator_id"] = rep.operatorId;
  j["operator"] = parseDoc(operatorToJson(rep.op));
  j["seed"] = rep.config.seed;
  j["config"] = configJson(rep.config);
  j["frame_functions"] = rep.frameNames;
  j["functions"] = rep.functionNames;
  j["bisector"] = rep.bisector ? parseDoc(bisectorReportToJson(*rep.bisector)) : Json(nullptr);
  j["adjoint_bisector"] =
      rep.adjointBisector ? parseDoc(bisectorReportToJson(*rep.adjointBisector)) : Json(nullptr);
  Json frames = Json::array();
  for (const auto& f : rep.frames) {
    frames.push_back({{"g", f.g},
                      {"T", parseDoc(frameReportToJson(f.op))},
                      {"T*", parseDoc(frameReportToJson(f.adjoint))}});
  }
  j["frames"] = std::move(frames);
  Json norms = Json::array();
  for (const auto& n : rep.norms) {
    norms.push_back({{"f", n.f}, {"norm", n.norm}, {"error", n.error}, {"sup_norm", n.supNorm}});
  }
  j["norms"] = std::move(norms);
  Json stages = Json::array();
  for (const auto& s : rep.stages) {
    Json sj{{"name", s.name}, {"ok", s.ok}};
    if (!s.reason.empty()) sj["reason"] = s.reason;
    stages.push_back(std::move(sj));
  }
  j["stages"] = std::move(stages);
  Json records = Json::array();
  std::size_t failed = 0;
  for (const auto& r : rep.records) {
    records.push_back(recordJson(r));
    if (!r.pass) ++failed;
  }
  j["records"] = std::move(records);
  j["summary"] = {{"records", rep.records.size()},
                  {"failed", failed},
                  {"all_pass", rep.allPass()},
                  {"exit_code", rep.exitCode()}};
  return j.dump(2) + "\n";
}

void emitHeatmap(const CliffordOperator& t, const ScanGrid& grid, const std::string& path) {
  const SpectrumScan scan = scanSpectrumSlice(t, grid);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  writeScanCsv(scan, out);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace sspec
