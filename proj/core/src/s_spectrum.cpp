#include "sspec/s_spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "parallel.hpp"
#include "sspec/errors.hpp"

namespace sspec {

namespace {

Eigen::MatrixXd qMatrix(const Eigen::MatrixXd& rho, const Eigen::MatrixXd& rho2, double x,
                        double y) {
  Eigen::MatrixXd q = rho2 - 2.0 * x * rho;
  q.diagonal().array() += x * x + y * y;
  return q;
}

// Plain Nelder-Mead in two variables; enough to pull a grid local minimum of
// sigma_min onto the zero it sits next to.
template <class F>
std::array<double, 2> nelderMead(F&& f, std::array<double, 2> start, std::array<double, 2> step,
                                 int maxIter) {
  std::array<std::array<double, 2>, 3> p{start, start, start};
  p[1][0] += step[0];
  p[2][1] += step[1];
  std::array<double, 3> v{f(p[0]), f(p[1]), f(p[2])};
  auto point = [](const std::array<double, 2>& a, const std::array<double, 2>& b, double t) {
    return std::array<double, 2>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
  };
  for (int it = 0; it < maxIter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
    const auto best = p[idx[0]];
    const auto mid = p[idx[1]];
    const auto worst = p[idx[2]];
    const double size = std::max(std::abs(worst[0] - best[0]) + std::abs(mid[0] - best[0]),
                                 std::abs(worst[1] - best[1]) + std::abs(mid[1] - best[1]));
    if (size < 1e-15 * (1.0 + std::abs(best[0]) + std::abs(best[1])) || v[idx[0]] == 0.0) break;
    const std::array<double, 2> centroid{0.5 * (best[0] + mid[0]), 0.5 * (best[1] + mid[1])};
    const auto reflected = point(centroid, worst, -1.0);
    const double fr = f(reflected);
    if (fr < v[idx[0]]) {
      const auto expanded = point(centroid, worst, -2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        p[idx[2]] = expanded;
        v[idx[2]] = fe;
      } else {
        p[idx[2]] = reflected;
        v[idx[2]] = fr;
      }
      continue;
    }
    if (fr < v[idx[1]]) {
      p[idx[2]] = reflected;
      v[idx[2]] = fr;
      continue;
    }
    const auto contracted = point(centroid, worst, 0.5);
    const double fc = f(contracted);
    if (fc < v[idx[2]]) {
      p[idx[2]] = contracted;
      v[idx[2]] = fc;
      continue;
    }
    for (int k : {idx[1], idx[2]}) {
      p[k] = point(best, p[k], 0.5);
      v[k] = f(p[k]);
    }
  }
  int bestIdx = 0;
  for (int k = 1; k < 3; ++k) {
    if (v[k] < v[bestIdx]) bestIdx = k;
  }
  return p[bestIdx];
}

}  // namespace

CliffordOperator qOperator(const Paravector& s, const CliffordOperator& t) {
  if (s.n() != t.n()) throw DimensionError("paravector and operator live in different algebras");
  CliffordOperator q = t * t;
  q -= t * (2.0 * s.s0());
  q += CliffordOperator::identity(t.n(), t.m()) * s.absSquared();
  return q;
}

PseudoResolventPoint pseudoResolvent(const Paravector& s, const CliffordOperator& t) {
  CliffordOperator q = qOperator(s, t);
  const double smin = singularRange(realRepresentation(q).matrix).min;
  return {s, std::move(q), smin};
}

CliffordOperator leftSResolvent(const Paravector& s, const CliffordOperator& t) {
  const OperatorSolver q(qOperator(s, t));
  const Eigen::MatrixXd rhs =
      blockLeftMultiplication(s.conjugate().toClifford(), t.m()) - realRepresentation(t).matrix;
  // T commutes with Q_s^{-1}, so Q^{-1} s-bar - T Q^{-1} = Q^{-1}(s-bar - T).
  return fromRealRepresentation(t.n(), t.m(), q.solve(rhs));
}

CliffordOperator rightSResolvent(const Paravector& s, const CliffordOperator& t) {
  const Eigen::MatrixXd q = realRepresentation(qOperator(s, t)).matrix;
  const OperatorSolver solver(q);
  const Eigen::MatrixXd lhs =
      blockLeftMultiplication(s.conjugate().toClifford(), t.m()) - realRepresentation(t).matrix;
  // X = lhs Q^{-1}  <=>  Q^T X^T = lhs^T
  const OperatorSolver solverT(Eigen::MatrixXd(q.transpose()));
  const Eigen::MatrixXd x = solverT.solve(Eigen::MatrixXd(lhs.transpose())).transpose();
  return fromRealRepresentation(t.n(), t.m(), x);
}

SliceResolvent::SliceResolvent(const CliffordOperator& t, const Paravector& J) {
  if (!isImaginaryUnit(J)) throw ArgumentError("slice unit J must satisfy J^2 = -1");
  if (J.n() != t.n()) throw DimensionError("slice unit lives in a different algebra");
  rho_ = realRepresentation(t).matrix;
  rho2_ = rho_ * rho_;
  leftJ_ = blockLeftMultiplication(J.toClifford(), t.m());
  norm_ = singularRange(rho_).max;
}

double SliceResolvent::qScale(double x, double y) const noexcept {
  return norm_ * norm_ + 2.0 * std::abs(x) * norm_ + x * x + y * y;
}

SliceResolvent::Value SliceResolvent::left(double x, double y) const {
  const Eigen::MatrixXd q = qMatrix(rho_, rho2_, x, y);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(q);
  const double rcond = lu.rcond();
  // rcond estimates 1/kappa_1 >= 1/(d kappa_2), and rcond ||Q||_1 estimates sigma_min
  const double smin = rcond * q.cwiseAbs().colwise().sum().maxCoeff();
  if (!(rcond > kInvertibilityTol / dim()) || !(smin > kInvertibilityTol * qScale(x, y))) {
    throw NotInvertibleError("Q_s singular at x=" + std::to_string(x) + ", y=" + std::to_string(y),
                             rcond, 1.0);
  }
  Eigen::MatrixXd rhs = -y * leftJ_ - rho_;
  rhs.diagonal().array() += x;
  Eigen::MatrixXd s = lu.solve(rhs);
  s += lu.solve(rhs - q * s);
  return {std::move(s), rcond};
}

SingularRange SliceResolvent::qSingularRange(double x, double y) const {
  return singularRange(qMatrix(rho_, rho2_, x, y));
}

SpectrumScan scanSpectrumSlice(const CliffordOperator& t, const ScanGrid& grid) {
  if (grid.nx < 1 || grid.ny < 1) throw ArgumentError("scan grid is empty");
  if (grid.xMax < grid.xMin || grid.yMax < grid.yMin) throw ArgumentError("scan grid is inverted");
  if (grid.yMin < 0.0) throw ArgumentError("scan grid must satisfy y >= 0");
  if ((grid.nx > 1 && grid.xMax == grid.xMin) || (grid.ny > 1 && grid.yMax == grid.yMin)) {
    throw ArgumentError("scan grid has zero extent with several nodes");
  }

  const SliceResolvent kernel(t, Paravector::unit(t.n(), 1));
  SpectrumScan scan;
  scan.grid = grid;
  const std::ptrdiff_t total = static_cast<std::ptrdiff_t>(grid.nx) * grid.ny;
  scan.sigmaMin.assign(total, 0.0);
  scan.sigmaMax.assign(total, 0.0);
  detail::parallelFor(total, [&](std::ptrdiff_t k) {
    const int i = static_cast<int>(k % grid.nx);
    const int j = static_cast<int>(k / grid.nx);
    const SingularRange r = kernel.qSingularRange(grid.x(i), grid.y(j));
    scan.sigmaMin[k] = r.min;
    scan.sigmaMax[k] = r.max;
  });

  // local minima over the 8-neighbourhood
  std::vector<std::pair<int, int>> candidates;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const double v = scan.value(i, j);
      bool isMin = true;
      for (int dj = -1; dj <= 1 && isMin; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || jj < 0 || ii >= grid.nx || jj >= grid.ny) continue;
          if (scan.value(ii, jj) < v) {
            isMin = false;
            break;
          }
        }
      }
      if (isMin) candidates.emplace_back(i, j);
    }
  }

  const double scale = std::max({std::abs(grid.xMin), std::abs(grid.xMax), grid.yMax, 1e-300});
  const double hx = grid.nx > 1 ? grid.dx() : scale;
  const double hy = grid.ny > 1 ? grid.dy() : scale;
  std::vector<SpectrumDetection> found(candidates.size());
  std::vector<char> accepted(candidates.size(), 0);
  detail::parallelFor(static_cast<std::ptrdiff_t>(candidates.size()), [&](std::ptrdiff_t c) {
    const auto [i, j] = candidates[c];
    auto objective = [&](const std::array<double, 2>& p) {
      const SingularRange r = kernel.qSingularRange(p[0], std::abs(p[1]));
      const double ref = kernel.qScale(p[0], p[1]);
      return ref > 0.0 ? r.min / ref : 0.0;
    };
    const auto best =
        nelderMead(objective, {grid.x(i), grid.y(j)}, {0.5 * hx, 0.5 * hy}, 2000);
    const double rx = best[0];
    const double ry = std::abs(best[1]);
    const SingularRange r = kernel.qSingularRange(rx, ry);
    const bool near = std::abs(rx - grid.x(i)) <= 1.5 * hx && std::abs(ry - grid.y(j)) <= 1.5 * hy;
    if (!(r.min <= kSpectrumTol * kernel.qScale(rx, ry)) || !near) return;
    SpectrumDetection d;
    d.i = grid.nx > 1 ? std::clamp(static_cast<int>(std::lround((rx - grid.xMin) / hx)), 0, grid.nx - 1) : 0;
    d.j = grid.ny > 1 ? std::clamp(static_cast<int>(std::lround((ry - grid.yMin) / hy)), 0, grid.ny - 1) : 0;
    d.x = grid.x(d.i);
    d.y = grid.y(d.j);
    d.refinedX = rx;
    d.refinedY = ry;
    d.sigmaMin = r.min;
    d.sigmaMax = r.max;
    found[c] = d;
    accepted[c] = 1;
  });

  // merge candidates that converged to the same point
  for (std::size_t c = 0; c < found.size(); ++c) {
    if (!accepted[c]) continue;
    const SpectrumDetection& d = found[c];
    bool merged = false;
    for (auto& e : scan.detections) {
      if (std::abs(e.refinedX - d.refinedX) <= hx && std::abs(e.refinedY - d.refinedY) <= hy) {
        if (d.sigmaMin < e.sigmaMin) e = d;
        merged = true;
        break;
      }
    }
    if (!merged) scan.detections.push_back(d);
  }
  std::sort(scan.detections.begin(), scan.detections.end(),
            [](const SpectrumDetection& a, const SpectrumDetection& b) {
              return a.refinedX != b.refinedX ? a.refinedX < b.refinedX : a.refinedY < b.refinedY;
            });
  return scan;
}

bool BisectorReport::cPhiFinite() const noexcept {
  if (cPhiTable.empty()) return false;
  return std::all_of(cPhiTable.begin(), cPhiTable.end(),
                     [](const CPhiEntry& e) { return std::isfinite(e.cPhi); });
}

double BisectorReport::cPhiAt(double phi) const {
  const CPhiEntry* best = nullptr;
  for (const auto& e : cPhiTable) {
    if (e.phi <= phi + 1e-15) best = &e;
  }
  if (best == nullptr) {
    throw PreconditionError("no resolvent bound sampled at or below angle " + std::to_string(phi));
  }
  return best->cPhi;
}

BisectorReport checkBisectorial(const CliffordOperator& t, double omega,
                                const RaySamplingPlan& plan) {
  const DoubleSector sector(omega);
  constexpr double halfPi = std::numbers::pi / 2;
  BisectorReport report;
  report.omega = omega;

  const RealRepresentation rho = realRepresentation(t);
  const SingularRange tr = singularRange(rho.matrix);
  report.normT = tr.max;
  report.injectivitySigmaMin = tr.min;
  report.injectivitySigmaMax = tr.max;
  report.injective = tr.min > kInvertibilityTol * tr.max;
  const double scale = tr.max > 0.0 ? tr.max : 1.0;

  // containment
  ScanGrid grid = plan.scan;
  if (grid.nx < 3) grid.nx = 81;
  if (grid.ny < 2) grid.ny = 41;
  if (grid.nx % 2 == 0) ++grid.nx;
  grid.xMin = -1.05 * scale;
  grid.xMax = 1.05 * scale;
  grid.yMin = 0.0;
  grid.yMax = 1.05 * scale;
  const SpectrumScan scan = scanSpectrumSlice(t, grid);
  report.detections = scan.detections;
  report.spectrumInSector = true;
  for (const auto& d : scan.detections) {
    const double r = std::hypot(d.refinedX, d.refinedY);
    if (r <= 1e-6 * scale) continue;  // the origin belongs to the closed sector
    const double ang = std::atan2(d.refinedY, d.refinedX);
    // refined points carry ~1e-8 of location noise, hence the angular slack
    const bool inside = sector.containsClosure(d.refinedX, d.refinedY) || ang <= omega + 1e-6 ||
                        ang >= std::numbers::pi - omega - 1e-6;
    if (!inside) report.spectrumInSector = false;
  }

  // resolvent bound on rays
  std::vector<double> phis = plan.phis;
  if (phis.empty()) {
    for (int k = 1; k <= 5; ++k) phis.push_back(omega + k * (halfPi - omega) / 6.0);
  }
  for (double p : phis) {
    if (!(p > omega && p <= halfPi)) {
      throw ArgumentError("sampling angle " + std::to_string(p) + " outside (omega, pi/2]");
    }
  }
  std::sort(phis.begin(), phis.end());
  phis.erase(std::unique(phis.begin(), phis.end()), phis.end());
  std::vector<double> angles = phis;
  const double top = phis.back();
  for (int k = 1; k <= plan.fanAngles; ++k) angles.push_back(top + k * (halfPi - top) / plan.fanAngles);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

  const int nr = std::max(plan.radii, 2);
  const SliceResolvent kernel(t, Paravector::unit(t.n(), 1));
  const std::ptrdiff_t perAngle = 4 * static_cast<std::ptrdiff_t>(nr);
  std::vector<double> values(angles.size() * perAngle, 0.0);
  detail::parallelFor(static_cast<std::ptrdiff_t>(values.size()), [&](std::ptrdiff_t k) {
    const double psi = angles[k / perAngle];
    const int ray = static_cast<int>((k % perAngle) / nr);
    const int ir = static_cast<int>(k % nr);
    const double logr = -plan.radiusDecades + 2.0 * plan.radiusDecades * ir / (nr - 1);
    const double r = scale * std::pow(10.0, logr);
    const double sx = (ray < 2 ? 1.0 : -1.0) * r * std::cos(psi);
    const double sy = (ray % 2 == 0 ? 1.0 : -1.0) * r * std::sin(psi);
    try {
      const auto v = kernel.left(sx, sy);
      values[k] = r * spectralNorm(v.matrix);
      if (!std::isfinite(values[k])) values[k] = std::numeric_limits<double>::infinity();
    } catch (const NotInvertibleError&) {
      values[k] = std::numeric_limits<double>::infinity();
    }
  });

  std::vector<double> perAngleMax(angles.size(), 0.0);
  for (std::size_t a = 0; a < angles.size(); ++a) {
    for (std::ptrdiff_t k = 0; k < perAngle; ++k) {
      perAngleMax[a] = std::max(perAngleMax[a], values[a * perAngle + k]);
    }
  }
  double running = 0.0;
  report.cPhiTable.resize(angles.size());
  for (std::size_t a = angles.size(); a-- > 0;) {
    running = std::max(running, perAngleMax[a]);
    report.cPhiTable[a] = {angles[a], running};
  }
  return report;
}

}  // namespace sspec
