#pragma once

// Pseudo-resolvent, S-resolvents, S-spectrum scans on the (x, |Im s|) half
// plane, and bisectoriality certificates.

#include <Eigen/Dense>
#include <vector>

#include "sspec/clifford.hpp"
#include "sspec/module.hpp"

namespace sspec {

/// Q_s[T] = T^2 - 2 s0 T + |s|^2. Depends on s only through (s0, |s|).
CliffordOperator qOperator(const Paravector& s, const CliffordOperator& t);

struct PseudoResolventPoint {
  Paravector s;
  CliffordOperator q;
  double sigmaMin;
};
PseudoResolventPoint pseudoResolvent(const Paravector& s, const CliffordOperator& t);

/// Q_s^{-1} s-bar - T Q_s^{-1}. Throws NotInvertibleError inside the numerical S-spectrum.
CliffordOperator leftSResolvent(const Paravector& s, const CliffordOperator& t);
/// (s-bar - T) Q_s^{-1}.
CliffordOperator rightSResolvent(const Paravector& s, const CliffordOperator& t);

/// Precomputed real-representation data for evaluating S_L^{-1} at many
/// points x + J y of one slice. Read-only after construction.
class SliceResolvent {
 public:
  SliceResolvent(const CliffordOperator& t, const Paravector& J);

  int dim() const noexcept { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXd& rho() const noexcept { return rho_; }
  /// Real matrix of left multiplication by J on V.
  const Eigen::MatrixXd& leftJ() const noexcept { return leftJ_; }

  struct Value {
    Eigen::MatrixXd matrix;  // rho(S_L^{-1}(x + J y, T))
    double rcond;            // reciprocal condition estimate of Q_s
  };
  /// Throws NotInvertibleError when Q_s is numerically singular.
  Value left(double x, double y) const;

  /// sigma_min and sigma_max of rho(Q_s) at s = x + J y (any J).
  SingularRange qSingularRange(double x, double y) const;
  /// ||T||^2 + 2|x| ||T|| + x^2 + y^2, the size of the terms of Q_s. Singularity
  /// is judged against this rather than sigma_max(Q_s), which vanishes with
  /// sigma_min when Q_s is a multiple of an isometry.
  double qScale(double x, double y) const noexcept;

 private:
  Eigen::MatrixXd rho_;
  Eigen::MatrixXd rho2_;
  Eigen::MatrixXd leftJ_;
  double norm_ = 0.0;
};

struct ScanGrid {
  double xMin = -1.0, xMax = 1.0;
  double yMin = 0.0, yMax = 1.0;
  int nx = 41, ny = 21;

  double dx() const noexcept { return nx > 1 ? (xMax - xMin) / (nx - 1) : 0.0; }
  double dy() const noexcept { return ny > 1 ? (yMax - yMin) / (ny - 1) : 0.0; }
  double x(int i) const noexcept { return xMin + i * dx(); }
  double y(int j) const noexcept { return yMin + j * dy(); }
};

struct SpectrumDetection {
  int i = 0, j = 0;          // grid node
  double x = 0.0, y = 0.0;   // node coordinates
  double refinedX = 0.0, refinedY = 0.0;
  double sigmaMin = 0.0;     // at the refined point
  double sigmaMax = 0.0;
  bool real() const noexcept { return j == 0 && y == 0.0; }
};

/// sigma_min of rho(Q_s) over a grid, row-major in y then x:
/// values[j * nx + i] belongs to (x(i), y(j)).
struct SpectrumScan {
  ScanGrid grid;
  std::vector<double> sigmaMin;
  std::vector<double> sigmaMax;
  std::vector<SpectrumDetection> detections;

  double value(int i, int j) const { return sigmaMin[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// Detection threshold relative to SliceResolvent::qScale; the same tolerance
/// as the invertibility guard.
inline constexpr double kSpectrumTol = kInvertibilityTol;

/// Throws ArgumentError for empty or inverted grids and for yMin < 0.
SpectrumScan scanSpectrumSlice(const CliffordOperator& t, const ScanGrid& grid);

/// Requested angles and resolution for the C_phi sampling.
struct RaySamplingPlan {
  std::vector<double> phis;  // each in (omega, pi/2); empty -> a default ladder
  int radii = 201;           // log-spaced in [1e-4, 1e4] * ||T||
  double radiusDecades = 4.0;
  int fanAngles = 8;         // extra angles between max(phis) and pi/2
  ScanGrid scan{0, 0, 0, 0, 81, 41};  // extents are filled from ||T||
};

struct CPhiEntry {
  double phi;
  double cPhi;  // +inf if the ray met the numerical spectrum
};

struct BisectorReport {
  double omega = 0.0;
  bool injective = false;
  double injectivitySigmaMin = 0.0;
  double injectivitySigmaMax = 0.0;
  bool spectrumInSector = false;
  std::vector<CPhiEntry> cPhiTable;  // ascending phi, nonincreasing cPhi
  std::vector<SpectrumDetection> detections;
  double normT = 0.0;

  bool cPhiFinite() const noexcept;
  /// Spectrum inside the closed sector and every sampled C_phi finite.
  bool bisectorial() const noexcept { return spectrumInSector && cPhiFinite(); }
  /// C at the largest tabulated angle <= phi. Throws PreconditionError if none.
  double cPhiAt(double phi) const;
};

/// The sampled value at angle psi is the max over rays at angles >= psi, so
/// the table is monotone by construction.
BisectorReport checkBisectorial(const CliffordOperator& t, double omega,
                                const RaySamplingPlan& plan = {});

}  // namespace sspec
