// sspec: S-spectrum scans, bisectoriality, calculi, frame bounds and the
// inequality suite from the command line.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sspec/errors.hpp"
#include "sspec/io.hpp"
#include "sspec/threads.hpp"
#include "sspec/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitPrecondition = 2;

struct Options {
  std::string operatorPath;
  std::vector<std::string> functions;
  std::vector<std::string> gs;
  double omega = 0.1;
  double theta = 1.2;
  std::vector<double> phis;
  std::string grid;
  int nodes = 2000;
  std::uint64_t seed = 0;
  std::string out;
  bool adjoint = false;
};

std::vector<double> splitNumbers(const std::string& s, char sep, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw sspec::ArgumentError(what + ": cannot read \"" + part + "\"");
    }
  }
  return out;
}

// "xmin:xmax:nx,ymin:ymax:ny"
sspec::ScanGrid parseScanGrid(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw sspec::ArgumentError("--grid: expected xmin:xmax:nx,ymin:ymax:ny");
  const auto x = splitNumbers(s.substr(0, comma), ':', "--grid");
  const auto y = splitNumbers(s.substr(comma + 1), ':', "--grid");
  if (x.size() != 3 || y.size() != 3) throw sspec::ArgumentError("--grid: expected xmin:xmax:nx,ymin:ymax:ny");
  return {x[0], x[1], y[0], y[1], static_cast<int>(x[2]), static_cast<int>(y[2])};
}

// "tmin:tmax:nodes", relative to ||T||
sspec::QuadGridConfig parseTGrid(const std::string& s) {
  sspec::QuadGridConfig q;
  if (s.empty()) return q;
  const auto v = splitNumbers(s, ':', "--grid");
  if (v.size() != 3) throw sspec::ArgumentError("--grid: expected tmin:tmax:nodes");
  q.tMin = v[0];
  q.tMax = v[1];
  q.nodes = static_cast<int>(v[2]);
  return q;
}

void emit(const Options& o, const std::string& content) {
  if (o.out.empty() || o.out == "-") {
    std::cout << content;
  } else {
    sspec::writeTextFile(o.out, content);
  }
}

sspec::RaySamplingPlan planFor(const Options& o) {
  sspec::RaySamplingPlan plan;
  plan.phis = o.phis;
  return plan;
}

sspec::ContourConfig contourFor(const Options& o) {
  sspec::ContourConfig c;
  c.nodes = o.nodes;
  if (!o.phis.empty()) c.phi = o.phis.front();
  return c;
}

sspec::IntrinsicFunction single(const std::string& arg, double theta, const char* flag) {
  auto fs = sspec::resolveFunctionArg(arg, theta);
  if (fs.size() != 1) throw sspec::ArgumentError(std::string(flag) + ": expected a single function");
  return fs.front();
}

// Reports pinned by the contour angle need it in the sampled table.
sspec::BisectorReport certify(const sspec::CliffordOperator& t, const Options& o) {
  auto plan = planFor(o);
  const double phi = o.phis.empty() ? 0.5 * (o.omega + o.theta) : o.phis.front();
  plan.phis = {phi, o.theta};
  auto report = sspec::checkBisectorial(t, o.omega, plan);
  if (!report.bisectorial()) {
    throw sspec::PreconditionError("operator is not bisectorial for omega = " + std::to_string(o.omega));
  }
  return report;
}

int runSpectrum(const Options& o) {
  const auto t = sspec::parseOperatorFile(o.operatorPath);
  sspec::ScanGrid grid;
  if (o.grid.empty()) {
    const double r = 1.5 * std::max(sspec::operatorNorm(t), 1e-300);
    grid = {-r, r, 0.0, r, 121, 61};
  } else {
    grid = parseScanGrid(o.grid);
  }
  if (o.out.empty() || o.out == "-") {
    sspec::writeScanCsv(sspec::scanSpectrumSlice(t, grid), std::cout);
  } else {
    sspec::emitHeatmap(t, grid, o.out);
  }
  return 0;
}

int runBisect(const Options& o) {
  const auto t = sspec::parseOperatorFile(o.operatorPath);
  const auto report = sspec::checkBisectorial(t, o.omega, planFor(o));
  emit(o, sspec::bisectorReportToJson(report));
  return report.bisectorial() ? 0 : kExitFail;
}

int runCalc(const Options& o) {
  const auto t = sspec::parseOperatorFile(o.operatorPath);
  if (o.functions.size() != 1) throw sspec::ArgumentError("calc: exactly one --function is required");
  const auto f = single(o.functions.front(), o.theta, "--function");
  const auto report = certify(t, o);
  emit(o, sspec::calculusResultToJson(sspec::functionalCalculus(f, t, report, contourFor(o))));
  return 0;
}

int runFrame(const Options& o) {
  const auto t = sspec::parseOperatorFile(o.operatorPath);
  const auto g = o.gs.empty() ? sspec::regularizer(o.theta) : single(o.gs.front(), o.theta, "--g");
  const auto op = o.adjoint ? sspec::adjointOperator(t) : t;
  const auto report = certify(op, o);
  emit(o, sspec::frameReportToJson(sspec::frameBounds(g, op, report, parseTGrid(o.grid), contourFor(o))));
  return 0;
}

int runVerify(const Options& o) {
  const auto t = sspec::parseOperatorFile(o.operatorPath);
  std::vector<sspec::IntrinsicFunction> gs, fs;
  for (const auto& a : o.gs) {
    for (auto& f : sspec::resolveFunctionArg(a, o.theta)) gs.push_back(std::move(f));
  }
  for (const auto& a : o.functions) {
    for (auto& f : sspec::resolveFunctionArg(a, o.theta)) fs.push_back(std::move(f));
  }
  sspec::SuiteConfig cfg;
  cfg.omega = o.omega;
  cfg.theta = o.theta;
  if (!o.phis.empty()) cfg.phi = o.phis.front();
  cfg.contour.nodes = o.nodes;
  cfg.grid = parseTGrid(o.grid);
  cfg.seed = o.seed;
  cfg.functionArgs = o.functions;
  cfg.gArgs = o.gs;
  const auto report = sspec::runTheoremSuite(t, gs, fs, cfg, o.operatorPath);
  emit(o, sspec::reportToJson(report));
  for (const auto& s : report.stages) {
    if (!s.ok) std::cerr << "stage " << s.name << ": " << s.reason << "\n";
  }
  for (const auto& r : report.records) {
    if (!r.pass) std::cerr << "FAIL " << r.name << ": lhs " << r.lhs << " rhs " << r.rhs << "\n";
  }
  return report.exitCode();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"S-spectrum calculus and quadratic-estimate verifier"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (default: $SSPEC_JOBS, else all cores)")
      ->check(CLI::NonNegativeNumber);

  Options o;
  auto common = [&o](CLI::App* sub) {
    sub->add_option("--operator", o.operatorPath, "operator JSON file")->required();
    sub->add_option("--out", o.out, "output file (default stdout)");
  };
  auto angles = [&o](CLI::App* sub) {
    sub->add_option("--omega", o.omega, "sector angle omega")->capture_default_str();
    sub->add_option("--theta", o.theta, "function sector angle theta")->capture_default_str();
    sub->add_option("--phi", o.phis, "contour angle; for bisect, the angles to sample");
    sub->add_option("--nodes", o.nodes, "quadrature nodes per ray")->capture_default_str();
  };

  auto* spectrum = app.add_subcommand("spectrum", "sigma_min heatmap of the S-spectrum on one slice");
  common(spectrum);
  spectrum->add_option("--grid", o.grid, "xmin:xmax:nx,ymin:ymax:ny");

  auto* bisect = app.add_subcommand("bisect", "bisectoriality certificate with the C_phi table");
  common(bisect);
  bisect->add_option("--omega", o.omega, "sector angle omega")->capture_default_str();
  bisect->add_option("--phi", o.phis, "angles to sample");

  auto* calc = app.add_subcommand("calc", "f(T) by contour quadrature");
  common(calc);
  angles(calc);
  calc->add_option("--function", o.functions, "registry entry: file, inline JSON or builtin name")->required();

  auto* frame = app.add_subcommand("frame", "frame bounds of g(tT) over dt/|t|");
  common(frame);
  angles(frame);
  frame->add_option("--g", o.gs, "frame function (default: regularizer)");
  frame->add_option("--grid", o.grid, "tmin:tmax:nodes, relative to ||T||");
  frame->add_flag("--adjoint", o.adjoint, "use T* instead of T");

  auto* verify = app.add_subcommand("verify", "run the full inequality suite");
  common(verify);
  angles(verify);
  verify->add_option("--function", o.functions, "registry entries (default: built-in registry)");
  verify->add_option("--g", o.gs, "frame functions (default: e, e^2, g3)");
  verify->add_option("--grid", o.grid, "tmin:tmax:nodes, relative to ||T||");
  verify->add_option("--seed", o.seed, "seed for sampled checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitPrecondition;
  }
  if (jobs > 0) sspec::setThreadCount(jobs);

  try {
    if (*spectrum) return runSpectrum(o);
    if (*bisect) return runBisect(o);
    if (*calc) return runCalc(o);
    if (*frame) return runFrame(o);
    return runVerify(o);
  } catch (const std::exception& e) {
    std::cerr << "sspec: " << e.what() << "\n";
    return kExitPrecondition;
  }
}
