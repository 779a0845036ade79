#include "sspec/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <ostream>
#include <sstream>

#include "sspec/errors.hpp"

namespace sspec {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kMaxN = 6;

std::string where(std::size_t byte, const std::string& text) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parseText(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("malformed JSON at " + where(e.byte == 0 ? 0 : e.byte - 1, text) + ": " +
                      e.what());
  }
}

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + ": missing field \"" + key + "\"");
  return *it;
}

double number(const Json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(path + ": expected a finite number");
  return x;
}

int integer(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw SchemaError(path + ": expected an integer");
  return v.get<int>();
}

void checkDims(int n, int m) {
  if (n < 1 || n > kMaxN) throw SchemaError("n: must lie in 1.." + std::to_string(kMaxN));
  if (m < 1) throw SchemaError("m: must be positive");
}

CliffordNum cliffordFrom(const Json& v, int n, const std::string& path) {
  const std::size_t want = std::size_t{1} << n;
  if (!v.is_array()) throw SchemaError(path + ": expected an array of " + std::to_string(want) + " coefficients");
  if (v.size() != want) {
    throw SchemaError(path + ": expected " + std::to_string(want) + " coefficients, got " +
                      std::to_string(v.size()));
  }
  std::vector<double> c(want);
  for (std::size_t a = 0; a < want; ++a) c[a] = number(v[a], path + "[" + std::to_string(a) + "]");
  return CliffordNum(n, std::move(c));
}

Json cliffordTo(const CliffordNum& s) {
  Json a = Json::array();
  for (double c : s.coeffs()) a.push_back(c);
  return a;
}

Json operatorJson(const CliffordOperator& t) {
  Json j;
  j["n"] = t.n();
  j["m"] = t.m();
  Json rows = Json::array();
  for (int i = 0; i < t.m(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < t.m(); ++k) row.push_back(cliffordTo(t(i, k)));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  return j;
}

// Infinite constants (a ray met the spectrum) serialize as null.
Json finiteOrNull(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json detectionJson(const SpectrumDetection& d) {
  Json j;
  j["i"] = d.i;
  j["j"] = d.j;
  j["x"] = d.x;
  j["y"] = d.y;
  j["refined_x"] = d.refinedX;
  j["refined_y"] = d.refinedY;
  j["sigma_min"] = d.sigmaMin;
  j["sigma_max"] = d.sigmaMax;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- function registry ----

double paramOr(const Json& params, const char* key, double fallback, const std::string& path) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : number(*it, path + ".params." + key);
}

std::vector<double> coefficients(const Json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw SchemaError(path + ": expected a nonempty array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

IntrinsicFunction resolveEntry(const Json& entry, double theta, const std::string& path);

IntrinsicFunction resolveChild(const Json& params, const char* key, double theta,
                               const std::string& path) {
  return resolveEntry(field(params, key, path + ".params"), theta, path + ".params." + key);
}

std::vector<IntrinsicFunction> resolveList(const Json& params, const char* key, double theta,
                                           const std::string& path) {
  const Json& list = field(params, key, path + ".params");
  const std::string lp = path + ".params." + key;
  if (!list.is_array() || list.size() < 2) throw SchemaError(lp + ": expected at least two entries");
  std::vector<IntrinsicFunction> out;
  for (std::size_t k = 0; k < list.size(); ++k) {
    out.push_back(resolveEntry(list[k], theta, lp + "[" + std::to_string(k) + "]"));
  }
  return out;
}

IntrinsicFunction build(const std::string& name, const Json& params, double theta,
                        const std::string& path) {
  if (name == "regularizer") return regularizer(theta);
  if (name == "e_alpha") {
    return eAlphaFamily(number(field(params, "alpha", path + ".params"), path + ".params.alpha"), theta);
  }
  if (name == "constant") {
    return constantFunction(number(field(params, "value", path + ".params"), path + ".params.value"), theta);
  }
  if (name == "rational") {
    return rationalFunction(coefficients(field(params, "num", path + ".params"), path + ".params.num"),
                            coefficients(field(params, "den", path + ".params"), path + ".params.den"),
                            theta);
  }
  if (name == "scaled") {
    const double t = number(field(params, "t", path + ".params"), path + ".params.t");
    return scaleFunction(resolveChild(params, "f", theta, path), t);
  }
  if (name == "f_ab") {
    const double a = number(field(params, "a", path + ".params"), path + ".params.a");
    const double b = number(field(params, "b", path + ".params"), path + ".params.b");
    return fAbFunction(resolveChild(params, "f", theta, path), a, b);
  }
  if (name == "product" || name == "sum") {
    const auto parts = resolveList(params, name == "product" ? "factors" : "terms", theta, path);
    IntrinsicFunction acc = parts.front();
    for (std::size_t k = 1; k < parts.size(); ++k) {
      acc = name == "product" ? productFunction(acc, parts[k]) : sumFunction(acc, parts[k]);
    }
    return acc;
  }
  throw SchemaError(path + ".name: unknown builtin \"" + name + "\"");
}

IntrinsicFunction resolveEntry(const Json& entry, double theta, const std::string& path) {
  const Json& nameJson = field(entry, "name", path);
  if (!nameJson.is_string()) throw SchemaError(path + ".name: expected a string");
  const std::string name = nameJson.get<std::string>();
  static const Json empty = Json::object();
  const auto pit = entry.find("params");
  const Json& params = pit == entry.end() ? empty : *pit;
  if (!params.is_object()) throw SchemaError(path + ".params: expected an object");
  const double th = paramOr(params, "theta", theta, path);
  std::optional<double> alpha;
  if (params.contains("decay_alpha")) alpha = number(params["decay_alpha"], path + ".params.decay_alpha");
  try {
    IntrinsicFunction f = withSampledCertificates(build(name, params, th, path), alpha);
    if (const auto it = entry.find("label"); it != entry.end()) {
      if (!it->is_string()) throw SchemaError(path + ".label: expected a string");
      f = f.renamed(it->get<std::string>());
    }
    return f;
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

}  // namespace

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

CliffordOperator parseOperatorJson(const std::string& text) {
  const Json j = parseText(text);
  const int n = integer(field(j, "n", "operator"), "n");
  const int m = integer(field(j, "m", "operator"), "m");
  checkDims(n, m);
  const Json& rows = field(j, "matrix", "operator");
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(m)) {
    throw SchemaError("matrix: expected " + std::to_string(m) + " rows");
  }
  std::vector<CliffordNum> entries;
  for (int i = 0; i < m; ++i) {
    const Json& row = rows[i];
    const std::string rp = "matrix[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != static_cast<std::size_t>(m)) {
      throw SchemaError(rp + ": expected " + std::to_string(m) + " entries (operator must be square)");
    }
    for (int k = 0; k < m; ++k) entries.push_back(cliffordFrom(row[k], n, rp + "[" + std::to_string(k) + "]"));
  }
  return CliffordOperator(n, m, std::move(entries));
}

CliffordOperator parseOperatorFile(const std::string& path) {
  try {
    return parseOperatorJson(readTextFile(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::string operatorToJson(const CliffordOperator& t) { return dump(operatorJson(t)); }

ModuleVector parseVectorJson(const std::string& text) {
  const Json j = parseText(text);
  const int n = integer(field(j, "n", "vector"), "n");
  const int m = integer(field(j, "m", "vector"), "m");
  checkDims(n, m);
  const Json& e = field(j, "entries", "vector");
  if (!e.is_array() || e.size() != static_cast<std::size_t>(m)) {
    throw SchemaError("entries: expected " + std::to_string(m) + " entries");
  }
  std::vector<CliffordNum> entries;
  for (int i = 0; i < m; ++i) entries.push_back(cliffordFrom(e[i], n, "entries[" + std::to_string(i) + "]"));
  return ModuleVector(std::move(entries));
}

ModuleVector parseVectorFile(const std::string& path) {
  try {
    return parseVectorJson(readTextFile(path));
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::string vectorToJson(const ModuleVector& v) {
  Json j;
  j["n"] = v.n();
  j["m"] = v.m();
  Json e = Json::array();
  for (const auto& s : v.entries()) e.push_back(cliffordTo(s));
  j["entries"] = std::move(e);
  return dump(j);
}

std::vector<IntrinsicFunction> parseFunctionJson(const std::string& text, double defaultTheta) {
  const Json j = parseText(text);
  std::vector<IntrinsicFunction> out;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k) {
      out.push_back(resolveEntry(j[k], defaultTheta, "functions[" + std::to_string(k) + "]"));
    }
  } else {
    out.push_back(resolveEntry(j, defaultTheta, "function"));
  }
  return out;
}

std::vector<IntrinsicFunction> resolveFunctionArg(const std::string& arg, double defaultTheta) {
  if (arg.empty()) throw SchemaError("function: empty argument");
  const char first = arg.front();
  if (first == '{' || first == '[') return parseFunctionJson(arg, defaultTheta);
  std::error_code ec;
  if (std::filesystem::is_regular_file(arg, ec)) {
    try {
      return parseFunctionJson(readTextFile(arg), defaultTheta);
    } catch (const SchemaError& e) {
      throw SchemaError(arg + ": " + e.what());
    }
  }
  Json entry;
  entry["name"] = arg;
  entry["params"] = Json::object();
  return {resolveEntry(entry, defaultTheta, "function")};
}

std::string calculusResultToJson(const CalculusResult& r) {
  Json j = operatorJson(r.op);
  j["trunc_err"] = r.truncationError;
  j["disc_err"] = r.discretizationError;
  return dump(j);
}

std::string frameReportToJson(const FrameBounds& fb) {
  Json j;
  j["cLower"] = fb.cLower;
  j["dUpper"] = fb.dUpper;
  Json ev = Json::array();
  for (Eigen::Index k = 0; k < fb.thetaEigenvalues.size(); ++k) ev.push_back(fb.thetaEigenvalues[k]);
  j["thetaEigenvalues"] = std::move(ev);
  j["grid"] = {{"tMin", fb.grid.tMin},
               {"tMax", fb.grid.tMax},
               {"nodes", fb.grid.nodes},
               {"relativeToNorm", fb.grid.relativeToNorm}};
  j["errorEstimates"] = {{"discretization", fb.discretizationError},
                         {"tail", fb.tailError},
                         {"calculus", fb.calculusError},
                         {"theta", fb.thetaError()},
                         {"cLower", fb.cLowerError()},
                         {"dUpper", fb.dUpperError()}};
  return dump(j);
}

std::string bisectorReportToJson(const BisectorReport& r) {
  Json j;
  j["omega"] = r.omega;
  j["bisectorial"] = r.bisectorial();
  j["injective"] = r.injective;
  j["injectivity_sigma_min"] = r.injectivitySigmaMin;
  j["injectivity_sigma_max"] = r.injectivitySigmaMax;
  j["spectrum_in_sector"] = r.spectrumInSector;
  j["norm"] = r.normT;
  Json table = Json::array();
  for (const auto& e : r.cPhiTable) table.push_back({{"phi", e.phi}, {"c_phi", finiteOrNull(e.cPhi)}});
  j["c_phi_table"] = std::move(table);
  Json det = Json::array();
  for (const auto& d : r.detections) det.push_back(detectionJson(d));
  j["detections"] = std::move(det);
  return dump(j);
}

void writeScanCsv(const SpectrumScan& scan, std::ostream& out) {
  Json j;
  j["grid"] = {{"x_min", scan.grid.xMin}, {"x_max", scan.grid.xMax}, {"nx", scan.grid.nx},
               {"y_min", scan.grid.yMin}, {"y_max", scan.grid.yMax}, {"ny", scan.grid.ny}};
  Json det = Json::array();
  for (const auto& d : scan.detections) det.push_back(detectionJson(d));
  j["detections"] = std::move(det);

  // values go through the JSON number formatter so they round-trip exactly
  out << "x,y,sigma_min\n";
  for (int jj = 0; jj < scan.grid.ny; ++jj) {
    for (int i = 0; i < scan.grid.nx; ++i) {
      out << Json(scan.grid.x(i)).dump() << ',' << Json(scan.grid.y(jj)).dump() << ','
          << Json(scan.value(i, jj)).dump() << '\n';
    }
  }
  out << "# detections\n" << j.dump(2) << '\n';
}

ParsedScan parseScanCsv(const std::string& text) {
  ParsedScan out;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "x,y,sigma_min") throw SchemaError("scan: line 1: bad header");
  std::size_t lineNo = 1;
  std::string rest;
  bool inBlock = false;
  while (std::getline(in, line)) {
    ++lineNo;
    if (inBlock) {
      rest += line + "\n";
      continue;
    }
    if (line == "# detections") {
      inBlock = true;
      continue;
    }
    double v[3];
    std::istringstream row(line);
    std::string cell;
    int k = 0;
    while (std::getline(row, cell, ',')) {
      if (k == 3) break;
      try {
        v[k] = std::stod(cell);
      } catch (const std::exception&) {
        throw SchemaError("scan: line " + std::to_string(lineNo) + ": bad number");
      }
      ++k;
    }
    if (k != 3 || std::getline(row, cell, ',')) {
      throw SchemaError("scan: line " + std::to_string(lineNo) + ": expected 3 columns");
    }
    out.x.push_back(v[0]);
    out.y.push_back(v[1]);
    out.sigmaMin.push_back(v[2]);
  }
  if (!inBlock) throw SchemaError("scan: missing detections block");
  const Json j = parseText(rest);
  for (const auto& d : field(j, "detections", "scan")) {
    SpectrumDetection s;
    s.i = d.at("i").get<int>();
    s.j = d.at("j").get<int>();
    s.x = d.at("x").get<double>();
    s.y = d.at("y").get<double>();
    s.refinedX = d.at("refined_x").get<double>();
    s.refinedY = d.at("refined_y").get<double>();
    s.sigmaMin = d.at("sigma_min").get<double>();
    s.sigmaMax = d.at("sigma_max").get<double>();
    out.detections.push_back(s);
  }
  return out;
}

}  // namespace sspec
