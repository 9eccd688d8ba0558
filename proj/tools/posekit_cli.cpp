// Command-line front end. Talks to the library only through posekit_c.h.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "posekit_c.h"

using nlohmann::json;

namespace {

constexpr int kExitParse = 1;
constexpr int kExitDomain = 2;
constexpr int kExitCheck = 3;
constexpr int kExitInternal = 4;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void parse_fail(const std::string& what) { throw CliError{kExitParse, what}; }

void check(posekit_status s) {
  if (s == POSEKIT_OK) return;
  const std::string msg = std::string(posekit_status_name(s)) + ": " + posekit_last_error();
  switch (s) {
    case POSEKIT_ERR_ARGUMENT:
    case POSEKIT_ERR_PARSE:
      throw CliError{kExitParse, msg};
    case POSEKIT_ERR_INTERNAL:
      throw CliError{kExitInternal, msg};
    default:
      throw CliError{kExitDomain, msg};
  }
}

struct Options {
  std::string in;
  bool degrees = false;
};

json read_json(const Options& o) {
  std::string text;
  if (o.in.empty() || o.in == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream f(o.in);
    if (!f) parse_fail("cannot open " + o.in);
    text.assign(std::istreambuf_iterator<char>(f), {});
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
}

posekit_param param_from_name(const std::string& s) {
  if (s == "ypr") return POSEKIT_YPR;
  if (s == "quat") return POSEKIT_QUAT;
  if (s == "matrix") return POSEKIT_MATRIX;
  parse_fail("unknown pose type '" + s + "' (expected ypr, quat or matrix)");
}

const char* param_name(posekit_param p) {
  return p == POSEKIT_YPR ? "ypr" : p == POSEKIT_QUAT ? "quat" : "matrix";
}

std::vector<double> numbers(const json& j, std::size_t n, const std::string& what) {
  if (!j.is_array() || j.size() != n)
    parse_fail(what + ": expected an array of " + std::to_string(n) + " numbers");
  std::vector<double> v;
  for (const json& x : j) {
    if (!x.is_number()) parse_fail(what + ": non-numeric entry");
    v.push_back(x.get<double>());
  }
  return v;
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

// Row-major square array, either flat or nested.
std::vector<double> square(const json& j, std::size_t n, const std::string& what) {
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    if (j.size() != n) parse_fail(what + ": expected " + std::to_string(n) + " rows");
    std::vector<double> v;
    for (std::size_t r = 0; r < n; ++r) {
      const auto row = numbers(j[r], n, what);
      v.insert(v.end(), row.begin(), row.end());
    }
    return v;
  }
  return numbers(j, n * n, what);
}

json square_json(const std::vector<double>& v, std::size_t n) {
  json rows = json::array();
  for (std::size_t r = 0; r < n; ++r)
    rows.push_back(std::vector<double>(v.begin() + r * n, v.begin() + (r + 1) * n));
  return rows;
}

struct Pose {
  posekit_param type = POSEKIT_YPR;
  std::vector<double> data;  // library layout
  std::optional<std::vector<double>> cov;
};

// Angle scale for --degrees: YPR angles only.
std::vector<double> angle_scale(posekit_param t, double k) {
  std::vector<double> s(posekit_param_dim(t), 1.0);
  if (t == POSEKIT_YPR) s[3] = s[4] = s[5] = k;
  return s;
}

void scale(Pose& p, double k) {
  const auto s = angle_scale(p.type, k);
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) p.data[i] *= s[i];
  if (p.cov)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) (*p.cov)[r * n + c] *= s[r] * s[c];
}

constexpr double kDeg = std::numbers::pi / 180.0;

// JSON matrices are 16 row-major entries; the library takes the column-major
// 12-vector of the top 3x4 block.
Pose pose_from_json(const json& j, const Options& o) {
  Pose p;
  p.type = param_from_name(field(j, "type").get<std::string>());
  if (p.type == POSEKIT_MATRIX) {
    const auto m = numbers(field(j, "data"), 16, "matrix data");
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 3; ++r) p.data.push_back(m[r * 4 + c]);
  } else {
    p.data = numbers(field(j, "data"), posekit_param_dim(p.type), std::string(param_name(p.type)) + " data");
  }
  if (j.contains("cov")) p.cov = square(j.at("cov"), posekit_param_dim(p.type), "cov");
  if (o.degrees) scale(p, kDeg);
  return p;
}

json pose_to_json(Pose p, const Options& o) {
  if (o.degrees) scale(p, 1.0 / kDeg);
  for (double& v : p.data) v += 0.0;  // no "-0.0" in the output
  json j;
  j["type"] = param_name(p.type);
  if (p.type == POSEKIT_MATRIX) {
    std::vector<double> m(16, 0.0);
    for (int c = 0; c < 4; ++c)
      for (int r = 0; r < 3; ++r) m[r * 4 + c] = p.data[c * 3 + r];
    m[15] = 1.0;
    j["data"] = m;
  } else {
    j["data"] = p.data;
  }
  if (p.cov) j["cov"] = square_json(*p.cov, posekit_param_dim(p.type));
  return j;
}

struct Point {
  std::array<double, 3> mean{};
  std::optional<std::vector<double>> cov;
};

Point point_from_json(const json& j) {
  Point p;
  const json& m = j.is_object() ? field(j, "mean") : j;
  const auto v = numbers(m, 3, "point");
  std::copy(v.begin(), v.end(), p.mean.begin());
  if (j.is_object() && j.contains("cov")) p.cov = square(j.at("cov"), 3, "point cov");
  return p;
}

json point_to_json(const Point& p) {
  if (!p.cov) return p.mean;
  return json{{"mean", p.mean}, {"cov", square_json(*p.cov, 3)}};
}

const double* cov_ptr(const std::optional<std::vector<double>>& c) { return c ? c->data() : nullptr; }

Pose blank(posekit_param t, bool with_cov) {
  Pose p;
  p.type = t;
  const int n = posekit_param_dim(t);
  p.data.assign(n, 0.0);
  if (with_cov) p.cov = std::vector<double>(n * n, 0.0);
  return p;
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out);
  if (!f) throw CliError{kExitParse, "cannot write " + out};
  f << j.dump(2) << '\n';
}

// ---- subcommands

json run_convert(const json& in, const std::string& to, const Options& o) {
  const Pose p = pose_from_json(in, o);
  Pose r = blank(param_from_name(to), p.cov.has_value());
  if (p.cov)
    check(posekit_convert_gaussian(p.type, p.data.data(), p.cov->data(), r.type, r.data.data(),
                                   r.cov->data()));
  else
    check(posekit_convert(p.type, p.data.data(), r.type, r.data.data(), nullptr));
  return pose_to_json(r, o);
}

json run_compose(const json& in, const Options& o) {
  const Pose a = pose_from_json(field(in, "a"), o);
  const Pose b = pose_from_json(field(in, "b"), o);
  if (a.type != b.type) parse_fail("compose: \"a\" and \"b\" must use the same pose type");
  Pose r = blank(a.type, a.cov || b.cov);
  check(posekit_propagate_compose(a.type, a.data.data(), cov_ptr(a.cov), b.data.data(), cov_ptr(b.cov),
                                  r.data.data(), r.cov ? r.cov->data() : nullptr));
  return pose_to_json(r, o);
}

json run_invert(const json& in, const Options& o) {
  const Pose p = pose_from_json(in, o);
  Pose r = blank(p.type, p.cov.has_value());
  check(posekit_propagate_inverse(p.type, p.data.data(), cov_ptr(p.cov), r.data.data(),
                                  r.cov ? r.cov->data() : nullptr));
  return pose_to_json(r, o);
}

json run_apply_point(const json& in, bool inverse, const Options& o) {
  const Pose p = pose_from_json(field(in, "pose"), o);
  const Point a = point_from_json(field(in, "point"));
  Point r;
  const bool with_cov = p.cov || a.cov;
  if (with_cov) r.cov = std::vector<double>(9, 0.0);
  auto fn = inverse ? posekit_propagate_inv_apply_point : posekit_propagate_apply_point;
  check(fn(p.type, p.data.data(), cov_ptr(p.cov), a.mean.data(), cov_ptr(a.cov), r.mean.data(),
           r.cov ? r.cov->data() : nullptr));
  return point_to_json(r);
}

// Same operations as above, but a covariance is mandatory on every operand
// that has one in the output.
json run_propagate(const json& in, const std::string& op, const std::string& to, const Options& o) {
  auto need_cov = [](const json& j, const char* what) {
    if (!j.is_object() || !j.contains("cov")) parse_fail(std::string("propagate: ") + what + " needs \"cov\"");
  };
  if (op == "convert") {
    need_cov(in, "pose");
    return run_convert(in, to, o);
  }
  if (op == "compose") {
    need_cov(field(in, "a"), "\"a\"");
    need_cov(field(in, "b"), "\"b\"");
    return run_compose(in, o);
  }
  if (op == "invert") {
    need_cov(in, "pose");
    return run_invert(in, o);
  }
  if (op == "apply-point" || op == "inv-apply-point") {
    need_cov(field(in, "pose"), "\"pose\"");
    need_cov(field(in, "point"), "\"point\"");
    return run_apply_point(in, op == "inv-apply-point", o);
  }
  parse_fail("propagate: unknown --op '" + op + "'");
}

std::vector<double> tangent_from_json(const json& in) {
  return numbers(in.is_object() ? field(in, "data") : in, 6, "tangent");
}

json run_expmap(const json& in, bool pseudo, const Options& o) {
  auto v = tangent_from_json(in);
  if (o.degrees)
    for (int i = 3; i < 6; ++i) v[i] *= kDeg;
  Pose r = blank(POSEKIT_MATRIX, false);
  check(posekit_expmap(v.data(), pseudo ? 1 : 0, r.data.data()));
  return pose_to_json(r, o);
}

json run_logmap(const json& in, bool pseudo, const Options& o) {
  const Pose p = pose_from_json(in, o);
  Pose m = blank(POSEKIT_MATRIX, false);
  check(posekit_convert(p.type, p.data.data(), POSEKIT_MATRIX, m.data.data(), nullptr));
  std::vector<double> v(6);
  check(posekit_logmap(m.data.data(), pseudo ? 1 : 0, v.data()));
  if (o.degrees)
    for (int i = 3; i < 6; ++i) v[i] /= kDeg;
  return json{{"type", "tangent"}, {"data", v}};
}

json run_project(const json& in, const Options& o) {
  // {"fx", "fy", "cx", "cy"} or [fx, fy, cx, cy]
  const json& k = field(in, "intrinsics");
  std::array<double, 4> intr{};
  if (k.is_array()) {
    const auto v = numbers(k, 4, "intrinsics");
    std::copy(v.begin(), v.end(), intr.begin());
  } else {
    const char* keys[] = {"fx", "fy", "cx", "cy"};
    for (int i = 0; i < 4; ++i) {
      const json& x = field(k, keys[i]);
      if (!x.is_number()) parse_fail(std::string("intrinsics: ") + keys[i] + " is not a number");
      intr[i] = x.get<double>();
    }
  }
  const Pose p = pose_from_json(field(in, "pose"), o);
  Pose m = blank(POSEKIT_MATRIX, false);
  check(posekit_convert(p.type, p.data.data(), POSEKIT_MATRIX, m.data.data(), nullptr));
  const json& pts = field(in, "points");
  if (!pts.is_array()) parse_fail("points: expected an array");
  std::vector<double> flat;
  for (const json& q : pts) {
    const auto v = numbers(q, 3, "point");
    flat.insert(flat.end(), v.begin(), v.end());
  }
  const std::size_t n = pts.size();
  std::vector<double> px(2 * n);
  check(posekit_project(intr.data(), m.data.data(), flat.data(), n, px.data()));
  json out = json::array();
  for (std::size_t i = 0; i < n; ++i) out.push_back({px[2 * i], px[2 * i + 1]});
  return json{{"pixels", out}};
}

int run_jacobian_check(std::uint64_t seed, int samples, double tol, const std::string& out) {
  posekit_report* rep = nullptr;
  check(posekit_check_catalog(seed, samples, tol, &rep));
  json arr = json::array();
  bool all = true;
  for (std::size_t i = 0; i < posekit_report_size(rep); ++i) {
    const char* op = nullptr;
    double err = 0.0;
    int row = 0, col = 0, pass = 0;
    posekit_report_entry(rep, i, &op, &err, &row, &col, &pass);
    // JSON has no infinity; a sample that threw reports null.
    arr.push_back({{"op", op},
                   {"maxAbsError", std::isfinite(err) ? json(err) : json(nullptr)},
                   {"worstRow", row},
                   {"worstCol", col},
                   {"pass", pass != 0}});
    all = all && pass;
  }
  posekit_report_free(rep);
  emit(arr, out);
  return all ? 0 : kExitCheck;
}

struct GraphHandle {
  posekit_graph* g = nullptr;
  ~GraphHandle() { posekit_graph_free(g); }
};

int run_slam(const std::string& in, const std::string& out, const std::string& csv,
             const std::string& method, int max_iters) {
  GraphHandle h;
  check(posekit_graph_load(in.c_str(), &h.g));
  posekit_solver_config cfg;
  posekit_solver_config_default(&cfg);
  cfg.method = method == "gn" ? POSEKIT_GAUSS_NEWTON : POSEKIT_LEVENBERG_MARQUARDT;
  cfg.max_iterations = max_iters;
  check(posekit_graph_optimize(h.g, &cfg));
  check(posekit_graph_save(h.g, out.c_str()));

  std::ofstream fcsv;
  std::ostream* os = &std::cout;
  if (!csv.empty() && csv != "-") {
    fcsv.open(csv);
    if (!fcsv) throw CliError{kExitParse, "cannot write " + csv};
    os = &fcsv;
  }
  *os << "iter,chi2,update_norm,lambda\n";
  for (std::size_t i = 0; i < posekit_graph_history_size(h.g); ++i) {
    int it = 0;
    double chi2 = 0, un = 0, lambda = 0;
    check(posekit_graph_history(h.g, i, &it, &chi2, &un, &lambda));
    char line[128];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", it, chi2, un, lambda);
    *os << line;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"posekit: rigid-body pose conversions, Jacobians and pose-graph optimization"};
  app.require_subcommand(1, 1);

  Options opt;
  std::string out;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--in", opt.in, "input JSON file (default stdin)");
    sub->add_option("--out", out, "output file (default stdout)");
    sub->add_flag("--degrees", opt.degrees, "angles in degrees on input and output");
  };

  std::string to = "quat";
  auto* convert = app.add_subcommand("convert", "convert a pose or Gaussian pose");
  common(convert);
  convert->add_option("--to", to, "target type")->check(CLI::IsMember({"ypr", "quat", "matrix"}));

  auto* compose = app.add_subcommand("compose", "compose {\"a\", \"b\"} poses: a (+) b");
  common(compose);

  auto* invert = app.add_subcommand("invert", "invert a pose");
  common(invert);

  bool inverse = false;
  auto* apply = app.add_subcommand("apply-point", "apply {\"pose\", \"point\"}: pose (+) point");
  common(apply);
  apply->add_flag("--inverse", inverse, "compute point (-) pose instead");

  std::string op;
  auto* propagate = app.add_subcommand("propagate", "first-order covariance propagation");
  common(propagate);
  propagate->add_option("--op", op, "operation")
      ->required()
      ->check(CLI::IsMember({"convert", "compose", "invert", "apply-point", "inv-apply-point"}));
  propagate->add_option("--to", to, "target type for --op convert")
      ->check(CLI::IsMember({"ypr", "quat", "matrix"}));

  bool pseudo = false;
  auto* expmap = app.add_subcommand("expmap", "tangent 6-vector (t, w) to pose matrix");
  common(expmap);
  expmap->add_flag("--pseudo", pseudo, "use the pseudo-exponential");
  auto* logmap = app.add_subcommand("logmap", "pose to tangent 6-vector (t, w)");
  common(logmap);
  logmap->add_flag("--pseudo", pseudo, "use the pseudo-logarithm");

  auto* project = app.add_subcommand("project", "project {\"intrinsics\", \"pose\", \"points\"}");
  common(project);

  std::uint64_t seed = 1;
  int samples = 100;
  double tol = 1e-5;
  auto* jc = app.add_subcommand("jacobian-check", "verify every analytic Jacobian by finite differences");
  jc->add_option("--seed", seed, "random seed");
  jc->add_option("--samples", samples, "samples per Jacobian")->check(CLI::NonNegativeNumber);
  jc->add_option("--tol", tol, "max elementwise error")->check(CLI::PositiveNumber);
  jc->add_option("--out", out, "report file (default stdout)");

  std::string g2o_in, g2o_out, csv, method = "lm";
  int max_iters = 50;
  auto* slam = app.add_subcommand("slam", "optimize a .g2o pose graph");
  slam->add_option("--in", g2o_in, "input .g2o")->required();
  slam->add_option("--out", g2o_out, "optimized .g2o")->required();
  slam->add_option("--csv", csv, "per-iteration chi2 CSV (default stdout)");
  slam->add_option("--method", method, "gn or lm")->check(CLI::IsMember({"gn", "lm"}));
  slam->add_option("--max-iters", max_iters, "iteration limit")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitParse;
  }

  try {
    if (convert->parsed()) emit(run_convert(read_json(opt), to, opt), out);
    else if (compose->parsed()) emit(run_compose(read_json(opt), opt), out);
    else if (invert->parsed()) emit(run_invert(read_json(opt), opt), out);
    else if (apply->parsed()) emit(run_apply_point(read_json(opt), inverse, opt), out);
    else if (propagate->parsed()) emit(run_propagate(read_json(opt), op, to, opt), out);
    else if (expmap->parsed()) emit(run_expmap(read_json(opt), pseudo, opt), out);
    else if (logmap->parsed()) emit(run_logmap(read_json(opt), pseudo, opt), out);
    else if (project->parsed()) emit(run_project(read_json(opt), opt), out);
    else if (jc->parsed()) return run_jacobian_check(seed, samples, tol, out);
    else if (slam->parsed()) return run_slam(g2o_in, g2o_out, csv, method, max_iters);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << '\n';
    return e.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return 0;
}
