#include "posekit/g2o.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "posekit/errors.hpp"

namespace posekit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw ParseError("g2o line " + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::istringstream ss;
  int line;

  double number() {
    std::string tok;
    if (!(ss >> tok)) fail(line, "missing value");
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) fail(line, "bad number '" + tok + "'");
      return v;
    } catch (const std::logic_error&) {
      fail(line, "bad number '" + tok + "'");
    }
  }

  int id() {
    const double v = number();
    if (v != static_cast<int>(v)) fail(line, "bad vertex id");
    return static_cast<int>(v);
  }

  void end() {
    std::string extra;
    if (ss >> extra) fail(line, "unexpected trailing value '" + extra + "'");
  }
};

// g2o stores (qx, qy, qz, qw); the library stores (qr, qx, qy, qz).
VectorXd read_pose(LineReader& r, GraphKind kind) {
  VectorXd raw(raw_dim(kind));
  if (kind == GraphKind::se2) {
    for (int i = 0; i < 3; ++i) raw[i] = r.number();
  } else {
    for (int i = 0; i < 3; ++i) raw[i] = r.number();
    for (int i = 4; i < 7; ++i) raw[i] = r.number();
    raw[3] = r.number();
  }
  return raw;
}

MatrixXd read_information(LineReader& r, int d) {
  MatrixXd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) m(i, j) = m(j, i) = r.number();
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_pose(std::ostream& out, const VectorXd& raw, GraphKind kind) {
  if (kind == GraphKind::se2) {
    out << fmt(raw[0]) << ' ' << fmt(raw[1]) << ' ' << fmt(raw[2]);
  } else {
    out << fmt(raw[0]) << ' ' << fmt(raw[1]) << ' ' << fmt(raw[2]) << ' ' << fmt(raw[4]) << ' '
        << fmt(raw[5]) << ' ' << fmt(raw[6]) << ' ' << fmt(raw[3]);
  }
}

}  // namespace

PoseGraph read_g2o(std::istream& in) {
  PoseGraph g;
  std::optional<GraphKind> kind;
  std::vector<std::pair<int, int>> fixes;
  auto set_kind = [&](GraphKind k, int line) {
    if (kind && *kind != k) fail(line, "mixes SE(2) and SE(3) records");
    kind = k;
    g.kind = k;
  };
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    LineReader r{std::istringstream(text), line};
    std::string tag;
    if (!(r.ss >> tag) || tag[0] == '#') continue;
    if (tag == "VERTEX_SE2" || tag == "VERTEX_SE3:QUAT") {
      set_kind(tag == "VERTEX_SE2" ? GraphKind::se2 : GraphKind::se3, line);
      const int id = r.id();
      if (g.vertices.count(id)) fail(line, "duplicate vertex " + std::to_string(id));
      g.vertices[id] = read_pose(r, *kind);
    } else if (tag == "EDGE_SE2" || tag == "EDGE_SE3:QUAT") {
      set_kind(tag == "EDGE_SE2" ? GraphKind::se2 : GraphKind::se3, line);
      GraphEdge e;
      e.from = r.id();
      e.to = r.id();
      e.measurement = read_pose(r, *kind);
      e.information = read_information(r, tangent_dim(*kind));
      g.edges.push_back(std::move(e));
    } else if (tag == "FIX") {
      std::string tok;
      while (r.ss >> tok) {
        LineReader one{std::istringstream(tok), line};
        fixes.emplace_back(one.id(), line);
      }
      continue;
    } else {
      fail(line, "unsupported record '" + tag + "'");
    }
    r.end();
  }
  for (const auto& [id, at] : fixes) {
    if (!g.vertices.count(id)) fail(at, "FIX of unknown vertex " + std::to_string(id));
    g.fixed.insert(id);
  }
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("g2o: ") + e.what());
  }
  return g;
}

PoseGraph read_g2o_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_g2o(in);
}

void write_g2o(std::ostream& out, const PoseGraph& g) {
  const bool se2 = g.kind == GraphKind::se2;
  const int d = tangent_dim(g.kind);
  for (const auto& [id, raw] : g.vertices) {
    out << (se2 ? "VERTEX_SE2 " : "VERTEX_SE3:QUAT ") << id << ' ';
    write_pose(out, raw, g.kind);
    out << '\n';
  }
  for (const int id : g.fixed) out << "FIX " << id << '\n';
  for (const GraphEdge& e : g.edges) {
    out << (se2 ? "EDGE_SE2 " : "EDGE_SE3:QUAT ") << e.from << ' ' << e.to << ' ';
    write_pose(out, e.measurement, g.kind);
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) out << ' ' << fmt(e.information(i, j));
    out << '\n';
  }
}

void write_g2o_file(const std::string& path, const PoseGraph& g) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  write_g2o(out, g);
  if (!out) throw ParseError("write failed for " + path);
}

}  // namespace posekit
