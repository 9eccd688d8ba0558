#pragma once

#include <iosfwd>
#include <string>

#include "posekit/graphslam.hpp"

namespace posekit {

/// Reads VERTEX_SE2 / EDGE_SE2 or VERTEX_SE3:QUAT / EDGE_SE3:QUAT records plus
/// FIX lines. Blank lines and lines starting with '#' are skipped. Throws
/// ParseError naming the line on anything else, including mixed SE(2)/SE(3).
PoseGraph read_g2o(std::istream& in);
PoseGraph read_g2o_file(const std::string& path);

/// Writes vertices by id, FIX lines, then edges in order, every number with 17
/// significant digits so that reading the output reproduces the graph exactly.
void write_g2o(std::ostream& out, const PoseGraph& g);
void write_g2o_file(const std::string& path, const PoseGraph& g);

}  // namespace posekit
