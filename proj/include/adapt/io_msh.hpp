#ifndef ADAPT_IO_MSH_HPP
#define ADAPT_IO_MSH_HPP

#include <string>

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

// Gmsh MSH 2.2 ASCII, triangles (type 2) plus boundary lines (type 1).
// Coordinates are written with 17 significant digits so read/write
// round-trips bit-exactly.
Mesh read_msh(const std::string& path);
void write_msh(const Mesh& mesh, const std::string& path);

// Vertex metric file: one "vid a11 a12 a22" line per vertex, vid matching
// the 1-based MSH node numbering.
TensorField read_metric_file(const std::string& path, const Mesh& mesh);
void write_metric_file(const TensorField& metric, const Mesh& mesh,
                       const std::string& path);

}  // namespace adapt

#endif
