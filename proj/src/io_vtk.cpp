#include "adapt/io_vtk.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

namespace adapt {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_vtk(const Mesh& mesh, const VtkFields& fields, const std::string& path) {
  for (const auto& [name, f] : fields.scalars) {
    if (!f->bound_to(mesh)) throw std::logic_error("write_vtk: unbound field " + name);
  }
  for (const auto& [name, f] : fields.vectors) {
    if (!f->bound_to(mesh)) throw std::logic_error("write_vtk: unbound field " + name);
  }
  for (const auto& [name, f] : fields.tensors) {
    if (!f->bound_to(mesh)) throw std::logic_error("write_vtk: unbound field " + name);
  }

  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);

  const auto verts = mesh.points(Stratum::Vertex);
  std::map<PointId, long> index;
  long next = 0;
  for (PointId v : verts) index[v] = next++;
  const auto cells = mesh.points(Stratum::Cell);

  out << "# vtk DataFile Version 3.0\n";
  out << "adapt mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << verts.size() << " double\n";
  for (PointId v : verts) {
    const Vec2 c = mesh.coord(v);
    out << fmt17(c.x) << " " << fmt17(c.y) << " 0\n";
  }
  out << "CELLS " << cells.size() << " " << 4 * cells.size() << "\n";
  for (PointId c : cells) {
    const auto cv = mesh.cell_vertices(c);
    out << "3 " << index[cv[0]] << " " << index[cv[1]] << " " << index[cv[2]] << "\n";
  }
  out << "CELL_TYPES " << cells.size() << "\n";
  for (size_t i = 0; i < cells.size(); ++i) out << "5\n";

  if (fields.scalars.empty() && fields.vectors.empty() && fields.tensors.empty()) return;

  out << "POINT_DATA " << verts.size() << "\n";
  for (const auto& [name, f] : fields.scalars) {
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (PointId v : verts) out << fmt17(f->at_vertex(mesh, v)) << "\n";
  }
  for (const auto& [name, f] : fields.vectors) {
    out << "VECTORS " << name << " double\n";
    for (PointId v : verts) {
      const Vec2& val = f->at_vertex(mesh, v);
      out << fmt17(val.x) << " " << fmt17(val.y) << " 0\n";
    }
  }
  for (const auto& [name, f] : fields.tensors) {
    out << "TENSORS " << name << " double\n";
    for (PointId v : verts) {
      const SymTensor2& m = f->at_vertex(mesh, v);
      out << fmt17(m.a11) << " " << fmt17(m.a12) << " 0\n";
      out << fmt17(m.a12) << " " << fmt17(m.a22) << " 0\n";
      out << "0 0 0\n";
    }
  }
}

}  // namespace adapt
