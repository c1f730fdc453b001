#include "adapt/io_msh.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace adapt {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string next_content_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) return line;
  }
  throw std::runtime_error("read_msh: unexpected end of file");
}

}  // namespace

Mesh read_msh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_msh: cannot open " + path);

  std::string line = next_content_line(in);
  if (line != "$MeshFormat") throw std::runtime_error("read_msh: missing $MeshFormat");
  {
    std::istringstream ss(next_content_line(in));
    std::string version;
    int file_type = -1, data_size = -1;
    ss >> version >> file_type >> data_size;
    if (version != "2.2" || file_type != 0) {
      throw std::runtime_error("read_msh: unsupported MSH version " + version);
    }
  }
  if (next_content_line(in) != "$EndMeshFormat") {
    throw std::runtime_error("read_msh: malformed $MeshFormat section");
  }

  if (next_content_line(in) != "$Nodes") throw std::runtime_error("read_msh: missing $Nodes");
  int n_nodes = std::stoi(next_content_line(in));
  std::vector<Vec2> coords;
  coords.reserve(n_nodes);
  std::map<long, int> node_index;
  for (int i = 0; i < n_nodes; ++i) {
    std::istringstream ss(next_content_line(in));
    long id;
    double x, y, z;
    if (!(ss >> id >> x >> y >> z)) throw std::runtime_error("read_msh: malformed node line");
    node_index[id] = static_cast<int>(coords.size());
    coords.push_back({x, y});
  }
  if (next_content_line(in) != "$EndNodes") {
    throw std::runtime_error("read_msh: malformed $Nodes section");
  }

  if (next_content_line(in) != "$Elements") {
    throw std::runtime_error("read_msh: missing $Elements");
  }
  int n_elems = std::stoi(next_content_line(in));
  std::vector<std::array<int, 3>> cells;
  struct BoundaryLine {
    int v0, v1, tag;
  };
  std::vector<BoundaryLine> lines;
  for (int i = 0; i < n_elems; ++i) {
    std::istringstream ss(next_content_line(in));
    long id;
    int type, ntags;
    if (!(ss >> id >> type >> ntags)) {
      throw std::runtime_error("read_msh: malformed element line");
    }
    int phys = 0;
    for (int t = 0; t < ntags; ++t) {
      int tagval;
      ss >> tagval;
      if (t == 0) phys = tagval;
    }
    if (type == 1) {
      long a, b;
      if (!(ss >> a >> b)) throw std::runtime_error("read_msh: malformed line element");
      lines.push_back({node_index.at(a), node_index.at(b), phys});
    } else if (type == 2) {
      long a, b, c;
      if (!(ss >> a >> b >> c)) throw std::runtime_error("read_msh: malformed triangle");
      cells.push_back({node_index.at(a), node_index.at(b), node_index.at(c)});
    } else {
      throw std::runtime_error("read_msh: unsupported element type " +
                               std::to_string(type));
    }
  }
  if (next_content_line(in) != "$EndElements") {
    throw std::runtime_error("read_msh: malformed $Elements section");
  }

  Mesh mesh = build_from_cells(cells, coords);
  for (const auto& bl : lines) {
    const PointId e = mesh.find_edge(bl.v0, bl.v1);
    if (e == kNoPoint) {
      throw std::runtime_error("read_msh: line element references a missing edge");
    }
    if (bl.tag != 0 && mesh.tag(e) != kTagInterior) mesh.set_tag(e, bl.tag);
  }
  return mesh;
}

void write_msh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_msh: cannot open " + path);

  const auto verts = mesh.points(Stratum::Vertex);
  std::map<PointId, long> node_id;
  long next = 1;
  for (PointId v : verts) node_id[v] = next++;

  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << verts.size() << "\n";
  for (PointId v : verts) {
    const Vec2 c = mesh.coord(v);
    out << node_id[v] << " " << fmt17(c.x) << " " << fmt17(c.y) << " 0\n";
  }
  out << "$EndNodes\n";

  std::vector<PointId> boundary_edges;
  for (PointId e : mesh.points(Stratum::Edge)) {
    if (mesh.tag(e) != kTagInterior) boundary_edges.push_back(e);
  }
  const auto cells = mesh.points(Stratum::Cell);

  out << "$Elements\n" << boundary_edges.size() + cells.size() << "\n";
  long eid = 1;
  for (PointId e : boundary_edges) {
    const auto ev = mesh.edge_vertices(e);
    out << eid++ << " 1 2 " << mesh.tag(e) << " " << mesh.tag(e) << " "
        << node_id[ev[0]] << " " << node_id[ev[1]] << "\n";
  }
  for (PointId c : cells) {
    const auto cv = mesh.cell_vertices(c);
    out << eid++ << " 2 2 0 0 " << node_id[cv[0]] << " " << node_id[cv[1]] << " "
        << node_id[cv[2]] << "\n";
  }
  out << "$EndElements\n";
}

TensorField read_metric_file(const std::string& path, const Mesh& mesh) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_metric_file: cannot open " + path);

  const auto verts = mesh.points(Stratum::Vertex);
  TensorField metric(mesh);
  std::vector<bool> seen(verts.size(), false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long vid;
    double a11, a12, a22;
    if (!(ss >> vid >> a11 >> a12 >> a22)) {
      throw std::runtime_error("read_metric_file: malformed line: " + line);
    }
    if (vid < 1 || vid > static_cast<long>(verts.size())) {
      throw std::runtime_error("read_metric_file: vertex id out of range");
    }
    metric.at_vertex(mesh, verts[vid - 1]) = {a11, a12, a22};
    seen[vid - 1] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      throw std::runtime_error("read_metric_file: missing vertex " + std::to_string(i + 1));
    }
  }
  return metric;
}

void write_metric_file(const TensorField& metric, const Mesh& mesh,
                       const std::string& path) {
  metric.check_binding(mesh);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_metric_file: cannot open " + path);
  long vid = 1;
  for (PointId v : mesh.points(Stratum::Vertex)) {
    const SymTensor2& m = metric.at_vertex(mesh, v);
    out << vid++ << " " << fmt17(m.a11) << " " << fmt17(m.a12) << " " << fmt17(m.a22)
        << "\n";
  }
}

}  // namespace adapt
