#ifndef ADAPT_IO_VTK_HPP
#define ADAPT_IO_VTK_HPP

#include <string>
#include <utility>
#include <vector>

#include "adapt/field.hpp"
#include "adapt/mesh.hpp"

namespace adapt {

struct VtkFields {
  std::vector<std::pair<std::string, const ScalarField*>> scalars;
  std::vector<std::pair<std::string, const VectorField*>> vectors;
  std::vector<std::pair<std::string, const TensorField*>> tensors;
};

// Legacy VTK ASCII UNSTRUCTURED_GRID with POINT_DATA arrays, deterministic
// point ordering (ascending ids).
void write_vtk(const Mesh& mesh, const VtkFields& fields, const std::string& path);

}  // namespace adapt

#endif
