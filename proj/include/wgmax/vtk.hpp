#pragma once

#include <string>
#include <vector>

#include "wgmax/mesh.hpp"

namespace wgmax {

struct VtkCellField {
  std::string name;
  int components = 1;  // 1 (SCALARS) or 3 (VECTORS)
  std::vector<double> values;
};

/// Legacy ASCII VTK unstructured grid with triangle cells (type 5).
void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<VtkCellField>& fields = {},
               const std::string& title = "wgmaxwell mesh");

}  // namespace wgmax
