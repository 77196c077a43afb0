#include "wgmax/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace wgmax {

void write_vtk(const std::string& path, const Mesh& mesh, const std::vector<VtkCellField>& fields,
               const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << std::setprecision(16);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << mesh.num_cells() << ' ' << 4 * mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells) out << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  out << "CELL_TYPES " << mesh.num_cells() << '\n';
  for (int c = 0; c < mesh.num_cells(); ++c) out << "5\n";
  if (!fields.empty()) out << "CELL_DATA " << mesh.num_cells() << '\n';
  for (const auto& f : fields) {
    if (f.components == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double v : f.values) out << v << '\n';
    } else if (f.components == 3) {
      out << "VECTORS " << f.name << " double\n";
      for (size_t i = 0; i + 2 < f.values.size(); i += 3)
        out << f.values[i] << ' ' << f.values[i + 1] << ' ' << f.values[i + 2] << '\n';
    } else {
      throw std::invalid_argument("VTK field '" + f.name + "' must have 1 or 3 components");
    }
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace wgmax
