#pragma once

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wgmax {

using Point = Eigen::Vector2d;

/// How each square of the M x M lattice is split into triangles.
enum class Pattern {
  DiagonalNE,  ///< two triangles, diagonal from lower-left to upper-right
  DiagonalNW,  ///< two triangles, diagonal from lower-right to upper-left
  Crisscross,  ///< four triangles around the square's center
};

Pattern parse_pattern(std::string_view name);
std::string_view pattern_name(Pattern p);

struct Edge {
  std::array<int, 2> vertices;  // vertices[0] < vertices[1]; fixes the edge parameter direction
  std::array<int, 2> cells;     // cells[1] == -1 on the boundary
  bool boundary = false;
};

/// Conforming triangulation of the unit square with cell/edge connectivity.
///
/// Local edge i of a cell joins local vertices i and (i+1)%3. The stored
/// normal for (cell, local edge) points out of that cell.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> cells;  // counterclockwise
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> cell_edges;
  std::vector<std::array<int, 3>> cell_edge_signs;  // +1 if local ccw direction matches edge direction
  std::vector<std::array<Point, 3>> normals;
  std::vector<double> cell_diameter;  // h_K
  std::vector<double> cell_area;
  std::vector<Point> centroid;
  std::vector<double> edge_length;  // h_E

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_boundary_edges() const;

  Point edge_midpoint(int e) const;
  /// Vector from the edge's first vertex to its second.
  Point edge_tangent(int e) const;
};

Mesh build_uniform_mesh(int M, Pattern pattern = Pattern::DiagonalNE);

struct MeshStats {
  double h;          // max cell diameter
  double min_angle;  // degrees
};

MeshStats mesh_stats(const Mesh& mesh);

}  // namespace wgmax
