#include "wgmax/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace wgmax {

Pattern parse_pattern(std::string_view name) {
  if (name == "diagonal-NE" || name == "ne") return Pattern::DiagonalNE;
  if (name == "diagonal-NW" || name == "nw") return Pattern::DiagonalNW;
  if (name == "crisscross") return Pattern::Crisscross;
  throw std::invalid_argument("unknown mesh pattern '" + std::string(name) + "'");
}

std::string_view pattern_name(Pattern p) {
  switch (p) {
    case Pattern::DiagonalNE: return "diagonal-NE";
    case Pattern::DiagonalNW: return "diagonal-NW";
    case Pattern::Crisscross: return "crisscross";
  }
  return "?";
}

int Mesh::num_boundary_edges() const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.boundary; }));
}

Point Mesh::edge_midpoint(int e) const {
  const auto& v = edges[e].vertices;
  return 0.5 * (vertices[v[0]] + vertices[v[1]]);
}

Point Mesh::edge_tangent(int e) const {
  const auto& v = edges[e].vertices;
  return vertices[v[1]] - vertices[v[0]];
}

namespace {

void build_connectivity(Mesh& mesh) {
  const int nc = mesh.num_cells();
  std::unordered_map<long long, int> edge_of;
  edge_of.reserve(3 * nc);
  const long long nv = mesh.num_vertices();

  mesh.cell_edges.resize(nc);
  mesh.cell_edge_signs.resize(nc);
  mesh.normals.resize(nc);
  mesh.cell_diameter.resize(nc);
  mesh.cell_area.resize(nc);
  mesh.centroid.resize(nc);

  for (int c = 0; c < nc; ++c) {
    const auto& tri = mesh.cells[c];
    const Point& a = mesh.vertices[tri[0]];
    const Point& b = mesh.vertices[tri[1]];
    const Point& d = mesh.vertices[tri[2]];
    const double area2 = (b - a).x() * (d - a).y() - (b - a).y() * (d - a).x();
    if (!(area2 > 0.0)) throw std::logic_error("degenerate or clockwise cell " + std::to_string(c));
    mesh.cell_area[c] = 0.5 * area2;
    mesh.centroid[c] = (a + b + d) / 3.0;

    double diam = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int p = tri[i];
      const int q = tri[(i + 1) % 3];
      const int lo = std::min(p, q);
      const int hi = std::max(p, q);
      const long long key = lo * nv + hi;
      auto [it, inserted] = edge_of.try_emplace(key, mesh.num_edges());
      if (inserted) {
        mesh.edges.push_back(Edge{{lo, hi}, {c, -1}, false});
      } else {
        auto& edge = mesh.edges[it->second];
        if (edge.cells[1] != -1) throw std::logic_error("edge shared by more than two cells");
        edge.cells[1] = c;
      }
      mesh.cell_edges[c][i] = it->second;
      mesh.cell_edge_signs[c][i] = (p == lo) ? 1 : -1;

      const Point t = mesh.vertices[q] - mesh.vertices[p];
      const double len = t.norm();
      diam = std::max(diam, len);
      mesh.normals[c][i] = Point(t.y(), -t.x()) / len;
    }
    mesh.cell_diameter[c] = diam;
  }

  mesh.edge_length.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto& edge = mesh.edges[e];
    edge.boundary = edge.cells[1] == -1;
    mesh.edge_length[e] = mesh.edge_tangent(e).norm();
  }
}

}  // namespace

Mesh build_uniform_mesh(int M, Pattern pattern) {
  if (M < 1) throw std::invalid_argument("mesh resolution M must be >= 1, got " + std::to_string(M));

  Mesh mesh;
  const int n1 = M + 1;
  mesh.vertices.reserve(n1 * n1 + (pattern == Pattern::Crisscross ? M * M : 0));
  for (int j = 0; j <= M; ++j)
    for (int i = 0; i <= M; ++i)
      mesh.vertices.emplace_back(static_cast<double>(i) / M, static_cast<double>(j) / M);
  auto lattice = [n1](int i, int j) { return j * n1 + i; };

  const int center0 = mesh.num_vertices();
  if (pattern == Pattern::Crisscross) {
    for (int j = 0; j < M; ++j)
      for (int i = 0; i < M; ++i)
        mesh.vertices.emplace_back((i + 0.5) / M, (j + 0.5) / M);
  }

  mesh.cells.reserve(pattern == Pattern::Crisscross ? 4 * M * M : 2 * M * M);
  for (int j = 0; j < M; ++j) {
    for (int i = 0; i < M; ++i) {
      const int p00 = lattice(i, j);
      const int p10 = lattice(i + 1, j);
      const int p11 = lattice(i + 1, j + 1);
      const int p01 = lattice(i, j + 1);
      switch (pattern) {
        case Pattern::DiagonalNE:
          mesh.cells.push_back({p00, p10, p11});
          mesh.cells.push_back({p00, p11, p01});
          break;
        case Pattern::DiagonalNW:
          mesh.cells.push_back({p00, p10, p01});
          mesh.cells.push_back({p10, p11, p01});
          break;
        case Pattern::Crisscross: {
          const int c = center0 + j * M + i;
          mesh.cells.push_back({p00, p10, c});
          mesh.cells.push_back({p10, p11, c});
          mesh.cells.push_back({p11, p01, c});
          mesh.cells.push_back({p01, p00, c});
          break;
        }
      }
    }
  }

  build_connectivity(mesh);
  return mesh;
}

MeshStats mesh_stats(const Mesh& mesh) {
  MeshStats s{0.0, 180.0};
  for (int c = 0; c < mesh.num_cells(); ++c) {
    s.h = std::max(s.h, mesh.cell_diameter[c]);
    const auto& tri = mesh.cells[c];
    for (int i = 0; i < 3; ++i) {
      const Point u = mesh.vertices[tri[(i + 1) % 3]] - mesh.vertices[tri[i]];
      const Point w = mesh.vertices[tri[(i + 2) % 3]] - mesh.vertices[tri[i]];
      const double cosang = std::clamp(u.dot(w) / (u.norm() * w.norm()), -1.0, 1.0);
      s.min_angle = std::min(s.min_angle, std::acos(cosang) * 180.0 / std::numbers::pi);
    }
  }
  return s;
}

}  // namespace wgmax
