#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pnsfem/geometry.hpp"

namespace pnsfem {

// Boundary side tags for axis-aligned rectangles.
enum BoundarySide { side_left = 0, side_right = 1, side_bottom = 2, side_top = 3 };

struct BoundaryEdge {
  int cell = -1;
  int local_edge = -1;  // edge i sits opposite vertex i
  int side = -1;
};

// Conforming triangulation of a rectangle.  Cells are triples of vertex
// indices with positive orientation; local edge i connects vertices
// (i+1)%3 and (i+2)%3.
struct Mesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> cells;
  std::vector<BoundaryEdge> boundary_edges;
  int level = 0;  // refinement generation, 0 for a freshly built mesh
  double h_max = 0.0;
};

// Child-to-parent cell map produced by regular refinement.
struct RefinementMap {
  std::vector<int> parent;
};

// nx-by-ny grid of squares on (x0,y0)-(x1,y1), each split along the
// bottom-left to top-right diagonal.
Mesh build_rectangle_mesh(double x0, double y0, double x1, double y1, int nx, int ny);

// Regular (red) refinement: every cell is split into four similar children
// through its edge midpoints.
std::pair<Mesh, RefinementMap> refine_regular(const Mesh& mesh);

// Returns human-readable defects; an empty list means the mesh is a valid
// conforming triangulation with positively oriented cells.
std::vector<std::string> validate(const Mesh& mesh);

std::array<int, 2> edge_vertices(const Mesh& mesh, int cell, int local_edge);
double cell_area(const Mesh& mesh, int cell);
double cell_diameter(const Mesh& mesh, int cell);
double mesh_size(const Mesh& mesh);  // recomputes max cell diameter

void write_mesh(const Mesh& mesh, std::ostream& out);
Mesh read_mesh(std::istream& in);
void write_mesh_file(const Mesh& mesh, const std::string& path);
Mesh read_mesh_file(const std::string& path);

}  // namespace pnsfem
