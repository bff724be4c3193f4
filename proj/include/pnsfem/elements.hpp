#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pnsfem/mesh.hpp"

namespace pnsfem {

enum class ElementFamily { Mini, TaylorHood, CrouzeixRaviart };

ElementFamily family_from_string(const std::string& name);
std::string family_to_string(ElementFamily family);

// Polynomial degree of the velocity space (bubbles count as cubics).
int velocity_poly_degree(ElementFamily family);

// Kinds of scalar velocity dofs.
enum DofKind { dof_vertex = 0, dof_edge = 1, dof_cell = 2 };

// Mixed velocity/pressure space on a fixed mesh.  Scalar velocity dofs are
// numbered vertices first, then edge midpoints (edges sorted by their vertex
// pair), then cell dofs; a velocity vector stores the two components of
// scalar dof g at slots 2g and 2g+1.  Pressure is continuous P1 for Mini and
// Taylor-Hood and cellwise P1 (three dofs per cell, unshared) for
// Crouzeix-Raviart.
struct MixedSpace {
  const Mesh* mesh = nullptr;
  ElementFamily family = ElementFamily::Mini;

  int n_scalar = 0;  // scalar velocity dofs; n_u = 2*n_scalar
  int n_u = 0;
  int n_p = 0;

  std::vector<std::vector<int>> cell_udofs;  // scalar ids, local order: vertices, edges, cell
  std::vector<std::vector<int>> cell_pdofs;
  std::vector<Point2> u_nodes;          // geometric node of each scalar dof
  std::vector<char> u_kind;             // DofKind per scalar dof
  std::vector<char> u_on_boundary;      // scalar dof sits on the outer boundary
  std::vector<int> boundary_scalar;     // sorted list of boundary scalar dofs
};

MixedSpace build_space(const Mesh& mesh, ElementFamily family);

// Local basis data at one reference point.  Velocity gradients are with
// respect to the reference coordinates (x,y) = (l1,l2).
struct BasisEval {
  int n_u_loc = 0;
  int n_p_loc = 3;
  double u_val[7] = {};
  double u_grad[7][2] = {};
  double p_val[3] = {};
  double p_grad[3][2] = {};
};

int local_velocity_dofs(ElementFamily family);
BasisEval eval_basis_ref(ElementFamily family, double l1, double l2);

// Bounds-checked variant tied to a space; the basis itself does not depend
// on the cell.
BasisEval eval_basis(const MixedSpace& space, int cell, double l1, double l2);

// Affine map from the reference triangle to a cell.
struct CellGeometry {
  Point2 origin;            // image of (0,0)
  double jac[2][2] = {};    // columns: edge vectors v1-v0, v2-v0
  double det = 0.0;         // 2*area
  double inv_t[2][2] = {};  // inverse transpose; physical grad = inv_t * ref grad
};

CellGeometry cell_geometry(const Mesh& mesh, int cell);
Point2 map_to_cell(const CellGeometry& g, double l1, double l2);
Point2 map_to_reference(const CellGeometry& g, Point2 x);  // returns (l1,l2)

// Nodal interpolation.  Vertex and edge dofs take the field value at their
// node; cell (bubble) dofs are set to zero.  Velocity components interleave.
std::vector<double> interpolate_velocity(const MixedSpace& space,
                                         const std::function<Vec2(Point2)>& field);
std::vector<double> interpolate_pressure(const MixedSpace& space,
                                         const std::function<double(Point2)>& field);

// Pointwise evaluation of a velocity coefficient vector.
Vec2 eval_velocity(const MixedSpace& space, const std::vector<double>& u, int cell, double l1,
                   double l2);
Mat2 eval_velocity_gradient(const MixedSpace& space, const std::vector<double>& u, int cell,
                            double l1, double l2);
double eval_pressure(const MixedSpace& space, const std::vector<double>& p, int cell, double l1,
                     double l2);

}  // namespace pnsfem
