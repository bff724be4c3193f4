#include "pnsfem/vtk.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include "pnsfem/config.hpp"

namespace pnsfem {

void emit_fields(const DiscreteState& state, const MixedSpace& space, std::ostream& out) {
  const Mesh& mesh = *space.mesh;
  if (static_cast<int>(state.u.size()) != space.n_u ||
      static_cast<int>(state.pr.size()) != space.n_p)
    throw std::invalid_argument("emit_fields: state does not match the space");

  out << "# vtk DataFile Version 3.0\n";
  out << "pnsfem fields t=" << format_double(state.t) << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh.vertices.size() << " double\n";
  for (const Point2& v : mesh.vertices)
    out << format_double(v.x) << " " << format_double(v.y) << " 0\n";

  out << "CELLS " << mesh.cells.size() << " " << 4 * mesh.cells.size() << "\n";
  for (const auto& c : mesh.cells) out << "3 " << c[0] << " " << c[1] << " " << c[2] << "\n";
  out << "CELL_TYPES " << mesh.cells.size() << "\n";
  for (size_t c = 0; c < mesh.cells.size(); ++c) out << "5\n";

  // Vertex dofs carry nodal values for every family (bubbles vanish there).
  out << "POINT_DATA " << mesh.vertices.size() << "\n";
  out << "VECTORS velocity double\n";
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    out << format_double(state.u[2 * v]) << " " << format_double(state.u[2 * v + 1]) << " 0\n";

  if (space.family == ElementFamily::CrouzeixRaviart) {
    out << "CELL_DATA " << mesh.cells.size() << "\n";
    out << "SCALARS pressure double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (size_t c = 0; c < mesh.cells.size(); ++c) {
      const auto& pd = space.cell_pdofs[c];
      const double mid = (state.pr[pd[0]] + state.pr[pd[1]] + state.pr[pd[2]]) / 3.0;
      out << format_double(mid) << "\n";
    }
  } else {
    out << "SCALARS pressure double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (size_t v = 0; v < mesh.vertices.size(); ++v) out << format_double(state.pr[v]) << "\n";
  }
}

void emit_fields_file(const DiscreteState& state, const MixedSpace& space,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  emit_fields(state, space, out);
}

}  // namespace pnsfem
