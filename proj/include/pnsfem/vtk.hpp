#pragma once

#include <iosfwd>
#include <string>

#include "pnsfem/forms.hpp"

namespace pnsfem {

// Legacy-VTK unstructured grid with vertex velocity vectors and pressure
// (point data for continuous pressure, cell data for the discontinuous
// Crouzeix-Raviart pressure, sampled at barycenters).
void emit_fields(const DiscreteState& state, const MixedSpace& space, std::ostream& out);
void emit_fields_file(const DiscreteState& state, const MixedSpace& space,
                      const std::string& path);

}  // namespace pnsfem
