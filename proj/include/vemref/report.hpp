#pragma once

#include "vemref/adapt.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace vemref {

/// iterations.csv layout; numbers use 17 significant digits, missing values are "nan".
std::string csv_header();
std::string csv_row(const IterationRecord& r);

/// Legacy ASCII POLYDATA of the active cells with cell fields eta2, ar_Rr and fracture.
/// `eta2` is indexed by cell id.
void write_vtk(std::ostream& out, const Mesh& mesh, const std::vector<double>& eta2);

/// Cells filled by log10(eta2) on a viridis ramp, with a legend. Fractures are
/// drawn side by side in their own frames.
void write_svg(std::ostream& out, const Mesh& mesh, const std::vector<double>& eta2);

} // namespace vemref
