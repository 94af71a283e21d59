#pragma once

// SVG pictures of isometric circles, strips and prisms. 100 units per model
// unit, y axis pointing up; every number is printed to 12 significant digits.

#include <string>
#include <vector>

#include "fordlab/constructions.hpp"

namespace fordlab {

std::string render_construction_svg(const Construction& c);

// Strip of the translation among gens (width 1 when there is none) and the
// isometric disks of the other generators and their inverses.
std::string render_generators_svg(const std::vector<MoebiusElement>& gens);

}  // namespace fordlab
