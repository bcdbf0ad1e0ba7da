#pragma once

// Preview of a quantity over the composition simplex: one disc per state
// coloured through a fixed ramp, with optional arrows. Cooperator vertex on
// top, defector bottom right, outsider bottom left. Output depends only on
// the inputs.

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "coalition/game.hpp"

namespace coalition::svg {

struct Arrow {
  int i_C = 0;
  int i_D = 0;
  double d_iC = 0.0;  // displacement in compositions
  double d_iD = 0.0;
};

// heat has one entry per state of index (StateIndex order). Only arrows on a
// coarse sublattice are drawn, rescaled so the longest nearly reaches the
// next drawn one.
void write_simplex(std::ostream& out, const StateIndex& index, std::span<const double> heat,
                   std::span<const Arrow> arrows, const std::string& title);

}  // namespace coalition::svg
