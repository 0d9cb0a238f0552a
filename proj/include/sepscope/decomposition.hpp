#pragma once

#include <vector>

#include "sepscope/linalg.hpp"

namespace sepscope {

// One term q * a_factor (x) b_factor of a separable mixture. Factors are
// density matrices on the two subsystems, rank one when the term comes from a
// product of pure states.
struct SeparableTerm {
  double q = 0.0;
  CMatrix a_factor;
  CMatrix b_factor;
};

struct SeparableDecomposition {
  std::vector<SeparableTerm> terms;
};

}  // namespace sepscope
