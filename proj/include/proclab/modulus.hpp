#pragma once

#include "proclab/fbm_engine.hpp"

namespace proclab::brackets {

// Modulus f_H(t) = t^H sqrt(max(1, log 1/t)), t > 0.
double f_h(fbm::HurstIndex h, double t);

}  // namespace proclab::brackets
