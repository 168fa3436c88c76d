#include "proclab/modulus.hpp"

#include <algorithm>
#include <cmath>

#include "proclab/errors.hpp"

namespace proclab::brackets {

double f_h(fbm::HurstIndex h, double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("f_h: t must be positive and finite");
  return std::pow(t, h.value()) * std::sqrt(std::max(1.0, -std::log(t)));
}

}  // namespace proclab::brackets
