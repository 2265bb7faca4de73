#include "lfmv/errors.hpp"

namespace lfmv {

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const NumericError*>(&e) || dynamic_cast<const CapacityError*>(&e)) return 3;
  return 2;
}

}  // namespace lfmv
