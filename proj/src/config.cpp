#include "lfmv/config.hpp"

#include "lfmv/errors.hpp"

namespace lfmv {

Tolerances Tolerances::strict() {
  Tolerances t;
  t.invariant = 1e-12;
  t.root_residual = 1e-11;
  t.newton_crosscheck = 1e-11;
  t.round_trip = 1e-9;
  t.multiplicativity = 1e-11;
  t.imaginary_part = 1e-11;
  t.hecke_relation = 1e-9;
  t.mellin = 1e-8;
  t.contour = 1e-7;
  t.jensen = 1e-7;
  t.jensen_convergence = 1e-10;
  return t;
}

Tolerances tolerance_profile(std::string_view name) {
  if (name == "default") return Tolerances::defaults();
  if (name == "strict") return Tolerances::strict();
  throw ConfigError("unknown tolerance profile '" + std::string(name) + "'");
}

}  // namespace lfmv
