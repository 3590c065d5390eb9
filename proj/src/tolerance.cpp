#include "nrw/tolerance.hpp"

#include <cstdlib>

namespace nrw {

namespace {

double initial_tolerance() {
  if (const char* env = std::getenv("NRW_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 1e-9;
}

double& tolerance_ref() {
  static double tol = initial_tolerance();
  return tol;
}

} // namespace

double tolerance() { return tolerance_ref(); }

void set_tolerance(double tol) { tolerance_ref() = tol; }

double prune_threshold() { return tolerance_ref() / 100.0; }

} // namespace nrw
