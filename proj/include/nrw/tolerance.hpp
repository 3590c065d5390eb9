#ifndef NRW_TOLERANCE_HPP
#define NRW_TOLERANCE_HPP

namespace nrw {

/// Current run tolerance (defaults to 1e-9, or the NRW_TOL environment variable).
double tolerance();

/// Override the run tolerance (e.g. from a --tol flag).
void set_tolerance(double tol);

/// Threshold below which stored form coefficients are dropped (tolerance()/100).
double prune_threshold();

} // namespace nrw

#endif
