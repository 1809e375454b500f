#pragma once

namespace harq {

/// Worker count for parallel kernels: HARQ_WORKERS when set to a positive
/// integer, otherwise the OpenMP default. Throws std::invalid_argument on a
/// malformed HARQ_WORKERS value.
int default_workers();

/// True when the library was built with OpenMP.
bool openmp_enabled();

}  // namespace harq
