#pragma once

#include <string>

#include "grushin/field.hpp"
#include "grushin/hermite_spectral.hpp"

namespace grushin::io {

// Binary layouts, all little-endian:
//   field  "GRSF" u32 version, u32 d1, u32 d2, per axis (x then t) {u64 n, f64 start, f64 step},
//          then n_x * n_t complex values as (f64 re, f64 im), index ix * n_t + it
//   kernel "GRKN" u32 version, u32 k, f64 a, u32 route, u32 dim, per axis {u64 n, n f64 nodes, n f64 weights},
//          then the n x n complex kernel row-major
// Each writer also emits <path>.json with the header fields.

void write_field(const std::string& path, const SampledField& f);
SampledField read_field(const std::string& path);

void write_kernel(const std::string& path, const spectral::ProjectionKernel& k);
spectral::ProjectionKernel read_kernel(const std::string& path);

}  // namespace grushin::io
