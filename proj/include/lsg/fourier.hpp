#pragma once

#include "lsg/grid.hpp"

#include <span>
#include <vector>

namespace lsg {

/// Trapezoidal Fourier transform on the centred lattice:
///   out(xi_m) = h^l * sum_k v(x_k) exp(-i <xi_m, x_k>),  xi_m on grid.dual().
std::vector<cplx> centered_forward(const RadialGrid& grid, std::span<const cplx> values);

/// Inverse of centered_forward:
///   out(x_k) = (2 pi)^-l * h_dual^l * sum_m V(xi_m) exp(+i <xi_m, x_k>).
std::vector<cplx> centered_inverse(const RadialGrid& grid, std::span<const cplx> spectrum);

/// Sum of plane waves evaluated on a tensor grid:
///   out(y) = sum_j weights[j] * exp(i * sign * <k_j, y>)
/// `wave_vectors` holds J rows of length grid.rank(), flattened row-major.
std::vector<cplx> plane_wave_sum(const RadialGrid& grid, std::span<const double> wave_vectors,
                                 std::span<const cplx> weights, int sign);

/// Same sum evaluated at arbitrary points (flattened row-major, `rank` columns).
std::vector<cplx> plane_wave_sum_at(int rank, std::span<const double> points, std::span<const double> wave_vectors,
                                    std::span<const cplx> weights, int sign);

/// Worker count: hardware concurrency capped by LSG_THREADS when set.
unsigned worker_count();

}  // namespace lsg
