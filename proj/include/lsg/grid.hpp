#pragma once

#include "lsg/root_system.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace lsg {

using cplx = std::complex<double>;

/// Uniform Cartesian lattice on [-L, L)^rank with nodes -L + k * (2L / N).
/// N is even, so the origin is always a node (k = N / 2).
class RadialGrid {
 public:
  RadialGrid() = default;
  RadialGrid(int rank, double half_width, int points_per_axis);

  int rank() const { return rank_; }
  double half_width() const { return half_width_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return 2.0 * half_width_ / n_; }
  std::size_t node_count() const { return count_; }
  double cell_volume() const;

  double axis_coordinate(int k) const { return -half_width_ + k * spacing(); }
  std::vector<double> axis_coordinates() const;

  /// Writes the coordinates of flat node `index` (row-major, last axis fastest).
  void node(std::size_t index, std::span<double> out) const;
  Eigen::VectorXd node(std::size_t index) const;
  std::vector<int> multi_index(std::size_t index) const;
  std::size_t flat_index(std::span<const int> multi) const;

  /// True when some axis index is 0 or N-1.
  bool on_boundary(std::size_t index) const;
  /// True when every axis index lies in [1, N-2].
  bool interior(std::size_t index) const { return !on_boundary(index); }

  /// Index of the node at `point` if it coincides with one to 1e-9 * spacing.
  std::ptrdiff_t locate(std::span<const double> point) const;

  /// Frequency lattice paired with this grid by the discrete Fourier transform:
  /// spacing pi / L, half-width pi * N / (2L).
  RadialGrid dual() const;

  bool operator==(const RadialGrid&) const = default;

 private:
  int rank_ = 0;
  double half_width_ = 0.0;
  int n_ = 0;
  std::size_t count_ = 0;
};

enum class Representation {
  Plain,       // u itself, Weyl-invariant
  Conjugated,  // u * phi, Weyl-antisymmetric
};

struct BiInvariantField {
  RadialGrid grid;
  std::vector<cplx> values;
  Representation representation = Representation::Plain;
};

struct SpectralField {
  RadialGrid grid;
  std::vector<cplx> values;
};

/// Gaussian initial data exp(-(rate + i * chirp) |H|^2).
struct GaussianInit {
  double rate = 1.0;
  double chirp = 0.0;
  double amplitude = 1.0;

  cplx operator()(double r2) const;
};

GaussianInit parse_gaussian_init(std::string_view descriptor);

BiInvariantField sample_gaussian(const RadialGrid& grid, const GaussianInit& init);

/// Largest deviation from Weyl (anti)symmetry over node pairs related by a Weyl
/// element that maps grid nodes onto grid nodes, relative to max |value|.
double weyl_symmetry_defect(const RootSystemSpec& rs, const RadialGrid& grid, std::span<const cplx> values,
                            bool antisymmetric);

double max_abs(std::span<const cplx> values);

/// sqrt(sum |v|^2 * cell volume)
double l2_norm(const RadialGrid& grid, std::span<const cplx> values);

/// Relative L2 distance |a - b| / |b| on a common grid.
double relative_l2(std::span<const cplx> a, std::span<const cplx> b);

/// Largest |value| on the outermost layer of nodes relative to the global maximum
/// (0 for an identically zero field).
double boundary_tail(const RadialGrid& grid, std::span<const cplx> values);

}  // namespace lsg
