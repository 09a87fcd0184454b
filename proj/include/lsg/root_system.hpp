#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lsg {

/// A point of the Cartan subalgebra, in a fixed orthonormal basis.
struct CartanVector {
  Eigen::VectorXd coords;
};

/// Spectral parameters live in the dual, identified with the Cartan subalgebra
/// through the inner product.
using SpectralVector = CartanVector;

struct WeylElement {
  Eigen::MatrixXd matrix;
  double sign = 1.0;  // determinant, +1 or -1
};

/// Root system of a complex semi-simple group of low rank. Immutable once built.
struct RootSystemSpec {
  std::string name;
  int rank = 0;
  double normalization = 1.0;
  std::vector<Eigen::VectorXd> roots;
  std::vector<Eigen::VectorXd> positive_roots;
  std::vector<Eigen::VectorXd> simple_roots;
  Eigen::MatrixXd inner_product;  // Gram matrix of the basis (identity: basis is orthonormal)
  Eigen::VectorXd rho;
  std::vector<WeylElement> weyl_group;
};

inline constexpr std::size_t kWeylClosureCap = 10000;

/// Builds A1, A2, B2, G2 or a product such as "A1xA2". Long roots have squared
/// length 2 when normalization == 1; roots scale linearly with normalization.
RootSystemSpec build_root_system(std::string_view name, double normalization = 1.0);

const std::vector<WeylElement>& weyl_group(const RootSystemSpec& rs);

/// Breadth-first closure of the group generated by `generators`.
std::vector<Eigen::MatrixXd> close_matrix_group(const std::vector<Eigen::MatrixXd>& generators,
                                                std::size_t cap = kWeylClosureCap);

double pairing(const RootSystemSpec& rs, const CartanVector& h1, const CartanVector& h2);

struct DominantResult {
  CartanVector point;
  WeylElement element;  // point == element.matrix * input
};

DominantResult dominant_representative(const RootSystemSpec& rs, const CartanVector& h);

Eigen::VectorXd reflect(const Eigen::VectorXd& v, const Eigen::VectorXd& root);

}  // namespace lsg
