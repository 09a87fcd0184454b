#pragma once

#include "lsg/grid.hpp"
#include "lsg/propagator.hpp"
#include "lsg/root_system.hpp"

#include <limits>
#include <vector>

namespace lsg {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// ||u |phi|^(1-2/q)||_{L^q(G)} as the L^q(dH) norm of the conjugated profile.
/// q = kInfinity gives the grid sup.
double weighted_norm(const BiInvariantField& conjugated, double q);

/// The same quantity assembled from the Plain profile and the group density:
/// (sum |u|^q |phi|^(q-2) phi^2 dH)^(1/q). Wall nodes contribute zero.
double weighted_norm_assembled(const RootSystemSpec& rs, const BiInvariantField& plain, double q);

struct ExponentPair {
  double p = 0.0;
  double q = 0.0;
};

/// Admissible pair p = 2(l+2)/(l+4), q = 2(l+2)/l.
ExponentPair strichartz_pair(int rank);

/// Dual exponent p / (p - 1), with 1 -> infinity.
double dual_exponent(double p);

struct DecayFit {
  double slope = 0.0;
  double target = 0.0;  // -l (1/p - 1/2)
  std::vector<double> times;
  std::vector<double> norms;
};

/// Log-log slope of weighted_norm(u(t), p') over `times`.
DecayFit decay_exponent_fit(const RootSystemSpec& rs, const BiInvariantField& f, double p,
                            const std::vector<double>& times, double t_min = 1.0);

/// Conjugated profile u(t) * phi on a grid covering the input box, using the
/// closed form on its scaled lattice once that lattice is at least as wide as
/// the input box and the Fourier multiplier before.
BiInvariantField evolve_for_norms(const RootSystemSpec& rs, const BiInvariantField& f, double t);

struct StrichartzLevel {
  int dyadic_levels = 0;
  int nodes_per_interval = 0;
  double value = 0.0;  // (int_0^T ||u(t)||_q^q dt)^(1/q)
};

/// Space-time L^q norm of the evolution of f / ||f||_2 on (0, T], one entry per
/// refinement of the dyadic Gauss-Legendre time quadrature.
std::vector<StrichartzLevel> strichartz_norm(const RootSystemSpec& rs, const BiInvariantField& f, double T,
                                             int refinements, double q = 0.0);

/// Relative change between the last two refinement levels.
double strichartz_stabilization(const std::vector<StrichartzLevel>& levels);

struct InhomogeneousCheck {
  double lhs = 0.0;          // ||u phi||_{L^q_{t,x}} over (0, T]
  double data_norm = 0.0;    // ||f phi||_{L^2}
  double forcing_norm = 0.0; // ||psi phi||_{L^p_{t,x}}
  double ratio = 0.0;        // lhs / (data_norm + forcing_norm)
};

/// Both sides of the inhomogeneous Strichartz estimate for -i u_t - Delta u = psi.
InhomogeneousCheck strichartz_inhomogeneous_check(const RootSystemSpec& rs, const BiInvariantField& f,
                                                  const Forcing& psi, double T, int time_nodes = 12,
                                                  int duhamel_steps = 16);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace lsg
