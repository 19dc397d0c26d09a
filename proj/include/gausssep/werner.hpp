#pragma once

#include <array>
#include <vector>

#include "gausssep/fock.hpp"
#include "gausssep/types.hpp"

namespace gausssep::werner {

/// One term of a convex decomposition into coherent product projectors.
struct WernerComponent {
  double weight = 0.0;
  Complex alpha{0.0, 0.0};
  Complex beta{0.0, 0.0};
};

struct DecompositionReport {
  std::vector<WernerComponent> components;
  double trace_distance = 0.0;
  int nodes_per_axis = 0;
  std::array<double, 4> p_eigenvalues{};  // +inf along delta-singular axes
};

/// Value of the Gaussian P function at (alpha, beta). Requires strict
/// P-representability, n > |m| + kEpsP.
double p_function_value(const GaussianParams& params, Complex alpha, Complex beta);

/// Convex decomposition into coherent product states via Gauss-Hermite
/// quadrature along the principal axes of the P form. Boundary points with
/// n = |m| exactly (delta-singular P) place a single node on each
/// degenerate axis; points within kEpsP of the boundary but not on it are
/// rejected.
std::vector<WernerComponent> decompose(const GaussianParams& params,
                                       int nodes_per_axis);

/// sum_k w_k |alpha_k><alpha_k| (x) |beta_k><beta_k| on the truncated space.
fock::FockDensityOp reconstruct_fock(const std::vector<WernerComponent>& components,
                                     fock::FockCutoff cutoff);

/// Half the absolute-eigenvalue sum of rho1 - rho2.
double trace_distance(const fock::FockDensityOp& rho1, const fock::FockDensityOp& rho2);

/// decompose + reconstruct + certify against the direct construction.
DecompositionReport decompose_and_certify(const GaussianParams& params,
                                          int nodes_per_axis, fock::FockCutoff cutoff);

/// Gauss-Hermite nodes/weights for weight exp(-x^2) (Golub-Welsch).
void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace gausssep::werner
