#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gausssep/types.hpp"

namespace gausssep::fock {

// Default budget for the trace lost to truncation.
inline constexpr double kTauTrunc = 1e-8;
// Default bound on |alpha|, |beta| accepted by characteristic_fn.
inline constexpr double kCharDomainBound = 3.0;

/// Per-mode Fock truncation; the retained basis is {0, .., per_mode - 1}
/// in each mode, total dimension per_mode^2.
struct FockCutoff {
  int per_mode = 0;
};

/// Total-dimension cap, from GAUSS_SEP_MAX_DIM if set, else 4096.
int max_total_dim();

/// Throws std::invalid_argument unless 2 <= N and N^2 <= max_total_dim().
void validate(FockCutoff cutoff);

/// Smallest N whose geometric tails leave a trace deficit within tau,
/// clamped to the total-dimension cap.
FockCutoff auto_cutoff(const GaussianParams& params, double tau_trunc = kTauTrunc);

/// A truncated two-mode operator in the product basis |j,k> with flat
/// index j*N + k. trace_deficit records 1 - trace (truncation loss).
struct FockDensityOp {
  Eigen::MatrixXcd matrix;
  FockCutoff cutoff;
  double trace_deficit = 0.0;
};

/// Schmidt-diagonal pure state sqrt(1-|l|^2) sum_j l^j |j,j>.
struct PureState {
  Eigen::VectorXcd amplitudes;  // length N^2, nonzero only on |j,j>
  Complex lambda{0.0, 0.0};
  FockCutoff cutoff;
};

struct Moments {
  double n_a = 0.0;
  double n_b = 0.0;
  Complex m{0.0, 0.0};
};

/// Direct assembly of the two-mode Gaussian: pair-creation exponential,
/// thermal diagonal, pair-annihilation exponential, with the closed-form
/// normalization. Requires a trace-class parameter point. When
/// enforce_budget is set, a trace deficit beyond tau_trunc throws
/// TruncationError.
FockDensityOp build_gaussian_fock(const GaussianParams& params, FockCutoff cutoff,
                                  bool enforce_budget = true,
                                  double tau_trunc = kTauTrunc);

/// Same operator assembled as S^H (G1 G2) S from explicit truncated ladder
/// matrices and a terminating matrix-exponential series.
FockDensityOp build_sandwich_fock(const GaussianParams& params, FockCutoff cutoff,
                                  bool enforce_budget = true,
                                  double tau_trunc = kTauTrunc);

/// Max deviation, over number states j < N - guard, between the normally
/// ordered series sum_k (-zeta)^k/k! (a^H)^k a^k and (1 - zeta)^{a^H a}.
/// Accumulated in extended precision; the series alternates violently for
/// |zeta| > 1 and double precision alone cannot resolve it.
double normal_ordered_identity_check(Complex zeta, FockCutoff cutoff, int guard = 0);

/// (Tr{a^H a rho}, Tr{b^H b rho}, -Tr{a b rho}).
Moments moments(const FockDensityOp& rho);

/// Tr{ D_a(alpha) rho D_b(beta) } with displacement matrices whose entries
/// are the exact infinite-dimensional ones restricted to the cutoff.
Complex characteristic_fn(const FockDensityOp& rho, Complex alpha, Complex beta);

/// Entrywise partial transpose of mode a: out[(j,k),(j',k')] = in[(j',k),(j,k')].
FockDensityOp partial_transpose_fock(const FockDensityOp& rho);

/// Smallest eigenvalue of a Hermitian matrix (dense solve).
double min_eigenvalue(const Eigen::MatrixXcd& h);

PureState build_pure_state(Complex lambda, FockCutoff cutoff,
                           double tau_trunc = kTauTrunc);

/// Two-mode squeezed vacuum with lambda = tanh(r).
PureState build_nopa(double r, FockCutoff cutoff, double tau_trunc = kTauTrunc);

FockDensityOp to_density(const PureState& psi);

/// <psi| rho |psi>, returned as its real part (imaginary part is rounding).
double expectation(const FockDensityOp& rho, const PureState& psi);

/// Closed-form position wave function of the Schmidt-diagonal pure state,
/// real lambda in [0, 1), units hbar = 1 and unit oscillator length.
double position_wavefunction(double lambda, double x1, double x2);

/// Single-mode displacement matrix exp(gamma a^H - gamma^* a), N x N.
Eigen::MatrixXcd displacement(Complex gamma, int n);

// --- Photon-number-difference block structure (restricted-form states) ---
//
// The restricted Gaussian couples |j,k> only to |j',k'> with j-k = j'-k'.
// Blocks for d = j-k = 0 .. N-1 (the d < 0 blocks are mirror images under
// mode swap); block d has dimension N-d, row index t <-> state |t+d, t>.

std::vector<Eigen::MatrixXcd> gaussian_sectors(const GaussianParams& params,
                                               FockCutoff cutoff);

/// Trace of the operator described by its sector blocks.
double sector_trace(const std::vector<Eigen::MatrixXcd>& sectors);

/// Scatter sector blocks into the dense N^2 x N^2 matrix.
Eigen::MatrixXcd sectors_to_dense(const std::vector<Eigen::MatrixXcd>& sectors);

/// min eig of the operator described by its sector blocks.
double sectors_min_eigenvalue(const std::vector<Eigen::MatrixXcd>& sectors);

/// min eig of its partial transpose, block diagonal over total photon number.
double sectors_ppt_min_eigenvalue(const std::vector<Eigen::MatrixXcd>& sectors);

/// Per-sector solves for the Gaussian itself (O(N^4) instead of O(N^6)).
double gaussian_min_eigenvalue(const GaussianParams& params, FockCutoff cutoff);

double gaussian_ppt_min_eigenvalue(const GaussianParams& params, FockCutoff cutoff);

}  // namespace gausssep::fock
