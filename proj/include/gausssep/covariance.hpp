#pragma once

#include <Eigen/Dense>

#include "gausssep/types.hpp"

namespace gausssep::cov {

using Matrix4c = Eigen::Matrix4cd;

// Absolute tolerance on eigenvalues and inequality slack at region boundaries.
inline constexpr double kBoundaryTol = 1e-9;
// Maximum tolerated Hermitian asymmetry before a matrix is rejected.
inline constexpr double kHermitianTol = 1e-12;
// Strictness margin below which the P form is treated as singular.
inline constexpr double kEpsP = 1e-6;

enum class MatrixKind { V, W, P };

const char* to_string(MatrixKind k);

/// A 4x4 Hermitian second-moment matrix in the basis (a*, a, b*, b),
/// tagged by its role (characteristic-function V, Wigner W, or P form).
struct CovMatrix {
  Matrix4c entries;
  MatrixKind kind = MatrixKind::V;
};

/// diag[1, -1, 1, -1].
const Matrix4c& matrix_E();

/// Swap of the first two basis slots (conjugation of mode a).
const Matrix4c& matrix_Ta();

/// Symmetrizes (M + M^H)/2 and tags the result. Rejects matrices whose
/// asymmetry exceeds kHermitianTol or that contain non-finite entries.
CovMatrix make_cov(const Matrix4c& m, MatrixKind kind);

/// Eigenvalues, ascending. Input is symmetrized before solving.
Eigen::Vector4d eigenvalues(const CovMatrix& m);

CovMatrix build_restricted_v(const GaussianParams& params);
CovMatrix build_standard_v(const StandardVParams& params);

/// W = E V^{-1} E and back; the transform is an involution.
CovMatrix v_to_w(const CovMatrix& v);
CovMatrix w_to_v(const CovMatrix& w);

/// P = E (V - I/2)^{-1} E. Requires V - I/2 positive definite beyond kEpsP.
CovMatrix p_matrix(const CovMatrix& v);

/// V -> (E Ta E) V (E Ta E); applying it twice restores the input.
CovMatrix partial_transpose_v(const CovMatrix& v);

/// min eig(V) > kBoundaryTol; restricted form: n + 1/2 > |m|.
bool check_trace_class(const CovMatrix& v);

/// min eig(V + E/2) >= -kBoundaryTol; restricted form: n(n+1) >= |m|^2.
bool check_positive_operator(const CovMatrix& v);

/// min eig(V - I/2) >= -kBoundaryTol; restricted form: n >= |m|.
bool check_p_representable(const CovMatrix& v);

/// Region of the (n, |m|) plane, boundary flags, and the slack of the
/// nearest boundary inequality (positive on the separable side).
Classification classify(const GaussianParams& params, double eps = kBoundaryTol);

}  // namespace gausssep::cov
