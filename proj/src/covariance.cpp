#include "gausssep/covariance.hpp"

#include <algorithm>
#include <cmath>

namespace gausssep {

const char* to_string(Region r) {
  switch (r) {
    case Region::InvalidTraceClass: return "InvalidTraceClass";
    case Region::WignerOnly: return "WignerOnly";
    case Region::Entangled: return "Entangled";
    case Region::Separable: return "Separable";
  }
  return "?";
}

Region region_from_string(std::string_view s) {
  if (s == "InvalidTraceClass") return Region::InvalidTraceClass;
  if (s == "WignerOnly") return Region::WignerOnly;
  if (s == "Entangled") return Region::Entangled;
  if (s == "Separable") return Region::Separable;
  throw std::invalid_argument("unknown region name: " + std::string(s));
}

namespace cov {

const char* to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::V: return "V";
    case MatrixKind::W: return "W";
    case MatrixKind::P: return "P";
  }
  return "?";
}

const Matrix4c& matrix_E() {
  static const Matrix4c e = [] {
    Matrix4c m = Matrix4c::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    m(2, 2) = 1.0;
    m(3, 3) = -1.0;
    return m;
  }();
  return e;
}

const Matrix4c& matrix_Ta() {
  static const Matrix4c t = [] {
    Matrix4c m = Matrix4c::Zero();
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    m(2, 2) = 1.0;
    m(3, 3) = 1.0;
    return m;
  }();
  return t;
}

CovMatrix make_cov(const Matrix4c& m, MatrixKind kind) {
  if (!m.allFinite()) {
    throw std::invalid_argument("covariance-type matrix has non-finite entries");
  }
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol) {
    throw std::invalid_argument("matrix is not Hermitian: asymmetry " +
                                std::to_string(asym));
  }
  CovMatrix out;
  out.entries = 0.5 * (m + m.adjoint());
  out.kind = kind;
  return out;
}

Eigen::Vector4d eigenvalues(const CovMatrix& m) {
  const Matrix4c h = 0.5 * (m.entries + m.entries.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

namespace {

double min_eig(const Matrix4c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (h + h.adjoint()),
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

void require_kind(const CovMatrix& m, MatrixKind expected, const char* op) {
  if (m.kind != expected) {
    throw std::invalid_argument(std::string(op) + " expects a matrix of kind " +
                                to_string(expected) + ", got " +
                                to_string(m.kind));
  }
}

// Inverse through the eigendecomposition so near-singularity is reported
// with the offending eigenvalue.
Matrix4c invert(const Matrix4c& h, const char* op) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (h + h.adjoint()));
  const Eigen::Vector4d evs = es.eigenvalues();
  const double min_abs = evs.cwiseAbs().minCoeff();
  if (min_abs <= 1e-12) {
    throw SingularMatrixError(std::string(op) + ": matrix is singular (min |eigenvalue| = " +
                                  std::to_string(min_abs) + ")",
                              min_abs);
  }
  return es.eigenvectors() * evs.cwiseInverse().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

CovMatrix build_restricted_v(const GaussianParams& params) {
  if (!is_finite(params)) {
    throw std::invalid_argument("build_restricted_v: non-finite parameters");
  }
  const double d = params.n + 0.5;
  Matrix4c v = Matrix4c::Zero();
  v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = d;
  v(0, 3) = params.m;
  v(1, 2) = std::conj(params.m);
  v(2, 1) = params.m;
  v(3, 0) = std::conj(params.m);
  return CovMatrix{v, MatrixKind::V};
}

CovMatrix build_standard_v(const StandardVParams& p) {
  if (!is_finite(p)) {
    throw std::invalid_argument("build_standard_v: non-finite parameters");
  }
  Matrix4c v;
  const double d1 = p.n1 + 0.5;
  const double d2 = p.n2 + 0.5;
  v << Complex(d1), p.m1, p.ms, p.mc,
      std::conj(p.m1), Complex(d1), std::conj(p.mc), std::conj(p.ms),
      std::conj(p.ms), p.mc, Complex(d2), p.m2,
      std::conj(p.mc), p.ms, std::conj(p.m2), Complex(d2);
  return CovMatrix{v, MatrixKind::V};
}

CovMatrix v_to_w(const CovMatrix& v) {
  require_kind(v, MatrixKind::V, "v_to_w");
  const Matrix4c w = matrix_E() * invert(v.entries, "v_to_w") * matrix_E();
  return make_cov(w, MatrixKind::W);
}

CovMatrix w_to_v(const CovMatrix& w) {
  require_kind(w, MatrixKind::W, "w_to_v");
  const Matrix4c v = matrix_E() * invert(w.entries, "w_to_v") * matrix_E();
  return make_cov(v, MatrixKind::V);
}

CovMatrix p_matrix(const CovMatrix& v) {
  require_kind(v, MatrixKind::V, "p_matrix");
  const Matrix4c shifted = v.entries - 0.5 * Matrix4c::Identity();
  const double lo = min_eig(shifted);
  if (lo <= kEpsP) {
    throw NotPRepresentableError(
        "p_matrix: V - I/2 is not positive definite (min eigenvalue " +
        std::to_string(lo) +
        "); the state admits at most a delta-singular P form");
  }
  const Matrix4c p = matrix_E() * invert(shifted, "p_matrix") * matrix_E();
  return make_cov(p, MatrixKind::P);
}

CovMatrix partial_transpose_v(const CovMatrix& v) {
  require_kind(v, MatrixKind::V, "partial_transpose_v");
  const Matrix4c f = matrix_E() * matrix_Ta() * matrix_E();
  return make_cov(f * v.entries * f, MatrixKind::V);
}

bool check_trace_class(const CovMatrix& v) {
  require_kind(v, MatrixKind::V, "check_trace_class");
  return min_eig(v.entries) > kBoundaryTol;
}

bool check_positive_operator(const CovMatrix& v) {
  require_kind(v, MatrixKind::V, "check_positive_operator");
  return min_eig(v.entries + 0.5 * matrix_E()) >= -kBoundaryTol;
}

bool check_p_representable(const CovMatrix& v) {
  require_kind(v, MatrixKind::V, "check_p_representable");
  return min_eig(v.entries - 0.5 * Matrix4c::Identity()) >= -kBoundaryTol;
}

Classification classify(const GaussianParams& params, double eps) {
  if (!is_finite(params)) {
    throw std::invalid_argument("classify: non-finite parameters");
  }
  if (!(eps > 0.0)) {
    throw std::invalid_argument("classify: eps must be positive");
  }
  const double n = params.n;
  const double ma = std::abs(params.m);

  // Slacks of the three nested inequalities, positive on the separable side.
  const double tc_slack = n + 0.5 - ma;          // trace class: |m| < n + 1/2
  const double pos_slack = n * (n + 1.0) - ma * ma;  // positivity
  const double p_slack = n - ma;                 // P-representability

  // Relative scales: the P inequality is first order in (n, |m|), the
  // purity inequality second order.
  const double s1 = std::max({1.0, std::abs(n), ma});
  const double s2 = std::max({1.0, std::abs(n * (n + 1.0)), ma * ma});

  // Points within eps of the solid or dash-dotted line belong to the closed
  // (on-or-above) side; the trace-class constraint itself is strict.
  Classification c;
  if (tc_slack <= 0.0) {
    c.region = Region::InvalidTraceClass;
  } else if (pos_slack < -eps * s2) {
    c.region = Region::WignerOnly;
  } else if (p_slack < -eps * s1) {
    c.region = Region::Entangled;
  } else {
    c.region = Region::Separable;
  }
  c.on_pure_boundary = std::abs(pos_slack) <= eps * s2;
  c.on_p_boundary = std::abs(p_slack) <= eps * s1;

  // Binding inequality = the one with the smallest absolute slack.
  c.margin = tc_slack;
  if (std::abs(pos_slack) < std::abs(c.margin)) c.margin = pos_slack;
  if (std::abs(p_slack) < std::abs(c.margin)) c.margin = p_slack;
  return c;
}

}  // namespace cov
}  // namespace gausssep
