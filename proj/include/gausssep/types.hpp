#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gausssep {

using Complex = std::complex<double>;

/// Parameters of the restricted two-mode Gaussian family: mean photon
/// number n per mode and the complex pair-correlation amplitude m.
struct GaussianParams {
  double n = 0.0;
  Complex m{0.0, 0.0};
};

/// Parameters of the full standard covariance form (two thermal numbers,
/// four complex correlation amplitudes).
struct StandardVParams {
  double n1 = 0.0;
  double n2 = 0.0;
  Complex m1{0.0, 0.0};
  Complex m2{0.0, 0.0};
  Complex ms{0.0, 0.0};
  Complex mc{0.0, 0.0};
};

enum class Region {
  InvalidTraceClass,  // covariance not positive definite; no trace-class operator
  WignerOnly,         // normalized positive Wigner function but not a density operator
  Entangled,          // density operator, not separable
  Separable,          // P-representable, hence a convex sum of coherent products
};

const char* to_string(Region r);
Region region_from_string(std::string_view s);

struct Classification {
  Region region = Region::Separable;
  bool on_pure_boundary = false;  // |m|^2 = n(n+1) within tolerance
  bool on_p_boundary = false;     // |m| = n within tolerance
  double margin = 0.0;            // signed slack of the nearest boundary inequality
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline bool is_finite(const GaussianParams& p) {
  return std::isfinite(p.n) && is_finite(p.m);
}

inline bool is_finite(const StandardVParams& p) {
  return std::isfinite(p.n1) && std::isfinite(p.n2) && is_finite(p.m1) &&
         is_finite(p.m2) && is_finite(p.ms) && is_finite(p.mc);
}

/// Thrown by transforms that must invert a (near-)singular matrix.
class SingularMatrixError : public std::domain_error {
 public:
  SingularMatrixError(const std::string& what, double min_abs_eigenvalue)
      : std::domain_error(what), min_abs_eigenvalue_(min_abs_eigenvalue) {}

  double min_abs_eigenvalue() const { return min_abs_eigenvalue_; }

 private:
  double min_abs_eigenvalue_;
};

/// Thrown when an operation requires a (strictly) P-representable state.
/// The message names the violated inequality.
class NotPRepresentableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when a Fock cutoff is too small for the requested accuracy.
class TruncationError : public std::domain_error {
 public:
  TruncationError(const std::string& what, double deficit, int suggested_cutoff)
      : std::domain_error(what),
        deficit_(deficit),
        suggested_cutoff_(suggested_cutoff) {}

  double deficit() const { return deficit_; }
  int suggested_cutoff() const { return suggested_cutoff_; }

 private:
  double deficit_;
  int suggested_cutoff_;
};

}  // namespace gausssep
