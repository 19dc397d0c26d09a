#include "gausssep/fock.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "gausssep/covariance.hpp"

namespace gausssep::fock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GaussianCoeffs {
  double big_d;    // (n+1)^2 - |m|^2, positive on the trace-class region
  Complex c;       // m / D, pair-creation coefficient
  double g;        // (n(n+1) - |m|^2) / D, thermal base
  double m_abs;
};

GaussianCoeffs coeffs_for(const GaussianParams& p) {
  const double ma = std::abs(p.m);
  const double big_d = (p.n + 1.0) * (p.n + 1.0) - ma * ma;
  return GaussianCoeffs{big_d, p.m / big_d,
                        (p.n * (p.n + 1.0) - ma * ma) / big_d, ma};
}

void require_trace_class(const GaussianParams& p, const char* op) {
  if (!is_finite(p)) {
    throw std::invalid_argument(std::string(op) + ": non-finite parameters");
  }
  if (cov::classify(p).region == Region::InvalidTraceClass) {
    throw std::domain_error(std::string(op) +
                            ": parameters violate |m| < n + 1/2; no trace-class "
                            "Gaussian operator exists at this point");
  }
}

// Integer power with 0^0 = 1, valid for negative bases.
double pow_int(double base, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= base;
  return r;
}

// Geometric decay rate of the truncation tail. The per-mode marginal of a
// valid state is thermal with mean n (rate n/(n+1)); the magnitude sum of a
// diagonal entry grows like (|c|+|g|)^2 per rung, which dominates in the
// Wigner-only regime. Both stay below 1 strictly inside the trace-class
// region and reduce to g resp. (|m|/(n+1))^2 in the thermal and pure limits.
double tail_rate(const GaussianParams& p) {
  const GaussianCoeffs co = coeffs_for(p);
  const double mag = std::abs(co.c) + std::abs(co.g);
  return std::max(p.n > 0.0 ? p.n / (p.n + 1.0) : 0.0, mag * mag);
}

int suggest_cutoff(const GaussianParams& p, double tau) {
  const double q = tail_rate(p);
  if (q <= 0.0) return 2;
  const double need = std::log(tau / 10.0) / std::log(q);
  return std::max(2, static_cast<int>(std::ceil(need)));
}

FockDensityOp finalize(Eigen::MatrixXcd&& mat, FockCutoff cutoff, const char* op,
                       bool enforce_budget, double tau,
                       const GaussianParams& params) {
  FockDensityOp rho;
  rho.matrix = std::move(mat);
  rho.cutoff = cutoff;
  rho.trace_deficit = 1.0 - rho.matrix.trace().real();
  if (enforce_budget && std::abs(rho.trace_deficit) > tau) {
    const int sugg = std::max(suggest_cutoff(params, tau), cutoff.per_mode + 8);
    throw TruncationError(
        std::string(op) + ": trace deficit " + std::to_string(rho.trace_deficit) +
            " exceeds budget " + std::to_string(tau) +
            "; retry with per-mode cutoff >= " + std::to_string(sugg),
        rho.trace_deficit, sugg);
  }
  return rho;
}

}  // namespace

int max_total_dim() {
  if (const char* env = std::getenv("GAUSS_SEP_MAX_DIM")) {
    const int v = std::atoi(env);
    if (v >= 4) return v;
  }
  return 4096;
}

void validate(FockCutoff cutoff) {
  const int n = cutoff.per_mode;
  if (n < 2) {
    throw std::invalid_argument("Fock cutoff must be at least 2 per mode");
  }
  const int cap = max_total_dim();
  if (static_cast<long long>(n) * n > cap) {
    throw std::invalid_argument("Fock dimension " + std::to_string(n) + "^2 exceeds cap " +
                                std::to_string(cap) +
                                " (override with GAUSS_SEP_MAX_DIM)");
  }
}

FockCutoff auto_cutoff(const GaussianParams& params, double tau_trunc) {
  require_trace_class(params, "auto_cutoff");
  const int cap_n = static_cast<int>(std::sqrt(static_cast<double>(max_total_dim())));
  const int n = std::clamp(suggest_cutoff(params, tau_trunc), 2, cap_n);
  return FockCutoff{n};
}

// Sector blocks of the restricted Gaussian. Within the d = j-k sector the
// u-sum below has a common complex phase, so magnitudes are accumulated by
// log-sum-exp over positive terms; there is no cancellation.
std::vector<Eigen::MatrixXcd> gaussian_sectors(const GaussianParams& params,
                                               FockCutoff cutoff) {
  require_trace_class(params, "gaussian_sectors");
  validate(cutoff);
  const int n_max = cutoff.per_mode;
  const GaussianCoeffs co = coeffs_for(params);
  const double pref = 1.0 / co.big_d;

  std::vector<double> lg(n_max + 1);
  for (int i = 0; i <= n_max; ++i) lg[i] = std::lgamma(static_cast<double>(i) + 1.0);

  std::vector<Eigen::MatrixXcd> sectors;
  sectors.reserve(n_max);

  if (co.m_abs == 0.0) {  // product of thermal states: diagonal
    for (int d = 0; d < n_max; ++d) {
      Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n_max - d, n_max - d);
      for (int t = 0; t < n_max - d; ++t) {
        block(t, t) = pref * pow_int(co.g, 2 * t + d);
      }
      sectors.push_back(std::move(block));
    }
    return sectors;
  }

  const double log_c = std::log(std::abs(co.c));
  const double log_g = co.g == 0.0 ? -kInf : std::log(std::abs(co.g));
  const Complex eta = -co.c / std::abs(co.c);
  const double sign_g = co.g < 0.0 ? -1.0 : 1.0;

  for (int d = 0; d < n_max; ++d) {
    const int sz = n_max - d;
    Eigen::MatrixXcd block(sz, sz);
    const double gd_sign = pow_int(sign_g, d);
    for (int t = 0; t < sz; ++t) {
      for (int tp = t; tp < sz; ++tp) {
        const int u_max = t;  // t <= tp
        double peak = -kInf;
        std::vector<double> logs(u_max + 1);
        for (int u = 0; u <= u_max; ++u) {
          const int pc = t + tp - 2 * u;  // power of |c|
          const int pg = 2 * u + d;       // power of |g|
          double lv = 0.5 * (lg[t + d] + lg[t] + lg[tp + d] + lg[tp]) -
                      lg[u + d] - lg[u] - lg[t - u] - lg[tp - u];
          if (pc > 0) lv += pc * log_c;
          if (pg > 0) lv += pg * log_g;
          logs[u] = lv;
          peak = std::max(peak, lv);
        }
        Complex value(0.0, 0.0);
        if (peak > -kInf) {
          double acc = 0.0;
          for (int u = 0; u <= u_max; ++u) acc += std::exp(logs[u] - peak);
          const double mag = pref * std::exp(peak) * acc;
          // phase eta^(t - tp) with |eta| = 1 and t <= tp here
          Complex phase = gd_sign * Complex(1.0, 0.0);
          for (int i = 0; i < tp - t; ++i) phase *= std::conj(eta);
          value = mag * phase;
        }
        block(t, tp) = value;
        block(tp, t) = std::conj(value);
      }
    }
    sectors.push_back(std::move(block));
  }
  return sectors;
}

double sector_trace(const std::vector<Eigen::MatrixXcd>& sectors) {
  double tr = 0.0;
  for (std::size_t d = 0; d < sectors.size(); ++d) {
    tr += (d == 0 ? 1.0 : 2.0) * sectors[d].trace().real();
  }
  return tr;
}

Eigen::MatrixXcd sectors_to_dense(const std::vector<Eigen::MatrixXcd>& sectors) {
  const int n_max = static_cast<int>(sectors.size());
  const int dim = n_max * n_max;
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(dim, dim);
  for (int d = 0; d < n_max; ++d) {
    const int sz = n_max - d;
    for (int t = 0; t < sz; ++t) {
      for (int tp = 0; tp < sz; ++tp) {
        const Complex v = sectors[d](t, tp);
        mat((t + d) * n_max + t, (tp + d) * n_max + tp) = v;
        if (d > 0) mat(t * n_max + (t + d), tp * n_max + (tp + d)) = v;
      }
    }
  }
  return mat;
}

FockDensityOp build_gaussian_fock(const GaussianParams& params, FockCutoff cutoff,
                                  bool enforce_budget, double tau_trunc) {
  Eigen::MatrixXcd mat = sectors_to_dense(gaussian_sectors(params, cutoff));
  return finalize(std::move(mat), cutoff, "build_gaussian_fock", enforce_budget,
                  tau_trunc, params);
}

FockDensityOp build_sandwich_fock(const GaussianParams& params, FockCutoff cutoff,
                                  bool enforce_budget, double tau_trunc) {
  require_trace_class(params, "build_sandwich_fock");
  validate(cutoff);
  const int n_max = cutoff.per_mode;
  const int dim = n_max * n_max;
  const GaussianCoeffs co = coeffs_for(params);

  using SpMat = Eigen::SparseMatrix<Complex>;
  using Triplet = Eigen::Triplet<Complex>;

  // ab on the product space: one entry per column.
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(dim));
  for (int j = 1; j < n_max; ++j) {
    for (int k = 1; k < n_max; ++k) {
      trips.emplace_back((j - 1) * n_max + (k - 1), j * n_max + k,
                         std::sqrt(static_cast<double>(j) * k));
    }
  }
  SpMat ab(dim, dim);
  ab.setFromTriplets(trips.begin(), trips.end());

  SpMat ident(dim, dim);
  ident.setIdentity();

  // exp(-c* ab) by its power series; (ab)^N vanishes on the truncated space,
  // so the series terminates.
  const Complex z = -std::conj(co.c);
  SpMat series = ident;
  SpMat term = ident;
  for (int k = 1; k < n_max; ++k) {
    term = (term * ab).pruned();
    term = term * (z / static_cast<double>(k));
    if (term.nonZeros() == 0) break;
    series += term;
  }

  const double s0 = std::sqrt(co.big_d) / (params.n + 1.0);
  const SpMat s_op = series * s0;

  SpMat thermal(dim, dim);
  thermal.reserve(Eigen::VectorXi::Constant(dim, 1));
  const double norm12 = (1.0 - co.g) * (1.0 - co.g);
  for (int j = 0; j < n_max; ++j) {
    for (int k = 0; k < n_max; ++k) {
      const int idx = j * n_max + k;
      thermal.insert(idx, idx) = norm12 * pow_int(co.g, j + k);
    }
  }

  const SpMat middle = (thermal * s_op).pruned();
  const SpMat product = (SpMat(s_op.adjoint()) * middle).pruned();
  Eigen::MatrixXcd mat = Eigen::MatrixXcd(product);
  return finalize(std::move(mat), cutoff, "build_sandwich_fock", enforce_budget,
                  tau_trunc, params);
}

// Extended-precision complex scalar; the alternating binomial sums checked
// below exceed double precision for |zeta| > 1 long before the cutoff.
namespace {
struct Quad {
  __float128 re = 0;
  __float128 im = 0;
};
Quad qmul(Quad a, Quad b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
Quad qscale(Quad a, __float128 s) { return {a.re * s, a.im * s}; }
Quad qadd(Quad a, Quad b) { return {a.re + b.re, a.im + b.im}; }
Quad qsub(Quad a, Quad b) { return {a.re - b.re, a.im - b.im}; }
}  // namespace

double normal_ordered_identity_check(Complex zeta, FockCutoff cutoff, int guard) {
  validate(cutoff);
  if (std::abs(zeta) > 4.0) {
    throw std::domain_error("normal_ordered_identity_check: |zeta| must be <= 4");
  }
  if (guard < 0 || guard >= cutoff.per_mode) {
    throw std::invalid_argument("normal_ordered_identity_check: bad guard");
  }
  const Quad neg_zeta{-static_cast<__float128>(zeta.real()),
                      -static_cast<__float128>(zeta.imag())};
  const Quad one_minus{1 + neg_zeta.re, neg_zeta.im};

  double worst = 0.0;
  Quad direct{1, 0};  // (1 - zeta)^j
  for (int j = 0; j < cutoff.per_mode - guard; ++j) {
    // sum_k (-zeta)^k / k! * j!/(j-k)!  ==  sum_k C(j,k) (-zeta)^k
    Quad series{1, 0};
    Quad term{1, 0};
    for (int k = 0; k < j; ++k) {
      term = qmul(term, neg_zeta);
      term = qscale(term, static_cast<__float128>(j - k) / (k + 1));
      series = qadd(series, term);
    }
    const Quad diff = qsub(series, direct);
    worst = std::max(worst, std::hypot(static_cast<double>(diff.re),
                                       static_cast<double>(diff.im)));
    direct = qmul(direct, one_minus);
  }
  return worst;
}

Moments moments(const FockDensityOp& rho) {
  const int n_max = rho.cutoff.per_mode;
  const int dim = n_max * n_max;
  if (rho.matrix.rows() != dim || rho.matrix.cols() != dim) {
    throw std::invalid_argument("moments: matrix size does not match cutoff");
  }
  Moments out;
  Complex tr_ab(0.0, 0.0);
  for (int j = 0; j < n_max; ++j) {
    for (int k = 0; k < n_max; ++k) {
      const double pop = rho.matrix(j * n_max + k, j * n_max + k).real();
      out.n_a += j * pop;
      out.n_b += k * pop;
      if (j + 1 < n_max && k + 1 < n_max) {
        tr_ab += std::sqrt(static_cast<double>(j + 1) * (k + 1)) *
                 rho.matrix((j + 1) * n_max + (k + 1), j * n_max + k);
      }
    }
  }
  out.m = -tr_ab;
  return out;
}

Eigen::MatrixXcd displacement(Complex gamma, int n) {
  Eigen::MatrixXcd d(n, n);
  const double x = std::norm(gamma);
  if (x == 0.0) return Eigen::MatrixXcd::Identity(n, n);

  // lagu(a, k) = L_k^{(a)}(x), generalized Laguerre, forward recurrence in k.
  Eigen::MatrixXd lagu(n, n);
  for (int a = 0; a < n; ++a) {
    lagu(a, 0) = 1.0;
    if (n > 1) lagu(a, 1) = 1.0 + a - x;
    for (int k = 2; k < n; ++k) {
      lagu(a, k) = ((2.0 * k - 1.0 + a - x) * lagu(a, k - 1) -
                    (k - 1.0 + a) * lagu(a, k - 2)) /
                   k;
    }
  }

  const double front = std::exp(-0.5 * x);
  for (int k = 0; k < n; ++k) {
    Complex coeff(front, 0.0);
    for (int j = k; j < n; ++j) {
      if (j > k) coeff *= gamma / std::sqrt(static_cast<double>(j));
      d(j, k) = coeff * lagu(j - k, k);
    }
    coeff = Complex(front, 0.0);
    for (int j = k - 1; j >= 0; --j) {
      coeff *= -std::conj(gamma) / std::sqrt(static_cast<double>(j + 1));
      d(j, k) = coeff * lagu(k - j, j);
    }
  }
  return d;
}

Complex characteristic_fn(const FockDensityOp& rho, Complex alpha, Complex beta) {
  if (std::abs(alpha) > kCharDomainBound || std::abs(beta) > kCharDomainBound) {
    throw std::domain_error("characteristic_fn: |alpha| and |beta| must be <= " +
                            std::to_string(kCharDomainBound));
  }
  const int n_max = rho.cutoff.per_mode;
  const Eigen::MatrixXcd da = displacement(alpha, n_max);
  const Eigen::MatrixXcd db = displacement(beta, n_max);

  // Tr{D_a rho D_b} = sum_{j,j'} D_a(j',j) Tr{ rho_block(j,j') D_b }.
  Complex total(0.0, 0.0);
  for (int j = 0; j < n_max; ++j) {
    for (int jp = 0; jp < n_max; ++jp) {
      const Complex block_tr =
          rho.matrix.block(j * n_max, jp * n_max, n_max, n_max)
              .transpose()
              .cwiseProduct(db)
              .sum();
      total += da(jp, j) * block_tr;
    }
  }
  return total;
}

FockDensityOp partial_transpose_fock(const FockDensityOp& rho) {
  const int n_max = rho.cutoff.per_mode;
  const int dim = n_max * n_max;
  if (rho.matrix.rows() != dim || rho.matrix.cols() != dim) {
    throw std::invalid_argument("partial_transpose_fock: matrix/cutoff mismatch");
  }
  FockDensityOp out;
  out.cutoff = rho.cutoff;
  out.trace_deficit = rho.trace_deficit;
  out.matrix.resize(dim, dim);
  for (int j = 0; j < n_max; ++j) {
    for (int jp = 0; jp < n_max; ++jp) {
      out.matrix.block(j * n_max, jp * n_max, n_max, n_max) =
          rho.matrix.block(jp * n_max, j * n_max, n_max, n_max);
    }
  }
  return out;
}

double min_eigenvalue(const Eigen::MatrixXcd& h) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("min_eigenvalue: matrix must be square");
  }
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  const double asym = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * scale) {
    throw std::invalid_argument("min_eigenvalue: matrix is not Hermitian (asymmetry " +
                                std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

PureState build_pure_state(Complex lambda, FockCutoff cutoff, double tau_trunc) {
  validate(cutoff);
  const double la = std::abs(lambda);
  if (la >= 1.0) {
    throw std::domain_error(
        "build_pure_state: |lambda| must be < 1 (the limit is the "
        "non-normalizable EPR state)");
  }
  const int n_max = cutoff.per_mode;
  const double tail = std::pow(la, 2.0 * n_max);
  if (tail > tau_trunc) {
    const int sugg = static_cast<int>(std::ceil(std::log(tau_trunc) / (2.0 * std::log(la)))) + 2;
    throw TruncationError("build_pure_state: truncation tail " + std::to_string(tail) +
                              " exceeds budget; need per-mode cutoff >= " +
                              std::to_string(sugg),
                          tail, sugg);
  }
  PureState psi;
  psi.lambda = lambda;
  psi.cutoff = cutoff;
  psi.amplitudes = Eigen::VectorXcd::Zero(n_max * n_max);
  const double head = std::sqrt(1.0 - la * la);
  Complex amp(head, 0.0);
  for (int j = 0; j < n_max; ++j) {
    psi.amplitudes(j * n_max + j) = amp;
    amp *= lambda;
  }
  return psi;
}

PureState build_nopa(double r, FockCutoff cutoff, double tau_trunc) {
  validate(cutoff);
  if (!std::isfinite(r)) {
    throw std::invalid_argument("build_nopa: non-finite squeezing parameter");
  }
  const double lambda = std::tanh(r);
  const double tail = std::pow(std::abs(lambda), 2.0 * cutoff.per_mode);
  if (tail > tau_trunc) {
    throw TruncationError("build_nopa: squeezing too strong for this cutoff (tail " +
                              std::to_string(tail) + ")",
                          tail, cutoff.per_mode * 2);
  }
  return build_pure_state(Complex(lambda, 0.0), cutoff, tau_trunc);
}

FockDensityOp to_density(const PureState& psi) {
  FockDensityOp rho;
  rho.cutoff = psi.cutoff;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  rho.trace_deficit = 1.0 - psi.amplitudes.squaredNorm();
  return rho;
}

double expectation(const FockDensityOp& rho, const PureState& psi) {
  if (rho.cutoff.per_mode != psi.cutoff.per_mode) {
    throw std::invalid_argument("expectation: cutoff mismatch");
  }
  return (psi.amplitudes.adjoint() * rho.matrix * psi.amplitudes)(0, 0).real();
}

double position_wavefunction(double lambda, double x1, double x2) {
  if (!(lambda >= 0.0 && lambda < 1.0)) {
    throw std::domain_error("position_wavefunction: lambda must lie in [0, 1)");
  }
  if (!std::isfinite(x1) || !std::isfinite(x2)) {
    throw std::invalid_argument("position_wavefunction: non-finite coordinates");
  }
  const double l2 = lambda * lambda;
  const double quad = (1.0 + l2) * (x1 * x1 + x2 * x2) - 4.0 * lambda * x1 * x2;
  return std::exp(-quad / (2.0 * (1.0 - l2))) / std::sqrt(M_PI);
}

double sectors_min_eigenvalue(const std::vector<Eigen::MatrixXcd>& sectors) {
  double lo = kInf;
  for (const auto& block : sectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

double sectors_ppt_min_eigenvalue(const std::vector<Eigen::MatrixXcd>& sectors) {
  const int n_max = static_cast<int>(sectors.size());
  double lo = kInf;
  // The partial transpose is block diagonal over total photon number s.
  for (int s = 0; s <= 2 * (n_max - 1); ++s) {
    const int j_lo = std::max(0, s - n_max + 1);
    const int j_hi = std::min(n_max - 1, s);
    const int sz = j_hi - j_lo + 1;
    Eigen::MatrixXcd block(sz, sz);
    for (int r = 0; r < sz; ++r) {
      const int j = j_lo + r;
      for (int cidx = 0; cidx < sz; ++cidx) {
        const int jp = j_lo + cidx;
        const int d = j + jp - s;
        block(r, cidx) = d >= 0 ? sectors[d](s - j, s - jp) : sectors[-d](jp, j);
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block, Eigen::EigenvaluesOnly);
    lo = std::min(lo, es.eigenvalues()(0));
  }
  return lo;
}

double gaussian_min_eigenvalue(const GaussianParams& params, FockCutoff cutoff) {
  return sectors_min_eigenvalue(gaussian_sectors(params, cutoff));
}

double gaussian_ppt_min_eigenvalue(const GaussianParams& params, FockCutoff cutoff) {
  return sectors_ppt_min_eigenvalue(gaussian_sectors(params, cutoff));
}

}  // namespace gausssep::fock
