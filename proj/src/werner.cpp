#include "gausssep/werner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gausssep/covariance.hpp"

namespace gausssep::werner {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Axes with variance at or below this (relative) bound are treated as the
// delta-singular directions of a boundary P form.
constexpr double kDeltaTol = 1e-13;

// v = (alpha, alpha*, beta, beta*) from u = (Re a, Im a, Re b, Im b).
Eigen::Matrix4cd basis_map() {
  Eigen::Matrix4cd t = Eigen::Matrix4cd::Zero();
  const Complex i(0.0, 1.0);
  t(0, 0) = 1.0; t(0, 1) = i;
  t(1, 0) = 1.0; t(1, 1) = -i;
  t(2, 2) = 1.0; t(2, 3) = i;
  t(3, 2) = 1.0; t(3, 3) = -i;
  return t;
}

struct PForm {
  Eigen::Vector4d variances;   // ascending eigenvalues of the covariance
  Eigen::Matrix4d axes;        // corresponding principal axes (columns)
  int delta_axes = 0;          // leading axes treated as exact deltas
};

// Covariance of the P Gaussian over (Re a, Im a, Re b, Im b):
// Sigma = T^H E (V - I/2) E T / 4. Finite for every trace-class point, so
// boundary (delta-singular) forms are handled without inverting anything.
PForm analyze_p_form(const GaussianParams& params) {
  const auto v = cov::build_restricted_v(params);
  const Eigen::Matrix4cd t = basis_map();
  const Eigen::Matrix4cd shifted =
      v.entries - 0.5 * Eigen::Matrix4cd::Identity();
  const Eigen::Matrix4cd k = cov::matrix_E() * shifted * cov::matrix_E();
  const Eigen::Matrix4d sigma = (0.25 * (t.adjoint() * k * t)).real();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(
      0.5 * (sigma + sigma.transpose()));
  PForm form;
  form.variances = es.eigenvalues();
  form.axes = es.eigenvectors();
  const double scale = std::max(1.0, form.variances.cwiseAbs().maxCoeff());
  for (int i = 0; i < 4; ++i) {
    if (form.variances(i) <= kDeltaTol * scale) {
      form.variances(i) = 0.0;
      ++form.delta_axes;
    }
  }
  return form;
}

void require_p_representable(const GaussianParams& params, const char* op,
                             bool allow_boundary) {
  if (!is_finite(params)) {
    throw std::invalid_argument(std::string(op) + ": non-finite parameters");
  }
  const double ma = std::abs(params.m);
  const double scale = std::max({1.0, params.n, ma});
  const double slack = params.n - ma;
  if (slack < -kDeltaTol * scale) {
    throw NotPRepresentableError(
        std::string(op) + ": state is not P-representable, the separability "
        "condition n >= |m| is violated (n = " + std::to_string(params.n) +
        ", |m| = " + std::to_string(ma) + ")");
  }
  if (allow_boundary && slack <= kDeltaTol * scale) {
    return;  // exact boundary, handled as a delta-singular P form
  }
  if (slack <= cov::kEpsP * scale) {
    throw NotPRepresentableError(
        std::string(op) + ": n - |m| = " + std::to_string(slack) +
        " is inside the strictness margin " + std::to_string(cov::kEpsP) +
        "; move onto the exact boundary (n = |m|) for delta-form handling "
        "or further inside the separable region");
  }
}

Eigen::VectorXcd coherent_vector(Complex amp, int n_max) {
  Eigen::VectorXcd v(n_max);
  Complex a(std::exp(-0.5 * std::norm(amp)), 0.0);
  for (int j = 0; j < n_max; ++j) {
    if (j > 0) a *= amp / std::sqrt(static_cast<double>(j));
    v(j) = a;
  }
  return v;
}

}  // namespace

void gauss_hermite(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: need at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  nodes.resize(n);
  weights.resize(n);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int i = 0; i < n; ++i) {
    nodes[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    weights[i] = sqrt_pi * v0 * v0;
  }
}

double p_function_value(const GaussianParams& params, Complex alpha, Complex beta) {
  require_p_representable(params, "p_function_value", /*allow_boundary=*/false);
  const auto p = cov::p_matrix(cov::build_restricted_v(params));
  Eigen::Vector4cd v;
  v << alpha, std::conj(alpha), beta, std::conj(beta);
  const double quad = (v.adjoint() * p.entries * v)(0, 0).real();
  const double det = p.entries.determinant().real();
  return std::sqrt(det) / (M_PI * M_PI) * std::exp(-0.5 * quad);
}

std::vector<WernerComponent> decompose(const GaussianParams& params,
                                       int nodes_per_axis) {
  if (nodes_per_axis < 3) {
    throw std::invalid_argument("decompose: nodes_per_axis must be >= 3");
  }
  require_p_representable(params, "decompose", /*allow_boundary=*/true);
  const PForm form = analyze_p_form(params);

  std::vector<double> gh_nodes, gh_weights;
  gauss_hermite(nodes_per_axis, gh_nodes, gh_weights);

  // Per-axis rules along the principal axes of the P form. The coherent
  // projector entries carry their own factor exp(-|u|^2); folding it into
  // the node placement (kappa -> kappa/(1+2 kappa), positively reweighted)
  // makes the rule exact for matrix elements of total order < 2M. A delta
  // axis contributes the single node 0.
  std::array<std::vector<double>, 4> axis_nodes, axis_weights;
  for (int i = 0; i < 4; ++i) {
    const double kappa = form.variances(i);
    if (kappa == 0.0) {
      axis_nodes[i] = {0.0};
      axis_weights[i] = {1.0};
      continue;
    }
    const double folded = kappa / (1.0 + 2.0 * kappa);
    const double stretch = std::sqrt(2.0 * folded);
    const double front = std::sqrt(folded / (M_PI * kappa));
    const double expo = 2.0 * kappa / (1.0 + 2.0 * kappa);
    for (int j = 0; j < nodes_per_axis; ++j) {
      const double t = gh_nodes[j];
      axis_nodes[i].push_back(t * stretch);
      axis_weights[i].push_back(gh_weights[j] * front * std::exp(expo * t * t));
    }
  }

  std::vector<WernerComponent> components;
  components.reserve(axis_nodes[0].size() * axis_nodes[1].size() *
                     axis_nodes[2].size() * axis_nodes[3].size());
  double total = 0.0;
  Eigen::Vector4d s;
  for (std::size_t i0 = 0; i0 < axis_nodes[0].size(); ++i0) {
    for (std::size_t i1 = 0; i1 < axis_nodes[1].size(); ++i1) {
      for (std::size_t i2 = 0; i2 < axis_nodes[2].size(); ++i2) {
        for (std::size_t i3 = 0; i3 < axis_nodes[3].size(); ++i3) {
          s << axis_nodes[0][i0], axis_nodes[1][i1], axis_nodes[2][i2],
              axis_nodes[3][i3];
          const Eigen::Vector4d u = form.axes * s;
          WernerComponent comp;
          comp.weight = axis_weights[0][i0] * axis_weights[1][i1] *
                        axis_weights[2][i2] * axis_weights[3][i3];
          comp.alpha = Complex(u(0), u(1));
          comp.beta = Complex(u(2), u(3));
          total += comp.weight;
          components.push_back(comp);
        }
      }
    }
  }
  for (auto& comp : components) comp.weight /= total;
  return components;
}

fock::FockDensityOp reconstruct_fock(const std::vector<WernerComponent>& components,
                                     fock::FockCutoff cutoff) {
  fock::validate(cutoff);
  if (components.empty()) {
    throw std::invalid_argument("reconstruct_fock: empty component list");
  }
  double total = 0.0;
  for (const auto& comp : components) {
    if (!(comp.weight > 0.0)) {
      throw std::invalid_argument("reconstruct_fock: weights must be positive");
    }
    total += comp.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("reconstruct_fock: weights must sum to 1, got " +
                                std::to_string(total));
  }

  const int n_max = cutoff.per_mode;
  const int dim = n_max * n_max;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);

  // rho += A A^H over chunks of sqrt(w)-scaled coherent product columns.
  const std::size_t chunk = std::max<std::size_t>(1, 2'000'000 / dim);
  Eigen::MatrixXcd cols(dim, std::min(chunk, components.size()));
  std::size_t filled = 0;
  auto flush = [&]() {
    if (filled == 0) return;
    rho.selfadjointView<Eigen::Lower>().rankUpdate(cols.leftCols(filled), 1.0);
    filled = 0;
  };
  for (const auto& comp : components) {
    const Eigen::VectorXcd ca = coherent_vector(comp.alpha, n_max);
    const Eigen::VectorXcd cb = coherent_vector(comp.beta, n_max);
    const double root_w = std::sqrt(comp.weight);
    for (int j = 0; j < n_max; ++j) {
      cols.col(filled).segment(j * n_max, n_max) = (root_w * ca(j)) * cb;
    }
    if (++filled == static_cast<std::size_t>(cols.cols())) flush();
  }
  flush();

  fock::FockDensityOp out;
  out.cutoff = cutoff;
  out.matrix = rho.selfadjointView<Eigen::Lower>();
  out.trace_deficit = 1.0 - out.matrix.trace().real();
  return out;
}

double trace_distance(const fock::FockDensityOp& rho1, const fock::FockDensityOp& rho2) {
  if (rho1.cutoff.per_mode != rho2.cutoff.per_mode) {
    throw std::invalid_argument("trace_distance: cutoff mismatch (" +
                                std::to_string(rho1.cutoff.per_mode) + " vs " +
                                std::to_string(rho2.cutoff.per_mode) + ")");
  }
  Eigen::MatrixXcd diff = rho1.matrix - rho2.matrix;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

DecompositionReport decompose_and_certify(const GaussianParams& params,
                                          int nodes_per_axis,
                                          fock::FockCutoff cutoff) {
  DecompositionReport report;
  report.nodes_per_axis = nodes_per_axis;
  report.components = decompose(params, nodes_per_axis);

  const PForm form = analyze_p_form(params);
  for (int i = 0; i < 4; ++i) {
    report.p_eigenvalues[i] =
        form.variances(i) > 0.0 ? 1.0 / (2.0 * form.variances(i)) : kInf;
  }
  std::sort(report.p_eigenvalues.begin(), report.p_eigenvalues.end());

  // Certify at the requested cutoff even when it undershoots the trace
  // budget; both sides are truncated identically.
  const auto recon = reconstruct_fock(report.components, cutoff);
  const auto direct =
      fock::build_gaussian_fock(params, cutoff, /*enforce_budget=*/false);
  report.trace_distance = trace_distance(recon, direct);
  return report;
}

}  // namespace gausssep::werner
