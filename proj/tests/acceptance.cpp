// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line per criterion. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "gausssep/covariance.hpp"
#include "gausssep/fock.hpp"
#include "gausssep/phase_diagram.hpp"
#include "gausssep/werner.hpp"

using namespace gausssep;
using fock::FockCutoff;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool ok, double seconds,
            const std::string& detail = "") {
  std::printf("[%s] %2d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", index,
              name.c_str(), seconds, detail.empty() ? "" : " - ",
              detail.c_str());
  if (!ok) ++failures;
}

struct Check {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& msg) {
    if (!cond && ok) {
      ok = false;
      detail = msg;
    }
  }
};

void run_criterion(int index, const std::string& name,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto start = Clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report(index, name, check.ok, seconds, check.detail);
}

GaussianParams gp(double n, Complex m) { return GaussianParams{n, m}; }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

// --- criteria 2/3: one stratified point set, clear of both curves ---

double distance_to_solid(double n, double m_abs) {
  double best = 1e9;
  for (int i = 0; i <= 25000; ++i) {
    const double t = 2.5 * i / 25000.0;
    best = std::min(best, std::hypot(n - t, m_abs - std::sqrt(t * (t + 1.0))));
  }
  return best;
}

std::vector<GaussianParams> stratified_points() {
  std::vector<GaussianParams> sep, ent, wig;
  for (int i = 1; i <= 40; ++i) {
    const double n = 0.05 * i;
    const double m_top = std::min(2.0, n + 0.45);
    for (int j = 0; 0.025 * j <= m_top; ++j) {
      const double ma = 0.025 * j;
      if (distance_to_solid(n, ma) <= 0.021) continue;
      if (std::abs(n - ma) / std::sqrt(2.0) <= 0.021) continue;
      const Region region = cov::classify(gp(n, ma)).region;
      if (region == Region::Separable) sep.push_back(gp(n, ma));
      if (region == Region::Entangled) ent.push_back(gp(n, ma));
      if (region == Region::WignerOnly) wig.push_back(gp(n, ma));
    }
  }
  // thin each stratum deterministically, then interleave
  auto thin = [](std::vector<GaussianParams>& v, std::size_t keep) {
    std::vector<GaussianParams> out;
    const std::size_t stride = std::max<std::size_t>(1, v.size() / keep);
    for (std::size_t i = 0; i < v.size() && out.size() < keep; i += stride) {
      out.push_back(v[i]);
    }
    v = out;
  };
  thin(sep, 18);
  thin(ent, 18);
  thin(wig, 18);
  std::vector<GaussianParams> points;
  for (std::size_t i = 0; points.size() < 50; ++i) {
    if (i < sep.size()) points.push_back(sep[i]);
    if (i < ent.size() && points.size() < 50) points.push_back(ent[i]);
    if (i < wig.size() && points.size() < 50) points.push_back(wig[i]);
    if (i >= sep.size() && i >= ent.size() && i >= wig.size()) break;
  }
  return points;
}

// Hermite functions and the truncated squeezed-state sum (criterion 11).
double hermite_fn(int n, double x) {
  double prev = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return prev;
  double cur = std::sqrt(2.0) * x * prev;
  for (int k = 2; k <= n; ++k) {
    const double next =
        x * std::sqrt(2.0 / k) * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double mehler_sum(double lambda, double x1, double x2, int terms) {
  double sum = 0.0;
  double pw = 1.0;
  for (int n = 0; n < terms; ++n) {
    sum += pw * hermite_fn(n, x1) * hermite_fn(n, x2);
    pw *= lambda;
  }
  return std::sqrt(1.0 - lambda * lambda) * sum;
}

// <x1 x2> of the closed-form wave function by Simpson quadrature.
double correlation_x1x2(double lambda) {
  const double span = 12.0;
  const int cells = 240;  // even
  const double h = 2.0 * span / cells;
  auto simpson_weight = [&](int i) {
    if (i == 0 || i == cells) return 1.0;
    return i % 2 == 1 ? 4.0 : 2.0;
  };
  double total = 0.0;
  for (int i = 0; i <= cells; ++i) {
    const double x1 = -span + i * h;
    double inner = 0.0;
    for (int j = 0; j <= cells; ++j) {
      const double x2 = -span + j * h;
      const double psi = fock::position_wavefunction(lambda, x1, x2);
      inner += simpson_weight(j) * x1 * x2 * psi * psi;
    }
    total += simpson_weight(i) * inner * (h / 3.0);
  }
  return total * (h / 3.0);
}

}  // namespace

int main() {
  run_criterion(1, "phase-diagram boundaries on the 201x201 grid", [](Check& c) {
    phase::SweepSpec spec;
    spec.n_max = 2.0;
    spec.m_max = 2.0;
    spec.steps_n = spec.steps_m = 201;
    const auto t0 = Clock::now();
    const auto records = phase::sweep(spec);
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(records.size() == 201 * 201, "wrong record count");
    c.expect(elapsed < 5.0, "sweep took " + num(elapsed) + " s (limit 5 s)");

    const double cell = 0.01;
    for (int i = 0; i < 201 && c.ok; ++i) {
      const double n = records[i * 201].n;
      double first_ent = -1, first_wig = -1, first_inv = -1;
      for (int j = 0; j < 201; ++j) {
        const auto& r = records[i * 201 + j];
        if (r.region == Region::Entangled && first_ent < 0) first_ent = r.m_abs;
        if (r.region == Region::WignerOnly && first_wig < 0) first_wig = r.m_abs;
        if (r.region == Region::InvalidTraceClass && first_inv < 0)
          first_inv = r.m_abs;
      }
      const double solid = std::sqrt(n * (n + 1.0));
      if (first_ent >= 0)
        c.expect(std::abs(first_ent - n) <= cell + 1e-12,
                 "dash-dotted boundary off at n = " + num(n));
      if (first_wig >= 0)
        c.expect(std::abs(first_wig - solid) <= cell + 1e-12,
                 "solid boundary off at n = " + num(n));
      if (first_inv >= 0)
        c.expect(std::abs(first_inv - (n + 0.5)) <= cell + 1e-12,
                 "dashed boundary off at n = " + num(n));
    }
  });

  const auto points = stratified_points();
  std::vector<double> fock_min(points.size()), ppt_min(points.size());

  run_criterion(2, "analytic vs Fock positivity on 50 stratified points",
                [&](Check& c) {
    c.expect(points.size() == 50, "built " + num(points.size()) + " points");
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      FockCutoff cutoff = fock::auto_cutoff(p);
      cutoff.per_mode = std::min(cutoff.per_mode, 60);
      const auto sectors = fock::gaussian_sectors(p, cutoff);
      c.expect(std::abs(1.0 - fock::sector_trace(sectors)) <= fock::kTauTrunc,
               "trace budget missed at n = " + num(p.n));
      fock_min[i] = fock::sectors_min_eigenvalue(sectors);
      ppt_min[i] = fock::sectors_ppt_min_eigenvalue(sectors);

      const bool numeric = fock_min[i] >= -1e-7;
      const bool analytic =
          cov::check_positive_operator(cov::build_restricted_v(p));
      c.expect(numeric == analytic,
               "positivity disagrees at (n, |m|) = (" + num(p.n) + ", " +
                   num(std::abs(p.m)) + "), min eig " + num(fock_min[i]));
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
    c.expect(elapsed < 120.0, "took " + num(elapsed) + " s (limit 120 s)");
  });

  run_criterion(3, "analytic vs Fock partial-transpose verdict", [&](Check& c) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto& p = points[i];
      const bool numeric = ppt_min[i] >= -1e-7;
      const bool analytic = p.n >= std::abs(p.m);
      c.expect(numeric == analytic,
               "PPT disagrees at (n, |m|) = (" + num(p.n) + ", " +
                   num(std::abs(p.m)) + "), min eig " + num(ppt_min[i]));
    }
  });

  run_criterion(4, "pure-boundary Gaussians are projectors", [](Check& c) {
    for (double n : {0.25, 0.5, 1.0}) {
      const double m_abs = std::sqrt(n * (n + 1.0));
      const auto p = gp(n, m_abs);
      const FockCutoff cutoff = fock::auto_cutoff(p);
      const auto rho = fock::build_gaussian_fock(p, cutoff);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.matrix,
                                                         Eigen::EigenvaluesOnly);
      const auto& eigs = es.eigenvalues();
      const double top = eigs(eigs.size() - 1);
      const double second = eigs(eigs.size() - 2);
      c.expect(top >= 1.0 - 1e-5 && top <= 1.0 + 1e-8,
               "top eigenvalue " + num(top) + " at n = " + num(n));
      c.expect(second <= 1e-5, "second eigenvalue " + num(second));

      const auto psi = fock::build_pure_state(-m_abs / (n + 1.0), cutoff);
      const double overlap = fock::expectation(rho, psi);
      c.expect(overlap >= 1.0 - 1e-6,
               "overlap " + num(overlap) + " at n = " + num(n));
    }
  });

  run_criterion(5, "partial-transpose spectrum of the lambda = 0.5 state",
                [](Check& c) {
    const auto psi = fock::build_pure_state(0.5, FockCutoff{20});
    const auto pt = fock::partial_transpose_fock(fock::to_density(psi));
    const double lo = fock::min_eigenvalue(pt.matrix);
    c.expect(std::abs(lo - (-0.375)) <= 1e-6, "min eigenvalue " + num(lo));
  });

  const std::vector<GaussianParams> char_params = {
      gp(0.5, 0.2), gp(1, 0.5), gp(1, std::sqrt(2.0))};

  run_criterion(6, "characteristic function vs the analytic Gaussian",
                [&](Check& c) {
    const std::vector<double> grid = {-1.5, -0.75, 0.0, 0.75, 1.5};
    for (const auto& p : char_params) {
      const auto rho = fock::build_gaussian_fock(p, FockCutoff{40}, false);
      const auto v = cov::build_restricted_v(p);
      double worst = 0.0;
      for (double a : grid) {
        for (double b : grid) {
          const Complex alpha(a, 0.0), beta(0.0, b);
          Eigen::Vector4cd vec;
          vec << alpha, std::conj(alpha), beta, std::conj(beta);
          const Complex quad = (vec.adjoint() * v.entries * vec)(0, 0);
          const Complex expected = std::exp(-0.5 * quad);
          worst = std::max(worst, std::abs(fock::characteristic_fn(rho, alpha,
                                                                   beta) -
                                           expected));
        }
      }
      c.expect(worst <= 1e-4, "max deviation " + num(worst) + " at n = " +
                                  num(p.n) + ", |m| = " + num(std::abs(p.m)));
    }
  });

  run_criterion(7, "first and second moments", [&](Check& c) {
    for (const auto& p : char_params) {
      const auto mom =
          fock::moments(fock::build_gaussian_fock(p, FockCutoff{40}, false));
      c.expect(std::abs(mom.n_a - p.n) <= 1e-5, "n_a off at n = " + num(p.n));
      c.expect(std::abs(mom.n_b - p.n) <= 1e-5, "n_b off at n = " + num(p.n));
      c.expect(std::abs(mom.m - p.m) <= 1e-5, "m off at n = " + num(p.n));
    }
  });

  run_criterion(8, "normal-ordering identity at N = 50", [](Check& c) {
    const FockCutoff cutoff{50};
    for (const Complex zeta : {Complex(1, 0), Complex(2, 0), Complex(0.5, 0.5)}) {
      const double dev = fock::normal_ordered_identity_check(zeta, cutoff);
      c.expect(dev <= 1e-8, "deviation " + num(dev));
    }
    // reference diagonals: parity at zeta = 2, vacuum projector at zeta = 1
    for (int j = 0; j < 50; ++j) {
      const double parity = j % 2 == 0 ? 1.0 : -1.0;
      c.expect(std::pow(-1.0, j) == parity, "parity reference");
      c.expect(std::pow(0.0, j) == (j == 0 ? 1.0 : 0.0), "vacuum reference");
    }
  });

  run_criterion(9, "Werner decomposition certificates", [](Check& c) {
    for (const auto& p : {gp(1, 0.5), gp(0.8, 0.3)}) {
      const auto t0 = Clock::now();
      const auto comps = werner::decompose(p, 11);
      double total = 0.0;
      bool positive = true;
      for (const auto& comp : comps) {
        positive = positive && comp.weight > 0.0;
        total += comp.weight;
      }
      c.expect(positive, "nonpositive weight");
      c.expect(std::abs(total - 1.0) <= 1e-10, "weights sum to " + num(total));

      const auto recon = werner::reconstruct_fock(comps, FockCutoff{35});
      const auto direct = fock::build_gaussian_fock(p, FockCutoff{35});
      const double td = werner::trace_distance(recon, direct);
      c.expect(td <= 1e-3, "trace distance " + num(td) + " at n = " + num(p.n));
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - t0).count();
      c.expect(elapsed < 60.0, "took " + num(elapsed) + " s (limit 60 s)");
    }
  });

  run_criterion(10, "entangled states are rejected by decompose", [](Check& c) {
    bool threw = false;
    try {
      werner::decompose(gp(0.5, 0.8), 9);
    } catch (const NotPRepresentableError&) {
      threw = true;
    }
    c.expect(threw, "no rejection at (0.5, 0.8)");

    threw = false;
    try {
      werner::decompose(gp(1, std::sqrt(2.0)), 9);
    } catch (const NotPRepresentableError&) {
      threw = true;
    }
    c.expect(threw, "no rejection at the pure point (1, sqrt 2)");
  });

  run_criterion(11, "position wave function vs the Hermite sum", [](Check& c) {
    for (double lambda : {0.3, 0.5, 0.8}) {
      // At least 40 terms, extended until the geometric tail bound
      // lambda^K / (1 - lambda) is below the comparison tolerance.
      int terms = 40;
      while (std::pow(lambda, terms) / (1.0 - lambda) > 1e-10) ++terms;
      double worst = 0.0;
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
          const double x1 = -2.0 + i;
          const double x2 = -2.0 + j;
          worst = std::max(worst,
                           std::abs(fock::position_wavefunction(lambda, x1, x2) -
                                    mehler_sum(lambda, x1, x2, terms)));
        }
      }
      c.expect(worst <= 1e-8,
               "deviation " + num(worst) + " at lambda = " + num(lambda));
    }
    double prev = -1.0;
    for (double lambda = 0.1; lambda < 0.95; lambda += 0.1) {
      const double corr = correlation_x1x2(lambda);
      c.expect(corr > prev, "correlation not increasing at lambda = " +
                                num(lambda));
      prev = corr;
    }
  });

  run_criterion(12, "sandwich and direct assemblies coincide", [](Check& c) {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> un(0.0, 1.2), uf(0.05, 0.92),
        up(0.0, 2 * M_PI);
    for (int trial = 0; trial < 20; ++trial) {
      const double n = un(rng);
      const double ma = uf(rng) * (n + 0.5);
      const auto p = gp(n, std::polar(ma, up(rng)));
      const FockCutoff cutoff = fock::auto_cutoff(p);
      const auto direct = fock::build_gaussian_fock(p, cutoff, false);
      const auto sandwich = fock::build_sandwich_fock(p, cutoff, false);
      const double diff =
          (direct.matrix - sandwich.matrix).cwiseAbs().maxCoeff();
      c.expect(diff <= 1e-8, "entry difference " + num(diff) + " at n = " +
                                 num(n) + ", |m| = " + num(ma));
    }
  });

  std::printf("%d of 12 criteria passed\n", 12 - failures);
  return failures;
}
