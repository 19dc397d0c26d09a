#include "gausssep/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gausssep/covariance.hpp"
#include "gausssep/fock.hpp"
#include "gausssep/phase_diagram.hpp"
#include "gausssep/types.hpp"
#include "gausssep/werner.hpp"

namespace gausssep::cli {

namespace {

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

const char* bool_str(bool b) { return b ? "true" : "false"; }

const CLI::Validator Finite(
    [](std::string& s) -> std::string {
      try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) return "'" + s + "' is not a number";
        if (!std::isfinite(v)) return "value must be finite";
      } catch (const std::exception&) {
        return "'" + s + "' is not a number";
      }
      return {};
    },
    "FINITE");

struct ParamFlags {
  double n = 0.0;
  double m_abs = 0.0;
  double m_phase = 0.0;
  double m_re = 0.0;
  double m_im = 0.0;
  CLI::Option* opt_abs = nullptr;
  CLI::Option* opt_phase = nullptr;
  CLI::Option* opt_re = nullptr;
  CLI::Option* opt_im = nullptr;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--n", n, "mean photon number per mode")
        ->required()
        ->check(Finite);
    opt_abs = cmd->add_option("--m-abs", m_abs, "|m|, pair-correlation magnitude")
                  ->check(Finite);
    opt_phase = cmd->add_option("--m-phase", m_phase, "phase of m in radians")
                    ->check(Finite);
    opt_re = cmd->add_option("--m-re", m_re, "Re m (alternative to --m-abs)")
                 ->check(Finite);
    opt_im = cmd->add_option("--m-im", m_im, "Im m (alternative to --m-abs)")
                 ->check(Finite);
  }

  GaussianParams params() const {
    const bool rect = opt_re->count() > 0 || opt_im->count() > 0;
    const bool polar = opt_abs->count() > 0 || opt_phase->count() > 0;
    if (rect && polar) {
      throw std::invalid_argument(
          "give m either as --m-abs/--m-phase or as --m-re/--m-im, not both");
    }
    if (rect) return {n, Complex(m_re, m_im)};
    if (m_abs < 0.0) {
      throw std::invalid_argument("--m-abs must be nonnegative");
    }
    return {n, m_abs * Complex(std::cos(m_phase), std::sin(m_phase))};
  }
};

void emit_classification(const Classification& cls, const GaussianParams& p,
                         const std::string& format, std::ostream& out) {
  const double ma = std::abs(p.m);
  const double tc = p.n + 0.5 - ma;
  const double pos = p.n * (p.n + 1.0) - ma * ma;
  const double prep = p.n - ma;
  if (format == "json") {
    out << "{\"region\":\"" << to_string(cls.region) << "\",\"margin\":"
        << fmt12(cls.margin) << ",\"trace_class_slack\":" << fmt12(tc)
        << ",\"positivity_slack\":" << fmt12(pos)
        << ",\"p_representability_slack\":" << fmt12(prep)
        << ",\"on_pure_boundary\":" << bool_str(cls.on_pure_boundary)
        << ",\"on_p_boundary\":" << bool_str(cls.on_p_boundary) << "}\n";
    return;
  }
  out << "region: " << to_string(cls.region) << "\n"
      << "margin: " << fmt12(cls.margin) << "\n"
      << "trace_class_slack: " << fmt12(tc) << "\n"
      << "positivity_slack: " << fmt12(pos) << "\n"
      << "p_representability_slack: " << fmt12(prep) << "\n"
      << "on_pure_boundary: " << bool_str(cls.on_pure_boundary) << "\n"
      << "on_p_boundary: " << bool_str(cls.on_p_boundary) << "\n";
}

std::string components_json(const std::vector<werner::WernerComponent>& comps) {
  std::string out = "[\n";
  bool first = true;
  for (const auto& c : comps) {
    if (!first) out += ",\n";
    first = false;
    out += "{\"weight\":" + fmt12(c.weight) +
           ",\"alpha_re\":" + fmt12(c.alpha.real()) +
           ",\"alpha_im\":" + fmt12(c.alpha.imag()) +
           ",\"beta_re\":" + fmt12(c.beta.real()) +
           ",\"beta_im\":" + fmt12(c.beta.imag()) + "}";
  }
  out += "\n]\n";
  return out;
}

std::string p_eigs_json(const std::array<double, 4>& eigs) {
  std::string s = "[";
  for (int i = 0; i < 4; ++i) {
    if (i) s += ',';
    s += std::isfinite(eigs[i]) ? fmt12(eigs[i]) : "null";  // null: delta-singular axis
  }
  s += "]";
  return s;
}

void write_or_print(const std::string& text, const std::string& path,
                    std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  file << text;
}

struct CommandConfig {
  ParamFlags classify_params;
  ParamFlags oracle_params;
  ParamFlags decompose_params;
  std::string format;
  std::string out_path;
  int cutoff = 0;
  int nodes = 11;
  double eps = cov::kBoundaryTol;
  double lambda = 0.0, x1 = 0.0, x2 = 0.0;
  phase::SweepSpec sweep;
  int sweep_steps = 0, sweep_steps_m = 0;
};

int dispatch(CLI::App& app, CommandConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-party Gaussian quantum state separability toolkit"};
  app.require_subcommand(1);

  CommandConfig cfg;

  CLI::App* classify = app.add_subcommand(
      "classify", "Classify a restricted-form Gaussian state analytically");
  cfg.classify_params.add_to(classify);
  classify->add_option("--eps", cfg.eps, "boundary-flag tolerance")->check(Finite);
  classify->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Cross-check analytic verdicts against the truncated Fock space");
  cfg.oracle_params.add_to(oracle);
  oracle->add_option("--cutoff", cfg.cutoff, "per-mode Fock cutoff (0 = auto)");
  oracle->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* decompose = app.add_subcommand(
      "decompose", "Build an explicit convex decomposition into coherent products");
  cfg.decompose_params.add_to(decompose);
  decompose->add_option("--nodes", cfg.nodes, "quadrature nodes per axis")
      ->default_val(11);
  decompose->add_option("--cutoff", cfg.cutoff, "per-mode Fock cutoff (0 = auto)");
  decompose->add_option("--out", cfg.out_path, "write the component list here");
  decompose->add_option("--format", cfg.format, "json or text")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Scan the (n, |m|) plane and emit phase-diagram data");
  sweep->add_option("--n-min", cfg.sweep.n_min)->check(Finite);
  sweep->add_option("--n-max", cfg.sweep.n_max)->required()->check(Finite);
  sweep->add_option("--m-min", cfg.sweep.m_min)->check(Finite);
  sweep->add_option("--m-max", cfg.sweep.m_max)->required()->check(Finite);
  sweep->add_option("--steps", cfg.sweep_steps, "grid points per axis")->required();
  sweep->add_option("--steps-m", cfg.sweep_steps_m,
                    "override the |m|-axis point count");
  sweep->add_option("--m-phase", cfg.sweep.m_phase)->check(Finite);
  sweep->add_option("--oracle-fraction", cfg.sweep.oracle_fraction,
                    "fraction of points cross-checked numerically")
      ->check(Finite);
  sweep->add_option("--cutoff", cfg.cutoff, "oracle per-mode cutoff (0 = auto)");
  sweep->add_option("--format", cfg.format, "csv or json");
  sweep->add_option("--out", cfg.out_path, "write records here instead of stdout");

  CLI::App* wavefn = app.add_subcommand(
      "wavefunction", "Evaluate the pure-state position wave function");
  wavefn->add_option("--lambda", cfg.lambda)->required()->check(Finite);
  wavefn->add_option("--x1", cfg.x1)->required()->check(Finite);
  wavefn->add_option("--x2", cfg.x2)->required()->check(Finite);
  wavefn->add_option("--format", cfg.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  return dispatch(app, cfg, out, err);
}

namespace {

int dispatch(CLI::App& app, CommandConfig& cfg, std::ostream& out,
             std::ostream& err) {
  if (cfg.format.empty()) {
    cfg.format = app.got_subcommand("sweep")
                     ? "csv"
                     : (app.got_subcommand("decompose") ? "json" : "text");
  }
  const bool json = cfg.format == "json";
  try {
    if (app.got_subcommand("classify")) {
      const GaussianParams p = cfg.classify_params.params();
      emit_classification(cov::classify(p, cfg.eps), p, cfg.format, out);
      return 0;
    }

    if (app.got_subcommand("oracle")) {
      const GaussianParams p = cfg.oracle_params.params();
      const Classification cls = cov::classify(p);
      const bool explicit_cutoff = cfg.cutoff > 0;
      const fock::FockCutoff cutoff =
          explicit_cutoff ? fock::FockCutoff{cfg.cutoff} : fock::auto_cutoff(p);
      // An explicit cutoff overrides the budget; warn instead of failing.
      const auto rho =
          fock::build_gaussian_fock(p, cutoff, /*enforce_budget=*/!explicit_cutoff);
      if (explicit_cutoff && std::abs(rho.trace_deficit) > fock::kTauTrunc) {
        err << "warning: trace deficit " << fmt12(rho.trace_deficit)
            << " exceeds the budget " << fmt12(fock::kTauTrunc)
            << " at cutoff " << cutoff.per_mode << "\n";
      }
      const double min_eig = fock::gaussian_min_eigenvalue(p, cutoff);
      const double ppt_min = fock::gaussian_ppt_min_eigenvalue(p, cutoff);
      const auto mom = fock::moments(rho);
      const auto v = cov::build_restricted_v(p);
      const double err_na = std::abs(mom.n_a - p.n);
      const double err_nb = std::abs(mom.n_b - p.n);
      const double err_m = std::abs(mom.m - p.m);
      if (json) {
        out << "{\"region\":\"" << to_string(cls.region)
            << "\",\"check_trace_class\":" << bool_str(cov::check_trace_class(v))
            << ",\"check_positive_operator\":"
            << bool_str(cov::check_positive_operator(v))
            << ",\"check_p_representable\":"
            << bool_str(cov::check_p_representable(v))
            << ",\"cutoff\":" << cutoff.per_mode
            << ",\"fock_min_eigenvalue\":" << fmt12(min_eig)
            << ",\"fock_ppt_min_eigenvalue\":" << fmt12(ppt_min)
            << ",\"trace_deficit\":" << fmt12(rho.trace_deficit)
            << ",\"moment_error_n_a\":" << fmt12(err_na)
            << ",\"moment_error_n_b\":" << fmt12(err_nb)
            << ",\"moment_error_m\":" << fmt12(err_m) << "}\n";
      } else {
        out << "region: " << to_string(cls.region) << "\n"
            << "check_trace_class: " << bool_str(cov::check_trace_class(v)) << "\n"
            << "check_positive_operator: "
            << bool_str(cov::check_positive_operator(v)) << "\n"
            << "check_p_representable: "
            << bool_str(cov::check_p_representable(v)) << "\n"
            << "cutoff: " << cutoff.per_mode << "\n"
            << "fock_min_eigenvalue: " << fmt12(min_eig) << "\n"
            << "fock_ppt_min_eigenvalue: " << fmt12(ppt_min) << "\n"
            << "trace_deficit: " << fmt12(rho.trace_deficit) << "\n"
            << "moment_error_n_a: " << fmt12(err_na) << "\n"
            << "moment_error_n_b: " << fmt12(err_nb) << "\n"
            << "moment_error_m: " << fmt12(err_m) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand("decompose")) {
      const GaussianParams p = cfg.decompose_params.params();
      const fock::FockCutoff cutoff =
          cfg.cutoff > 0 ? fock::FockCutoff{cfg.cutoff} : fock::auto_cutoff(p);
      const auto report = werner::decompose_and_certify(p, cfg.nodes, cutoff);
      const std::string comps = components_json(report.components);
      if (!cfg.out_path.empty()) {
        write_or_print(comps, cfg.out_path, out);
      }
      if (json) {
        out << "{\"trace_distance\":" << fmt12(report.trace_distance)
            << ",\"nodes_per_axis\":" << report.nodes_per_axis
            << ",\"cutoff\":" << cutoff.per_mode
            << ",\"component_count\":" << report.components.size()
            << ",\"p_eigenvalues\":" << p_eigs_json(report.p_eigenvalues);
        if (cfg.out_path.empty()) {
          std::string inline_comps = comps;
          while (!inline_comps.empty() && inline_comps.back() == '\n') {
            inline_comps.pop_back();
          }
          out << ",\"components\":" << inline_comps;
        }
        out << "}\n";
      } else {
        out << "trace_distance: " << fmt12(report.trace_distance) << "\n"
            << "nodes_per_axis: " << report.nodes_per_axis << "\n"
            << "cutoff: " << cutoff.per_mode << "\n"
            << "component_count: " << report.components.size() << "\n";
        if (cfg.out_path.empty()) {
          out << "note: pass --out FILE (or --format json) to get the "
                 "component list\n";
        }
      }
      return 0;
    }

    if (app.got_subcommand("sweep")) {
      cfg.sweep.steps_n = cfg.sweep_steps;
      cfg.sweep.steps_m = cfg.sweep_steps_m > 0 ? cfg.sweep_steps_m : cfg.sweep_steps;
      cfg.sweep.oracle_cutoff = fock::FockCutoff{cfg.cutoff};
      const auto records = phase::sweep(cfg.sweep);
      const auto format = phase::format_from_string(cfg.format);
      write_or_print(phase::emit(records, format), cfg.out_path, out);
      return 0;
    }

    if (app.got_subcommand("wavefunction")) {
      const double value = fock::position_wavefunction(cfg.lambda, cfg.x1, cfg.x2);
      if (json) {
        out << "{\"psi\":" << fmt12(value) << "}\n";
      } else {
        out << fmt12(value) << "\n";
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    if (json) {
      err << "{\"error_code\":\"usage_error\",\"message\":"
          << nlohmann::json(e.what()).dump() << "}\n";
    } else {
      err << "usage error: " << e.what() << "\n";
    }
    return 2;
  } catch (const std::domain_error& e) {
    const char* code = "domain_error";
    if (dynamic_cast<const NotPRepresentableError*>(&e)) code = "not_p_representable";
    if (dynamic_cast<const TruncationError*>(&e)) code = "truncation_error";
    if (dynamic_cast<const SingularMatrixError*>(&e)) code = "singular_matrix";
    if (json) {
      err << "{\"error_code\":\"" << code << "\",\"message\":"
          << nlohmann::json(e.what()).dump() << "}\n";
    } else {
      err << "error: " << e.what() << "\n";
    }
    return 3;
  }
  return 2;  // unreachable with require_subcommand(1)
}

}  // namespace

}  // namespace gausssep::cli
