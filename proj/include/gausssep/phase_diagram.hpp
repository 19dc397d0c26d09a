#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gausssep/fock.hpp"
#include "gausssep/types.hpp"

namespace gausssep::phase {

inline constexpr int kMaxStepsPerAxis = 20000;
// Oracle eigenvalue sign threshold and the slack band inside which the
// analytic and numeric verdicts are allowed to straddle a boundary.
inline constexpr double kOracleEigTol = 1e-7;
inline constexpr double kOracleBand = 1e-3;

struct SweepSpec {
  double n_min = 0.0;
  double n_max = 0.0;
  double m_min = 0.0;
  double m_max = 0.0;
  int steps_n = 2;
  int steps_m = 2;
  double m_phase = 0.0;
  double oracle_fraction = 0.0;
  fock::FockCutoff oracle_cutoff{0};  // per_mode <= 0 selects the cutoff per point
};

struct SweepRecord {
  double n = 0.0;
  double m_abs = 0.0;
  Region region = Region::Separable;
  double margin = 0.0;
  std::optional<double> oracle_min_eig;
  std::optional<double> oracle_ppt_min_eig;
  std::optional<bool> agree;
};

/// Classifies every grid point (row-major, n outer) and runs the Fock
/// oracle on a deterministic stratified subsample.
std::vector<SweepRecord> sweep(const SweepSpec& spec);

enum class EmitFormat { Csv, Json };

EmitFormat format_from_string(std::string_view s);

/// CSV (header + rows) or JSON (array of objects), UTF-8, LF endings,
/// floats with 12 significant digits, deterministic.
std::string emit(const std::vector<SweepRecord>& records, EmitFormat format);

std::vector<SweepRecord> parse(const std::string& text, EmitFormat format);

}  // namespace gausssep::phase
