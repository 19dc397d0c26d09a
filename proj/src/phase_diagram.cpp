#include "gausssep/phase_diagram.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include <json.hpp>

#include "gausssep/covariance.hpp"

namespace gausssep::phase {

namespace {

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void validate(const SweepSpec& spec) {
  if (!std::isfinite(spec.n_min) || !std::isfinite(spec.n_max) ||
      !std::isfinite(spec.m_min) || !std::isfinite(spec.m_max) ||
      !std::isfinite(spec.m_phase)) {
    throw std::invalid_argument("sweep: non-finite range or phase");
  }
  if (spec.n_min > spec.n_max || spec.m_min > spec.m_max) {
    throw std::invalid_argument("sweep: ranges must be ordered (min <= max)");
  }
  if (spec.m_min < 0.0) {
    throw std::invalid_argument("sweep: the |m| axis starts at 0");
  }
  auto check_steps = [](int steps, double lo, double hi, const char* axis) {
    const int min_steps = lo == hi ? 1 : 2;  // a degenerate range may be a single point
    if (steps < min_steps || steps > kMaxStepsPerAxis) {
      throw std::invalid_argument(std::string("sweep: steps_") + axis +
                                  " out of range");
    }
  };
  check_steps(spec.steps_n, spec.n_min, spec.n_max, "n");
  check_steps(spec.steps_m, spec.m_min, spec.m_max, "m");
  if (static_cast<long long>(spec.steps_n) * spec.steps_m > 4'000'000) {
    throw std::invalid_argument("sweep: grid exceeds 4e6 points");
  }
  if (!(spec.oracle_fraction >= 0.0 && spec.oracle_fraction <= 1.0)) {
    throw std::invalid_argument("sweep: oracle_fraction must lie in [0, 1]");
  }
}

void run_oracle(SweepRecord& rec, const GaussianParams& params,
                const SweepSpec& spec) {
  try {
    const fock::FockCutoff cutoff = spec.oracle_cutoff.per_mode > 0
                                        ? spec.oracle_cutoff
                                        : fock::auto_cutoff(params);
    const auto sectors = fock::gaussian_sectors(params, cutoff);
    if (std::abs(1.0 - fock::sector_trace(sectors)) > fock::kTauTrunc) {
      return;  // cutoff insufficient here; leave the oracle fields empty
    }
    rec.oracle_min_eig = fock::sectors_min_eigenvalue(sectors);
    rec.oracle_ppt_min_eig = fock::sectors_ppt_min_eigenvalue(sectors);
  } catch (const TruncationError&) {
    return;
  }

  const double ma = rec.m_abs;
  const double pos_slack = rec.n * (rec.n + 1.0) - ma * ma;
  const double p_slack = rec.n - ma;
  const double s1 = std::max({1.0, std::abs(rec.n), ma});
  const double s2 = std::max({1.0, std::abs(rec.n * (rec.n + 1.0)), ma * ma});

  const bool fock_positive = *rec.oracle_min_eig >= -kOracleEigTol;
  const bool fock_ppt = *rec.oracle_ppt_min_eig >= -kOracleEigTol;
  const bool pos_ok =
      fock_positive == (pos_slack >= 0.0) || std::abs(pos_slack) <= kOracleBand * s2;
  const bool ppt_ok =
      fock_ppt == (p_slack >= 0.0) || std::abs(p_slack) <= kOracleBand * s1;
  rec.agree = pos_ok && ppt_ok;
}

}  // namespace

std::vector<SweepRecord> sweep(const SweepSpec& spec) {
  validate(spec);
  const double dn =
      spec.steps_n > 1 ? (spec.n_max - spec.n_min) / (spec.steps_n - 1) : 0.0;
  const double dm =
      spec.steps_m > 1 ? (spec.m_max - spec.m_min) / (spec.steps_m - 1) : 0.0;
  const Complex phase(std::cos(spec.m_phase), std::sin(spec.m_phase));

  const long stride = spec.oracle_fraction > 0.0
                          ? static_cast<long>(std::ceil(1.0 / spec.oracle_fraction))
                          : 0;
  std::map<Region, long> eligible_seen;

  std::vector<SweepRecord> records;
  records.reserve(static_cast<std::size_t>(spec.steps_n) * spec.steps_m);
  for (int i = 0; i < spec.steps_n; ++i) {
    for (int j = 0; j < spec.steps_m; ++j) {
      const double n = spec.n_min + i * dn;
      const double m_abs = spec.m_min + j * dm;
      const GaussianParams params{n, m_abs * phase};
      const Classification cls = cov::classify(params);

      SweepRecord rec;
      rec.n = n;
      rec.m_abs = m_abs;
      rec.region = cls.region;
      rec.margin = cls.margin;

      if (stride > 0 && cls.region != Region::InvalidTraceClass) {
        // Stratified, seed-free: every stride-th eligible point per region.
        if (eligible_seen[cls.region]++ % stride == 0) {
          run_oracle(rec, params, spec);
        }
      }
      records.push_back(rec);
    }
  }
  return records;
}

EmitFormat format_from_string(std::string_view s) {
  if (s == "csv") return EmitFormat::Csv;
  if (s == "json") return EmitFormat::Json;
  throw std::invalid_argument("unknown format: " + std::string(s) +
                              " (expected csv or json)");
}

std::string emit(const std::vector<SweepRecord>& records, EmitFormat format) {
  if (records.empty()) {
    throw std::invalid_argument("emit: no records");
  }
  std::string out;
  if (format == EmitFormat::Csv) {
    out = "n,m_abs,region,margin,oracle_min_eig,oracle_ppt_min_eig,agree\n";
    for (const auto& r : records) {
      out += fmt12(r.n) + ',' + fmt12(r.m_abs) + ',' + to_string(r.region) + ',' +
             fmt12(r.margin) + ',';
      if (r.oracle_min_eig) out += fmt12(*r.oracle_min_eig);
      out += ',';
      if (r.oracle_ppt_min_eig) out += fmt12(*r.oracle_ppt_min_eig);
      out += ',';
      if (r.agree) out += *r.agree ? "true" : "false";
      out += '\n';
    }
    return out;
  }
  out = "[\n";
  bool first = true;
  for (const auto& r : records) {
    if (!first) out += ",\n";
    first = false;
    out += "{\"n\":" + fmt12(r.n) + ",\"m_abs\":" + fmt12(r.m_abs) +
           ",\"region\":\"" + to_string(r.region) + "\",\"margin\":" +
           fmt12(r.margin) + ",\"oracle_min_eig\":" +
           (r.oracle_min_eig ? fmt12(*r.oracle_min_eig) : "null") +
           ",\"oracle_ppt_min_eig\":" +
           (r.oracle_ppt_min_eig ? fmt12(*r.oracle_ppt_min_eig) : "null") +
           ",\"agree\":" +
           (r.agree ? (*r.agree ? "true" : "false") : "null") + "}";
  }
  out += "\n]\n";
  return out;
}

std::vector<SweepRecord> parse(const std::string& text, EmitFormat format) {
  std::vector<SweepRecord> records;
  if (format == EmitFormat::Csv) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        line != "n,m_abs,region,margin,oracle_min_eig,oracle_ppt_min_eig,agree") {
      throw std::invalid_argument("parse: bad CSV header");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<std::string> cells;
      std::size_t start = 0;
      while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (cells.size() != 7) {
        throw std::invalid_argument("parse: expected 7 CSV cells, got " +
                                    std::to_string(cells.size()));
      }
      SweepRecord r;
      r.n = std::stod(cells[0]);
      r.m_abs = std::stod(cells[1]);
      r.region = region_from_string(cells[2]);
      r.margin = std::stod(cells[3]);
      if (!cells[4].empty()) r.oracle_min_eig = std::stod(cells[4]);
      if (!cells[5].empty()) r.oracle_ppt_min_eig = std::stod(cells[5]);
      if (!cells[6].empty()) r.agree = cells[6] == "true";
      records.push_back(r);
    }
    return records;
  }

  const nlohmann::json doc = nlohmann::json::parse(text);
  if (!doc.is_array()) {
    throw std::invalid_argument("parse: expected a JSON array");
  }
  for (const auto& item : doc) {
    SweepRecord r;
    r.n = item.at("n").get<double>();
    r.m_abs = item.at("m_abs").get<double>();
    r.region = region_from_string(item.at("region").get<std::string>());
    r.margin = item.at("margin").get<double>();
    if (!item.at("oracle_min_eig").is_null()) {
      r.oracle_min_eig = item.at("oracle_min_eig").get<double>();
    }
    if (!item.at("oracle_ppt_min_eig").is_null()) {
      r.oracle_ppt_min_eig = item.at("oracle_ppt_min_eig").get<double>();
    }
    if (!item.at("agree").is_null()) {
      r.agree = item.at("agree").get<bool>();
    }
    records.push_back(r);
  }
  return records;
}

}  // namespace gausssep::phase
