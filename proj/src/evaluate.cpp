#include "sft/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sft/oracle.hpp"

namespace sft {

namespace {

Eigen::VectorXcd retained_bins(const Spectrum& s, bool positive_half) {
  const Eigen::Index n = s.size();
  if (n < 2) throw std::invalid_argument("normalize_pair: spectrum too short");
  const Eigen::Index keep = positive_half ? n / 2 : n - 1;
  return s.segment(1, keep);  // offset bin dropped either way
}

void scaled_halves(const Eigen::VectorXcd& bins, Eigen::VectorXd& out, bool& all_zero) {
  const Eigen::Index m = bins.size();
  Eigen::VectorXd re = bins.real();
  Eigen::VectorXd im = bins.imag();
  const double re_max = re.cwiseAbs().maxCoeff();
  const double im_max = im.cwiseAbs().maxCoeff();
  all_zero = re_max == 0.0 && im_max == 0.0;
  if (re_max > 0.0) re /= re_max;
  if (im_max > 0.0) im /= im_max;
  out.resize(2 * m);
  out << re, im;
}

int peak_bin_of(const Spectrum& s) {
  const Eigen::Index half = s.size() / 2;
  Eigen::Index best = 1;
  double best_mag = -1.0;
  for (Eigen::Index k = 1; k <= half; ++k) {
    const double mag = std::abs(s[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  return static_cast<int>(best);
}

RadarConfig config_for_length(int n) {
  RadarConfig cfg;
  cfg.samples_cap = n;
  if (cfg.samples_per_chirp() != n)
    throw std::invalid_argument("evaluate: length " + std::to_string(n) +
                                " not reachable with this front end");
  return cfg;
}

}  // namespace

NormalizedPair normalize_pair(const Spectrum& a, const Spectrum& b, bool positive_half) {
  if (a.size() != b.size()) throw std::invalid_argument("normalize_pair: size mismatch");
  NormalizedPair p;
  const Eigen::VectorXcd ka = retained_bins(a, positive_half);
  const Eigen::VectorXcd kb = retained_bins(b, positive_half);
  p.bins = static_cast<int>(ka.size());
  scaled_halves(ka, p.a, p.a_zero);
  scaled_halves(kb, p.b, p.b_zero);
  return p;
}

double rmse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() == 0)
    throw std::invalid_argument("rmse: need equal nonzero lengths");
  return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

std::string EvalReport::json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["kind"] = kind == PlanKind::Sdft ? "sdft" : "sfft";
  j["n"] = n;
  j["steps_per_stage"] = steps_per_stage;
  j["quantized"] = quantized;
  j["mode"] = mode == TimeMode::Stepped ? "stepped" : "continuous";
  j["rmse"] = rmse;
  j["peak_bin"] = peak_bin;
  j["oracle_peak_bin"] = oracle_peak_bin;
  j["missing_spikes"] = missing;
  j["clamped_updates"] = clamped;
  j["values_compared"] = abs_error.size();
  return j.dump(2);
}

EvalReport evaluate_scenario(PlanKind kind, const std::string& scenario_name, int n,
                             int steps_per_stage, bool quantized, TimeMode mode, unsigned seed,
                             double noise_std) {
  const RadarConfig cfg = config_for_length(n);
  const std::vector<Target> targets = scenario(scenario_name, cfg, seed);
  const Signal chirp = synthesize_chirp(cfg, targets, noise_std, seed);

  EncoderConfig ecfg;
  ecfg.steps_per_stage = steps_per_stage;
  NetworkPlan plan = kind == PlanKind::Sdft ? build_sdft(n, ecfg, true) : build_sfft(n, ecfg);
  if (quantized) plan = quantize_plan(plan, QuantSpec{}).plan;

  const RunResult run = run_plan(plan, chirp, mode);
  const Spectrum reference = oracle::dft(chirp.samples);
  const NormalizedPair np = normalize_pair(run.spectrum, reference, true);

  EvalReport rep;
  rep.scenario = scenario_name;
  rep.kind = kind;
  rep.n = n;
  rep.steps_per_stage = steps_per_stage;
  rep.quantized = quantized;
  rep.mode = mode;
  rep.rmse = rmse(np.a, np.b);
  rep.abs_error = (np.a - np.b).cwiseAbs();
  rep.peak_bin = peak_bin_of(run.spectrum);
  rep.oracle_peak_bin = peak_bin_of(reference);
  rep.missing = run.missing;
  rep.clamped = run.clamped;
  return rep;
}

std::string SweepResult::csv() const {
  std::string out = "n,steps_per_stage,rmse\n";
  char line[80];
  for (const SweepRow& r : rows) {
    std::snprintf(line, sizeof line, "%d,%d,%.9g\n", r.n, r.steps_per_stage, r.rmse);
    out += line;
  }
  return out;
}

SweepResult sweep_steps(PlanKind kind, const std::vector<std::string>& scenarios,
                        const std::vector<int>& n_values, const std::vector<int>& steps_values,
                        bool quantized, unsigned seed, double noise_std) {
  if (scenarios.empty() || n_values.empty() || steps_values.empty())
    throw std::invalid_argument("sweep_steps: empty grid");

  SweepResult res;
  int pairs = 0;
  int decreasing = 0;
  for (int n : n_values) {
    double prev = -1.0;
    for (int steps : steps_values) {
      double acc = 0.0;
      for (const std::string& sc : scenarios)
        acc += evaluate_scenario(kind, sc, n, steps, quantized, TimeMode::Stepped, seed, noise_std)
                   .rmse;
      const double mean = acc / static_cast<double>(scenarios.size());
      res.rows.push_back({n, steps, mean});
      if (prev >= 0.0) {
        ++pairs;
        if (mean < prev) ++decreasing;
      }
      prev = mean;
    }
  }
  res.decreasing_fraction = pairs == 0 ? 1.0 : static_cast<double>(decreasing) / pairs;
  return res;
}

RangeDopplerMap range_doppler(const std::vector<Signal>& frame, const PlanBuilder& builder,
                              TimeMode mode) {
  if (frame.empty()) throw std::invalid_argument("range_doppler: empty frame");
  const int n = static_cast<int>(frame[0].size());
  const int n_chirps = static_cast<int>(frame.size());
  for (const Signal& s : frame)
    if (s.size() != n) throw std::invalid_argument("range_doppler: ragged frame");

  const NetworkPlan range_plan = builder(n, true);
  const double range_scale = range_plan.encoder.x_max * range_plan.total_scale();

  // Range pass: spiking spectra kept in code units (values within x_max) so
  // they re-encode directly for the velocity axis.
  Eigen::MatrixXcd range_code(n, n_chirps);
  Eigen::MatrixXcd oracle_range(n, n_chirps);
  for (int c = 0; c < n_chirps; ++c) {
    range_code.col(c) = run_plan(range_plan, frame[c], mode).spectrum / range_scale;
    oracle_range.col(c) = oracle::dft(frame[c].samples);
  }

  const NetworkPlan doppler_plan = builder(n_chirps, false);

  const int half = n / 2;
  RangeDopplerMap map;
  map.magnitude.resize(half, n_chirps);
  map.oracle_magnitude.resize(half, n_chirps);
  for (int r = 1; r <= half; ++r) {
    Signal row;
    row.samples = range_code.row(r).transpose();
    const Spectrum d = run_plan(doppler_plan, row, mode).spectrum;
    map.magnitude.row(r - 1) = (d * range_scale).cwiseAbs().transpose();
    map.oracle_magnitude.row(r - 1) =
        oracle::dft(Eigen::VectorXcd(oracle_range.row(r).transpose())).cwiseAbs().transpose();
  }

  Eigen::Index pr, pd, opr, opd;
  map.magnitude.maxCoeff(&pr, &pd);
  map.oracle_magnitude.maxCoeff(&opr, &opd);
  map.range_bin = static_cast<int>(pr) + 1;
  map.doppler_bin = static_cast<int>(pd);
  map.oracle_range_bin = static_cast<int>(opr) + 1;
  map.oracle_doppler_bin = static_cast<int>(opd);

  map.range_cut.resize(half);
  for (int k = 1; k <= half; ++k) map.range_cut[k - 1] = std::abs(range_code(k, 0)) * range_scale;
  map.doppler_cut = map.magnitude.row(map.range_bin - 1).transpose();
  return map;
}

void write_spectrum_csv(const std::string& path, const Spectrum& oracle_s,
                        const Spectrum& spiking) {
  if (oracle_s.size() != spiking.size())
    throw std::invalid_argument("write_spectrum_csv: size mismatch");
  const Eigen::Index half = oracle_s.size() / 2;

  auto log_mag = [&](const Spectrum& s) {
    Eigen::VectorXd m(half);
    for (Eigen::Index k = 1; k <= half; ++k) m[k - 1] = std::log10(std::abs(s[k]) + 1e-12);
    const double lo = m.minCoeff(), hi = m.maxCoeff();
    if (hi > lo) m = (m.array() - lo) / (hi - lo);
    else m.setZero();
    return m;
  };
  const Eigen::VectorXd mo = log_mag(oracle_s);
  const Eigen::VectorXd ms = log_mag(spiking);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << "bin,oracle_re,oracle_im,snn_re,snn_im,oracle_logmag,snn_logmag\n";
  char line[160];
  for (Eigen::Index k = 1; k <= half; ++k) {
    std::snprintf(line, sizeof line, "%lld,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  static_cast<long long>(k), oracle_s[k].real(), oracle_s[k].imag(),
                  spiking[k].real(), spiking[k].imag(), mo[k - 1], ms[k - 1]);
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  char cell[40];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(cell, sizeof cell, "%.9g", m(r, c));
      out << cell << (c + 1 < m.cols() ? "," : "");
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace sft
