#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sft/network.hpp"
#include "sft/quantize.hpp"
#include "sft/signal.hpp"

namespace sft {

// Spectra prepared for comparison: offset bin dropped, positive half kept for
// real inputs, then the real and imaginary parts of each spectrum scaled
// independently into [-1, 1].
struct NormalizedPair {
  Eigen::VectorXd a;  // concatenated [re; im]
  Eigen::VectorXd b;
  int bins = 0;             // retained complex bins per spectrum
  bool a_zero = false;      // degenerate all-zero spectrum, scale left at 1
  bool b_zero = false;
};

NormalizedPair normalize_pair(const Spectrum& a, const Spectrum& b, bool positive_half = true);

double rmse(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct EvalReport {
  std::string scenario;
  PlanKind kind = PlanKind::Sdft;
  int n = 0;
  int steps_per_stage = 0;
  bool quantized = false;
  TimeMode mode = TimeMode::Stepped;
  double rmse = 0.0;
  int peak_bin = 0;         // argmax of |spectrum| over bins 1..n/2
  int oracle_peak_bin = 0;
  int missing = 0;
  int clamped = 0;
  Eigen::VectorXd abs_error;  // per retained value, normalized domain

  std::string json() const;
};

// Synthesizes the named scene at length n, runs the requested transform, and
// scores it against the dense reference.
EvalReport evaluate_scenario(PlanKind kind, const std::string& scenario_name, int n,
                             int steps_per_stage, bool quantized,
                             TimeMode mode = TimeMode::Stepped, unsigned seed = 1,
                             double noise_std = 0.01);

struct SweepRow {
  int n = 0;
  int steps_per_stage = 0;
  double rmse = 0.0;  // mean over scenarios
};

struct SweepResult {
  std::vector<SweepRow> rows;
  double decreasing_fraction = 0.0;  // adjacent steps pairs where error fell

  std::string csv() const;
};

SweepResult sweep_steps(PlanKind kind, const std::vector<std::string>& scenarios,
                        const std::vector<int>& n_values, const std::vector<int>& steps_values,
                        bool quantized, unsigned seed = 1, double noise_std = 0.01);

struct RangeDopplerMap {
  Eigen::MatrixXd magnitude;         // rows: range bins 1..n/2, cols: Doppler bins
  Eigen::MatrixXd oracle_magnitude;
  int range_bin = 0;                 // spiking argmax (absolute range bin)
  int doppler_bin = 0;
  int oracle_range_bin = 0;
  int oracle_doppler_bin = 0;
  Eigen::VectorXd range_cut;    // |spectrum| of chirp 0, bins 1..n/2
  Eigen::VectorXd doppler_cut;  // map row at the peak range bin
};

// Two-pass transform over a frame: per-chirp range spectra, re-encoded along
// chirps for the velocity axis.  The builder receives (length, real_input).
RangeDopplerMap range_doppler(const std::vector<Signal>& frame, const PlanBuilder& builder,
                              TimeMode mode = TimeMode::Stepped);

// Plot-ready spectrum table: bin, reference re/im, spiking re/im, and both
// log-magnitudes scaled to [0, 1].
void write_spectrum_csv(const std::string& path, const Spectrum& oracle, const Spectrum& spiking);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace sft
