#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sft {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct Signal {
  Eigen::VectorXcd samples;
  double sample_rate = 0.0;  // Hz, 0 when not meaningful (e.g. spectra)

  Eigen::Index size() const { return samples.size(); }
};

// FMCW front-end description.  Derived quantities follow from the sampled
// beat-frequency model: a target at range r produces a tone at
// f = 2 * bandwidth * r / (c * chirp_time), observed for samples_per_chirp
// samples at sampling_frequency.
struct RadarConfig {
  double bandwidth = 1535e6;        // Hz swept per chirp
  double sampling_frequency = 5e6;  // Hz
  int chirps_per_frame = 128;
  double chirp_time = 230e-6;       // s
  double velocity_max = 2.0;        // m/s, configured validity bound
  double carrier_frequency = 77e9;  // Hz
  int samples_cap = 0;              // optional power-of-4 cap, 0 = no extra cap

  // floor(sampling_frequency * chirp_time) rounded down to a power of 4 so a
  // single config drives both the dense and the layered transform.
  int samples_per_chirp() const;
  double max_range() const;            // m, beat Nyquist limit
  double range_resolution() const;     // m per bin = max_range / (N/2)
  double wavelength() const;           // m
  double velocity_resolution() const;  // m/s per Doppler bin
  void validate() const;
};

struct Target {
  double range = 0.0;            // m
  double radial_velocity = 0.0;  // m/s
  double amplitude = 1.0;        // (0, 1]
};

// One chirp of superposed target beat tones plus Gaussian noise, scaled so
// max |sample| <= 1 (never scaled up).  Deterministic in (config, targets,
// noise_std, seed).  Imaginary parts are zero: the front end is real.
Signal synthesize_chirp(const RadarConfig& cfg, const std::vector<Target>& targets,
                        double noise_std, unsigned seed);

// chirps_per_frame chirps; target phases advance chirp-to-chirp by
// 4 pi * radial_velocity * chirp_time / wavelength.  A shared scale factor
// keeps relative amplitudes intact across the frame.
std::vector<Signal> synthesize_frame(const RadarConfig& cfg, const std::vector<Target>& targets,
                                     double noise_std, unsigned seed);

// Named target sets S1..S4 used throughout the evaluation:
//   S1 strong + weak target, S2 weak target only,
//   S3 two equal targets 0.3 m apart, S4 five targets across the range span.
std::vector<Target> scenario(const std::string& name, const RadarConfig& cfg, unsigned seed);

enum class SignalFormat { Csv, F32Binary };

void save_signal(const Signal& s, const std::string& path, SignalFormat fmt);
Signal load_signal(const std::string& path, SignalFormat fmt, double sample_rate = 0.0);

}  // namespace sft
