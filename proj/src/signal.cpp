#include "sft/signal.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "sft/errors.hpp"

namespace sft {

namespace {

int power_of_4_floor(int n) {
  int p = 1;
  while (p <= n / 4) p *= 4;
  return p;
}

void check_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + " must be finite");
}

void validate_targets(const RadarConfig& cfg, const std::vector<Target>& targets) {
  const double rmax = cfg.max_range();
  for (size_t k = 0; k < targets.size(); ++k) {
    const Target& t = targets[k];
    check_finite(t.range, "target range");
    check_finite(t.radial_velocity, "target velocity");
    check_finite(t.amplitude, "target amplitude");
    if (t.range <= 0.0 || t.range > rmax)
      throw std::domain_error("target " + std::to_string(k) + ": range " +
                              std::to_string(t.range) + " outside (0, " +
                              std::to_string(rmax) + "]");
    if (std::abs(t.radial_velocity) > cfg.velocity_max)
      throw std::domain_error("target " + std::to_string(k) + ": |velocity| exceeds " +
                              std::to_string(cfg.velocity_max));
    if (t.amplitude <= 0.0 || t.amplitude > 1.0)
      throw std::domain_error("target " + std::to_string(k) + ": amplitude outside (0, 1]");
  }
}

// Shared synthesis core.  Phases are drawn once per target, then noise is
// drawn chirp by chirp, so a one-chirp call reproduces the first chirp of a
// frame with the same seed.
std::vector<Signal> synthesize(const RadarConfig& cfg, const std::vector<Target>& targets,
                               double noise_std, unsigned seed, int n_chirps) {
  cfg.validate();
  validate_targets(cfg, targets);
  if (noise_std < 0.0 || !std::isfinite(noise_std))
    throw std::domain_error("noise_std must be finite and >= 0");

  const int n = cfg.samples_per_chirp();
  const double fs = cfg.sampling_frequency;
  const double lambda = cfg.wavelength();

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * M_PI);
  std::normal_distribution<double> noise_dist(0.0, 1.0);

  std::vector<double> phase0(targets.size());
  std::vector<double> beat(targets.size());
  std::vector<double> dphi(targets.size());
  for (size_t k = 0; k < targets.size(); ++k) {
    phase0[k] = phase_dist(rng);
    beat[k] = 2.0 * cfg.bandwidth * targets[k].range / (kSpeedOfLight * cfg.chirp_time);
    dphi[k] = 4.0 * M_PI * targets[k].radial_velocity * cfg.chirp_time / lambda;
  }

  std::vector<Signal> frame(n_chirps);
  double peak = 0.0;
  for (int m = 0; m < n_chirps; ++m) {
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < n; ++j) {
      const double t = static_cast<double>(j) / fs;
      double v = 0.0;
      for (size_t k = 0; k < targets.size(); ++k)
        v += targets[k].amplitude *
             std::cos(2.0 * M_PI * beat[k] * t + phase0[k] + m * dphi[k]);
      if (noise_std > 0.0) v += noise_std * noise_dist(rng);
      s[j] = std::complex<double>(v, 0.0);
      peak = std::max(peak, std::abs(v));
    }
    frame[m].samples = std::move(s);
    frame[m].sample_rate = fs;
  }

  if (peak > 1.0) {
    for (Signal& s : frame) s.samples /= peak;
  }
  return frame;
}

}  // namespace

int RadarConfig::samples_per_chirp() const {
  const int raw = static_cast<int>(std::floor(sampling_frequency * chirp_time));
  int n = power_of_4_floor(raw);
  if (samples_cap > 0) n = std::min(n, samples_cap);
  return n;
}

double RadarConfig::max_range() const {
  return kSpeedOfLight * sampling_frequency * chirp_time / (4.0 * bandwidth);
}

double RadarConfig::range_resolution() const {
  return max_range() / (samples_per_chirp() / 2);
}

double RadarConfig::wavelength() const { return kSpeedOfLight / carrier_frequency; }

double RadarConfig::velocity_resolution() const {
  return wavelength() / (2.0 * chirp_time * chirps_per_frame);
}

void RadarConfig::validate() const {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
    throw std::domain_error("bandwidth must be positive");
  if (!(sampling_frequency > 0.0) || !std::isfinite(sampling_frequency))
    throw std::domain_error("sampling_frequency must be positive");
  if (chirps_per_frame < 1) throw std::domain_error("chirps_per_frame must be >= 1");
  if (!(chirp_time > 0.0) || !std::isfinite(chirp_time))
    throw std::domain_error("chirp_time must be positive");
  if (!(carrier_frequency > 0.0)) throw std::domain_error("carrier_frequency must be positive");
  if (samples_cap > 0 && power_of_4_floor(samples_cap) != samples_cap)
    throw std::domain_error("samples_cap must be a power of 4");
  if (samples_per_chirp() < 4)
    throw std::domain_error("config yields fewer than 4 samples per chirp");
}

Signal synthesize_chirp(const RadarConfig& cfg, const std::vector<Target>& targets,
                        double noise_std, unsigned seed) {
  return synthesize(cfg, targets, noise_std, seed, 1).front();
}

std::vector<Signal> synthesize_frame(const RadarConfig& cfg, const std::vector<Target>& targets,
                                     double noise_std, unsigned seed) {
  return synthesize(cfg, targets, noise_std, seed, cfg.chirps_per_frame);
}

std::vector<Target> scenario(const std::string& name, const RadarConfig& cfg, unsigned /*seed*/) {
  cfg.validate();
  // Placements are fixed constants; the seed only feeds synthesis.
  if (name == "S1") return {{5.0, 0.0, 1.0}, {45.0, 0.0, 0.05}};
  if (name == "S2") return {{45.0, 0.0, 0.05}};
  if (name == "S3") return {{20.0, 0.0, 0.5}, {20.3, 0.0, 0.5}};
  if (name == "S4")
    return {{5.0, 0.0, 1.0}, {15.0, 0.0, 0.6}, {25.0, 0.0, 0.3}, {38.0, 0.0, 0.12},
            {50.0, 0.0, 0.05}};
  throw std::invalid_argument("unknown scenario '" + name + "' (expected S1..S4)");
}

void save_signal(const Signal& s, const std::string& path, SignalFormat fmt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  if (fmt == SignalFormat::Csv) {
    char line[80];
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      std::snprintf(line, sizeof line, "%.9g,%.9g\n", s.samples[i].real(), s.samples[i].imag());
      out << line;
    }
  } else {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const float re = static_cast<float>(s.samples[i].real());
      const float im = static_cast<float>(s.samples[i].imag());
      out.write(reinterpret_cast<const char*>(&re), sizeof re);
      out.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Signal load_signal(const std::string& path, SignalFormat fmt, double sample_rate) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Signal s;
  s.sample_rate = sample_rate;

  if (fmt == SignalFormat::Csv) {
    std::vector<std::complex<double>> vals;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const size_t comma = line.find(',');
      if (comma == std::string::npos) throw ParseError("expected 're,im'", lineno);
      size_t pos = 0;
      double re, im;
      try {
        re = std::stod(line.substr(0, comma), &pos);
        if (pos != comma) throw std::invalid_argument("");
        im = std::stod(line.substr(comma + 1), &pos);
        if (pos != line.size() - comma - 1) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("malformed sample '" + line + "'", lineno);
      }
      vals.emplace_back(re, im);
    }
    s.samples = Eigen::Map<const Eigen::VectorXcd>(vals.data(), vals.size());
  } else {
    in.seekg(0, std::ios::end);
    const std::streamoff bytes = in.tellg();
    in.seekg(0, std::ios::beg);
    if (bytes % (2 * sizeof(float)) != 0)
      throw FormatError("binary signal '" + path + "' has length " + std::to_string(bytes) +
                        ", not a multiple of 8 bytes");
    const Eigen::Index n = bytes / (2 * sizeof(float));
    s.samples.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      float re, im;
      in.read(reinterpret_cast<char*>(&re), sizeof re);
      in.read(reinterpret_cast<char*>(&im), sizeof im);
      if (!in) throw FormatError("binary signal '" + path + "' truncated");
      s.samples[i] = std::complex<double>(re, im);
    }
  }
  return s;
}

}  // namespace sft
