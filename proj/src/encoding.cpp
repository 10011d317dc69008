#include "sft/encoding.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sft {

void EncoderConfig::validate() const {
  if (!(x_max > 0.0) || !std::isfinite(x_max))
    throw std::domain_error("EncoderConfig: x_max must be positive");
  if (steps_per_stage < 2) throw std::domain_error("EncoderConfig: steps_per_stage must be >= 2");
}

SpikeFrame encode(const Signal& x, const EncoderConfig& cfg, TimeMode mode) {
  cfg.validate();
  const Eigen::Index n = x.size();
  if (n == 0) throw std::invalid_argument("encode: empty input");

  const double g = cfg.gamma();
  const double tmax = static_cast<double>(cfg.t_max());

  SpikeFrame frame;
  frame.steps.resize(2 * n);
  frame.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(2 * n, true);
  frame.stage_index = 0;

  auto place = [&](Eigen::Index neuron, double value) {
    if (std::abs(value) > cfg.x_max)
      throw std::out_of_range("encode: |x[" + std::to_string(neuron) + "]| = " +
                              std::to_string(std::abs(value)) + " exceeds x_max");
    double t = g * (cfg.x_max - value);
    if (mode == TimeMode::Stepped) t = std::round(t);
    // The exact map already lands in [0, t_max]; clamp only mops up rounding.
    frame.steps[neuron] = std::min(std::max(t, 0.0), tmax);
  };

  for (Eigen::Index j = 0; j < n; ++j) {
    place(j, x.samples[j].real());
    place(n + j, x.samples[j].imag());
  }
  return frame;
}

Decoded decode(const SpikeFrame& frame, double scale, const EncoderConfig& cfg) {
  cfg.validate();
  if (!(scale > 0.0)) throw std::domain_error("decode: scale must be positive");
  if (frame.size() == 0 || frame.size() % 2 != 0)
    throw std::invalid_argument("decode: frame size must be even and nonzero");

  const double tmax = static_cast<double>(cfg.t_max());
  const Eigen::Index n = frame.size() / 2;

  Decoded out;
  out.signal.samples.resize(n);
  out.signal.sample_rate = 0.0;

  auto value_of = [&](Eigen::Index neuron) {
    if (!frame.fired[neuron]) {
      ++out.missing;
      return -scale;
    }
    const double r = frame.steps[neuron];
    if (r < 0.0 || r > tmax)
      throw std::out_of_range("decode: spike step " + std::to_string(r) + " of neuron " +
                              std::to_string(neuron) + " outside stage window");
    return scale * (1.0 - 2.0 * r / tmax);
  };

  for (Eigen::Index j = 0; j < n; ++j)
    out.signal.samples[j] = std::complex<double>(value_of(j), value_of(n + j));
  return out;
}

}  // namespace sft
