#include "sft/network.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "sft/detail/turn.hpp"
#include "sft/errors.hpp"

namespace sft {

namespace {

int log4_exact(int n) {
  int l = 0;
  while (n > 1) {
    if (n % 4 != 0) return -1;
    n /= 4;
    ++l;
  }
  return l;
}

LayerParams finish_layer(Eigen::SparseMatrix<double>&& w, const EncoderConfig& cfg,
                         ThresholdMode mode) {
  const double g = cfg.gamma();
  const int t_s = cfg.steps_per_stage;
  const int t_t = 2 * cfg.steps_per_stage - 1;
  LayerParams lp;
  lp.weights = std::move(w);
  lp.threshold = compute_threshold(lp.weights, g, cfg.x_max, mode);
  lp.scale = lp.threshold / (g * cfg.x_max);
  lp.bias = compute_bias(lp.weights, t_s, g, cfg.x_max);
  lp.silent_steps = t_s;
  lp.total_steps = t_t;
  lp.drive_current = 2.0 * lp.threshold / (t_t - t_s);
  return lp;
}

}  // namespace

double NetworkPlan::total_scale() const {
  double s = 1.0;
  for (const LayerParams& l : layers) s *= l.scale;
  return s;
}

std::string NetworkPlan::summary_json() const {
  nlohmann::json j;
  j["kind"] = kind == PlanKind::Sdft ? "sdft" : "sfft";
  j["n"] = n;
  j["steps_per_stage"] = encoder.steps_per_stage;
  j["x_max"] = encoder.x_max;
  j["quantized"] = quantized;
  j["output_order"] = kind == PlanKind::Sfft ? "base-4 digit reversed" : "natural";
  j["total_scale"] = total_scale();
  nlohmann::json layers_j = nlohmann::json::array();
  for (const LayerParams& l : layers) {
    nlohmann::json lj;
    lj["neurons"] = l.weights.rows();
    lj["inputs"] = l.weights.cols();
    lj["nonzeros"] = l.weights.nonZeros();
    lj["threshold"] = l.threshold;
    lj["drive_current"] = l.drive_current;
    lj["scale"] = l.scale;
    lj["bias_nonzeros"] = (l.bias.array() != 0.0).count();
    layers_j.push_back(lj);
  }
  j["layers"] = layers_j;
  return j.dump(2);
}

NetworkPlan build_sdft(int n, const EncoderConfig& cfg, bool real_input) {
  cfg.validate();
  if (n < 2) throw std::invalid_argument("build_sdft: n must be >= 2");

  Eigen::MatrixXd block(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      double re, im;
      detail::unit_phasor(static_cast<long long>(k) * j, n, re, im);
      block(k, j) = re;
      block(k, n + j) = -im;
      block(n + k, j) = im;
      block(n + k, n + j) = re;
    }
  }

  NetworkPlan plan;
  plan.kind = PlanKind::Sdft;
  plan.n = n;
  plan.encoder = cfg;
  Eigen::SparseMatrix<double> w = block.sparseView();
  plan.layers.push_back(
      finish_layer(std::move(w), cfg, real_input ? ThresholdMode::DftHalf : ThresholdMode::General));
  plan.output_map.resize(n);
  for (int k = 0; k < n; ++k) plan.output_map[k] = k;
  return plan;
}

Eigen::Matrix<double, 8, 8> butterfly_block(int k, int n) {
  if (n < 4 || log4_exact(n) < 0) throw std::invalid_argument("butterfly_block: n must be a power of 4");
  if (k < 0 || k >= n / 4) throw std::invalid_argument("butterfly_block: k outside [0, n/4)");

  Eigen::Matrix<double, 8, 8> b;
  for (int q = 0; q < 4; ++q) {
    for (int p = 0; p < 4; ++p) {
      // entry = W_n^{qk} * W_4^{pq} = e^{-2 pi i (4qk + npq) / (4n)}
      double re, im;
      detail::unit_phasor(4LL * q * k + static_cast<long long>(n) * p * q, 4LL * n, re, im);
      b(q, p) = re;
      b(q, p + 4) = -im;
      b(q + 4, p) = im;
      b(q + 4, p + 4) = re;
    }
  }
  return b;
}

int digit_reverse4(int k, int n) {
  int r = 0;
  for (int m = n; m > 1; m /= 4) {
    r = r * 4 + (k & 3);
    k >>= 2;
  }
  return r;
}

NetworkPlan build_sfft(int n, const EncoderConfig& cfg) {
  cfg.validate();
  const int levels = log4_exact(n);
  if (n < 4 || levels < 0)
    throw std::invalid_argument("build_sfft: n must be a power of 4 and >= 4");

  NetworkPlan plan;
  plan.kind = PlanKind::Sfft;
  plan.n = n;
  plan.encoder = cfg;

  for (int m = n; m >= 4; m /= 4) {
    // one layer: independent length-m butterfly groups on each aligned block
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(16 * static_cast<size_t>(n));
    const int quarter = m / 4;
    for (int off = 0; off < n; off += m) {
      for (int j = 0; j < quarter; ++j) {
        const Eigen::Matrix<double, 8, 8> b = butterfly_block(j, m);
        for (int r = 0; r < 8; ++r) {
          const int row = (r < 4 ? 0 : n) + off + (r % 4) * quarter + j;
          for (int c = 0; c < 8; ++c) {
            if (b(r, c) == 0.0) continue;
            const int col = (c < 4 ? 0 : n) + off + (c % 4) * quarter + j;
            trip.emplace_back(row, col, b(r, c));
          }
        }
      }
    }
    Eigen::SparseMatrix<double> w(2 * n, 2 * n);
    w.setFromTriplets(trip.begin(), trip.end());
    plan.layers.push_back(finish_layer(std::move(w), cfg, ThresholdMode::General));
  }

  plan.output_map.resize(n);
  for (int k = 0; k < n; ++k) plan.output_map[k] = digit_reverse4(k, n);
  return plan;
}

Eigen::MatrixXd plan_product(const NetworkPlan& plan) {
  if (plan.layers.empty()) throw std::invalid_argument("plan_product: empty plan");
  Eigen::MatrixXd p = Eigen::MatrixXd(plan.layers.front().weights);
  for (size_t l = 1; l < plan.layers.size(); ++l)
    p = Eigen::MatrixXd(plan.layers[l].weights) * p;
  Eigen::MatrixXd natural(p.rows(), p.cols());
  for (int k = 0; k < plan.n; ++k) {
    natural.row(k) = p.row(plan.output_map[k]);
    natural.row(plan.n + k) = p.row(plan.n + plan.output_map[k]);
  }
  return natural;
}

RunResult run_plan(const NetworkPlan& plan, const Signal& input, TimeMode mode) {
  if (plan.n <= 0 || plan.layers.empty()) throw std::invalid_argument("run_plan: empty plan");
  if (input.size() != plan.n)
    throw std::invalid_argument("run_plan: input length " + std::to_string(input.size()) +
                                " does not match plan n=" + std::to_string(plan.n));

  RunResult res;
  SpikeFrame frame = encode(input, plan.encoder, mode);
  res.trace.push_back(frame);
  for (const LayerParams& layer : plan.layers) {
    std::vector<NeuronState> states = run_silent(layer, frame, mode, &res.clamped);
    SpikeFrame next = run_spiking(states, layer, mode);
    next.stage_index = frame.stage_index + 1;
    frame = std::move(next);
    res.trace.push_back(frame);
  }

  const Decoded dec = decode(frame, plan.encoder.x_max * plan.total_scale(), plan.encoder);
  res.missing = dec.missing;
  res.spectrum.resize(plan.n);
  for (int k = 0; k < plan.n; ++k) res.spectrum[k] = dec.signal.samples[plan.output_map[k]];
  return res;
}

ScheduleReport pipeline_schedule(const NetworkPlan& plan, int n_frames) {
  if (n_frames < 1) throw std::invalid_argument("pipeline_schedule: n_frames must be >= 1");
  const int depth = static_cast<int>(plan.layers.size());
  const int n_t = plan.encoder.steps_per_stage;

  ScheduleReport rep;
  rep.steps_per_stage = n_t;
  rep.frame_period_steps = 2 * n_t;
  rep.latency_steps = (depth + 1) * n_t;
  rep.single_frame_layer_fraction = 1.0 / depth;

  // Frame f is integrated by layer l during stage 2f + l and emits spikes the
  // stage after, so consecutive frames may enter every other stage.
  const int stages = 2 * (n_frames - 1) + depth + 1;
  rep.occupancy.assign(stages, std::vector<int>(depth, -1));
  for (int f = 0; f < n_frames; ++f)
    for (int l = 0; l < depth; ++l) rep.occupancy[2 * f + l][l] = f;

  int in_flight = 0;
  for (int s = 0; s < stages; ++s) {
    const int lo = std::max(0, (s - depth + 1) / 2);
    const int hi = std::min(n_frames - 1, s / 2);
    in_flight = std::max(in_flight, hi - lo + 1);
  }
  rep.frames_in_flight = in_flight;
  return rep;
}

}  // namespace sft
