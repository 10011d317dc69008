#include <doctest.h>

#include <cmath>
#include <random>

#include "sft/errors.hpp"
#include "sft/neuron.hpp"

using namespace sft;

namespace {

Eigen::SparseMatrix<double> sparse(const Eigen::MatrixXd& dense) {
  return dense.sparseView(1.0, 0.0);
}

Eigen::MatrixXd random_dense(int rows, int cols, unsigned seed, double lim) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-lim, lim);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = u(rng);
  return m;
}

Signal random_signal(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Signal s;
  s.samples.resize(n);
  for (int j = 0; j < n; ++j) s.samples[j] = std::complex<double>(u(rng), u(rng));
  return s;
}

// layer sized for one encoder stage, thresholded for any input in range
LayerParams general_layer(const Eigen::MatrixXd& w, const EncoderConfig& cfg) {
  LayerParams p;
  p.weights = sparse(w);
  p.threshold = compute_threshold(w, cfg.gamma(), cfg.x_max, ThresholdMode::General);
  p.bias = compute_bias(w, cfg.steps_per_stage, cfg.gamma(), cfg.x_max);
  p.silent_steps = cfg.steps_per_stage;
  p.total_steps = 2 * cfg.steps_per_stage - 1;
  p.drive_current = 2.0 * p.threshold / cfg.t_max();
  p.scale = p.threshold / (cfg.gamma() * cfg.x_max);
  return p;
}

}  // namespace

TEST_SUITE("neuron") {

TEST_CASE("thresholds follow the worst-case row sum") {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, -2.0, 3.0, 4.0;
  CHECK(compute_threshold(w, 128.0, 1.0, ThresholdMode::General) == 128.0 * 7.0);
  CHECK(compute_threshold(sparse(w), 128.0, 1.0, ThresholdMode::General) == 128.0 * 7.0);

  Eigen::MatrixXd half(2, 2);
  half << 1.0, 2.0, 3.0, -4.0;
  CHECK(compute_threshold(half, 128.0, 1.0, ThresholdMode::DftHalf) == 64.0 * 3.0);
  CHECK_THROWS_AS(
      (void)compute_threshold(w, 128.0, 1.0, ThresholdMode::DftHalf),  // row 0 has -2
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)compute_threshold(Eigen::MatrixXd::Zero(2, 2), 128.0, 1.0, ThresholdMode::General),
      std::domain_error);
  CHECK_THROWS_AS((void)compute_threshold(w, -1.0, 1.0, ThresholdMode::General),
                  std::domain_error);
}

TEST_CASE("bias cancels the code offset") {
  Eigen::MatrixXd w(2, 2);
  w << 1.0, -2.0, 3.0, 4.0;
  const Eigen::VectorXd b = compute_bias(w, 257, 128.0, 1.0);
  CHECK(b[0] == -(257.0 - 128.0) * (1.0 - 2.0));
  CHECK(b[1] == -(257.0 - 128.0) * (3.0 + 4.0));
  CHECK(compute_bias(sparse(w), 257, 128.0, 1.0).isApprox(b));
}

TEST_CASE("silent stage integrates the weighted code") {
  EncoderConfig cfg;
  const Eigen::MatrixXd w = random_dense(8, 16, 21, 0.5);
  const LayerParams p = general_layer(w, cfg);
  const Signal s = random_signal(8, 22);
  Eigen::VectorXd v(16);
  v << s.samples.real(), s.samples.imag();
  const Eigen::VectorXd expect = cfg.gamma() * (w * v);

  const auto cont = run_silent(p, encode(s, cfg, TimeMode::Continuous), TimeMode::Continuous);
  for (int i = 0; i < 8; ++i)
    CHECK(cont[i].membrane == doctest::Approx(expect[i]).epsilon(1e-12));

  // stepped codes round each input by at most half a step
  const auto stepped = run_silent(p, encode(s, cfg));
  const double slack = 0.5 * w.cwiseAbs().rowwise().sum().maxCoeff() + 1e-9;
  for (int i = 0; i < 8; ++i) {
    CHECK(std::abs(stepped[i].membrane - expect[i]) <= slack);
    CHECK_FALSE(stepped[i].fired);
  }
}

TEST_CASE("zero input leaves every membrane at rest") {
  EncoderConfig cfg;
  const Eigen::MatrixXd w = random_dense(6, 12, 31, 0.4);
  const LayerParams p = general_layer(w, cfg);
  Signal zeros;
  zeros.samples = Eigen::VectorXcd::Zero(6);
  for (const auto& st : run_silent(p, encode(zeros, cfg)))
    CHECK(std::abs(st.membrane) < 1e-12);
}

TEST_CASE("a hot input trips the silent-stage guard") {
  EncoderConfig cfg;
  Eigen::MatrixXd w(1, 2);
  w << 1.0, 0.0;
  LayerParams p = general_layer(w, cfg);
  p.threshold = 10.0;  // far below the safe bound of gamma * x_max
  p.drive_current = 2.0 * p.threshold / cfg.t_max();
  Signal hot;
  hot.samples = Eigen::VectorXcd::Constant(1, std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS((void)run_silent(p, encode(hot, cfg)), PrematureSpikeError);
  CHECK_THROWS_AS((void)run_silent(p, encode(hot, cfg, TimeMode::Continuous), TimeMode::Continuous),
                  PrematureSpikeError);
}

TEST_CASE("ramp crossings quantize with a ceil") {
  EncoderConfig cfg;  // t_max 256
  LayerParams p;
  p.weights = sparse(Eigen::MatrixXd::Identity(5, 5));
  p.bias = Eigen::VectorXd::Zero(5);
  p.threshold = 896.0;
  p.silent_steps = 257;
  p.total_steps = 513;
  p.drive_current = 2.0 * 896.0 / 256.0;  // exactly 7
  p.scale = 1.0;

  std::vector<NeuronState> st(5);
  st[0].membrane = 896.0;           // at threshold: first spiking step
  st[1].membrane = -896.0;          // floor: final step of the stage
  st[2].membrane = 0.0;             // midpoint
  st[3].membrane = 896.0 - 1e-9;    // a hair below threshold still waits one step
  st[4].membrane = 896.0 - 7.5;     // just over one drive quantum: two steps
  const SpikeFrame out = run_spiking(st, p);

  CHECK(out.steps[0] == 1.0);
  CHECK(out.steps[1] == 256.0);
  CHECK(out.steps[2] == 128.0);
  CHECK(out.steps[3] == 1.0);
  CHECK(out.steps[4] == 2.0);
  CHECK(out.fired.all());
  for (int i = 0; i < 5; ++i) CHECK(st[i].fire_step == 257.0 + out.steps[i]);
}

TEST_CASE("continuous crossings are linear in the membrane") {
  LayerParams p;
  p.weights = sparse(Eigen::MatrixXd::Identity(3, 3));
  p.bias = Eigen::VectorXd::Zero(3);
  p.threshold = 896.0;
  p.silent_steps = 257;
  p.total_steps = 513;
  p.drive_current = 7.0;
  p.scale = 1.0;

  std::vector<NeuronState> st(3);
  st[0].membrane = 896.0;
  st[1].membrane = 0.0;
  st[2].membrane = -448.0;
  const SpikeFrame out = run_spiking(st, p, TimeMode::Continuous);
  CHECK(out.steps[0] == doctest::Approx(0.0));
  CHECK(out.steps[1] == doctest::Approx(128.0));
  CHECK(out.steps[2] == doctest::Approx(192.0));
}

TEST_CASE("spiking stage refuses stale or unreachable states") {
  LayerParams p;
  p.weights = sparse(Eigen::MatrixXd::Identity(2, 2));
  p.bias = Eigen::VectorXd::Zero(2);
  p.threshold = 896.0;
  p.silent_steps = 257;
  p.total_steps = 513;
  p.drive_current = 7.0;
  p.scale = 1.0;

  std::vector<NeuronState> wrong_count(3);
  CHECK_THROWS_AS((void)run_spiking(wrong_count, p), std::invalid_argument);

  std::vector<NeuronState> stale(2);
  stale[0].fired = true;
  CHECK_THROWS_AS((void)run_spiking(stale, p), std::invalid_argument);

  std::vector<NeuronState> sunk(2);
  sunk[0].membrane = -896.0 - 10.0 * 7.0;  // below the reachable floor
  CHECK_THROWS_AS((void)run_spiking(sunk, p), NoSpikeError);
}

TEST_CASE("layer output decodes to the weighted values") {
  EncoderConfig cfg;
  const Eigen::MatrixXd w = random_dense(8, 8, 55, 0.25);
  const LayerParams p = general_layer(w, cfg);
  const Signal s = random_signal(4, 56);
  Eigen::VectorXd v(8);
  v << s.samples.real(), s.samples.imag();
  const Eigen::VectorXd expect = w * v;

  auto st = run_silent(p, encode(s, cfg));
  SpikeFrame out = run_spiking(st, p);
  const Decoded d = decode(out, cfg.x_max * p.scale, cfg);
  const double tol = 4.0 * cfg.x_max * p.scale / cfg.t_max();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(d.signal.samples[i].real() - expect[i]) <= tol);
    CHECK(std::abs(d.signal.samples[i].imag() - expect[4 + i]) <= tol);
  }
}

TEST_CASE("layer parameters validate their invariants") {
  EncoderConfig cfg;
  const Eigen::MatrixXd w = random_dense(4, 4, 66, 0.5);
  LayerParams p = general_layer(w, cfg);
  CHECK_NOTHROW(p.validate());

  LayerParams weak = p;
  weak.drive_current = 2.0 * p.threshold / (p.total_steps - p.silent_steps) * 0.99;
  CHECK_THROWS_AS(weak.validate(), std::domain_error);

  LayerParams flat = p;
  flat.threshold = 0.0;
  CHECK_THROWS_AS(flat.validate(), std::domain_error);

  LayerParams folded = p;
  folded.total_steps = folded.silent_steps;
  CHECK_THROWS_AS(folded.validate(), std::domain_error);

  LayerParams lopsided = p;
  lopsided.bias = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(lopsided.validate(), std::domain_error);
}

TEST_CASE("voltage saturation clamps and counts") {
  LayerParams p;
  Eigen::MatrixXd w(2, 2);
  w << 1.0, 0.0, -1.0, 0.0;
  p.weights = sparse(w);
  p.bias = Eigen::VectorXd::Zero(2);
  p.threshold = 1e6;  // out of reach, saturation is what we watch
  p.silent_steps = 257;
  p.total_steps = 513;
  p.drive_current = 2.0 * p.threshold / 256.0;
  p.scale = 1.0;
  p.voltage_limit = 100.0;

  SpikeFrame in;
  in.steps = Eigen::VectorXd::Zero(2);
  in.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(2, true);

  int clamped = 0;
  const auto st = run_silent(p, in, TimeMode::Stepped, &clamped);
  CHECK(clamped > 0);
  CHECK(std::abs(st[0].membrane) <= 100.0);
  CHECK(std::abs(st[1].membrane) <= 100.0);
}

}  // TEST_SUITE
