#include <doctest.h>

#include <random>

#include "sft/encoding.hpp"

using namespace sft;

namespace {

Signal make_signal(std::initializer_list<std::complex<double>> values) {
  Signal s;
  s.samples.resize(static_cast<Eigen::Index>(values.size()));
  Eigen::Index j = 0;
  for (const auto& v : values) s.samples[j++] = v;
  return s;
}

Signal random_signal(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Signal s;
  s.samples.resize(n);
  for (int j = 0; j < n; ++j) s.samples[j] = std::complex<double>(u(rng), u(rng));
  return s;
}

}  // namespace

TEST_SUITE("encoding") {

TEST_CASE("code geometry at the default resolution") {
  EncoderConfig cfg;  // 257 steps
  CHECK(cfg.t_max() == 256);
  CHECK(cfg.gamma() == 128.0);

  const SpikeFrame f = encode(make_signal({{1.0, -1.0}, {0.0, 0.5}}), cfg);
  REQUIRE(f.size() == 4);
  CHECK(f.steps[0] == 0.0);    // +x_max spikes first
  CHECK(f.steps[1] == 128.0);  // zero sits mid-window
  CHECK(f.steps[2] == 256.0);  // -x_max spikes last (imaginary channel block)
  CHECK(f.steps[3] == 64.0);
  CHECK(f.fired.all());
  CHECK(f.stage_index == 0);
}

TEST_CASE("stepped codes are integers, continuous codes are not rounded") {
  EncoderConfig cfg;
  const Signal s = make_signal({{0.3, -0.7}});
  const SpikeFrame stepped = encode(s, cfg, TimeMode::Stepped);
  CHECK(stepped.steps[0] == std::round(128.0 * 0.7));
  const SpikeFrame cont = encode(s, cfg, TimeMode::Continuous);
  CHECK(cont.steps[0] == doctest::Approx(128.0 * 0.7).epsilon(1e-15));
  CHECK(cont.steps[1] == doctest::Approx(128.0 * 1.7).epsilon(1e-15));
}

TEST_CASE("inputs beyond the coding range are rejected") {
  EncoderConfig cfg;
  CHECK_NOTHROW((void)encode(make_signal({{1.0, -1.0}}), cfg));
  CHECK_THROWS_AS((void)encode(make_signal({{1.0 + 1e-9, 0.0}}), cfg), std::out_of_range);
  CHECK_THROWS_AS((void)encode(Signal{}, cfg), std::invalid_argument);

  cfg.steps_per_stage = 1;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
  cfg = EncoderConfig{};
  cfg.x_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::domain_error);
}

TEST_CASE("stepped round trip stays within half a step") {
  EncoderConfig cfg;
  const double bound = cfg.x_max / cfg.t_max() + 1e-12;
  for (unsigned seed = 0; seed < 10; ++seed) {
    const Signal s = random_signal(20, seed);
    const Decoded d = decode(encode(s, cfg), cfg.x_max, cfg);
    CHECK(d.missing == 0);
    const Eigen::VectorXcd err = d.signal.samples - s.samples;
    CHECK(err.real().cwiseAbs().maxCoeff() <= bound);  // per channel, not modulus
    CHECK(err.imag().cwiseAbs().maxCoeff() <= bound);
  }
}

TEST_CASE("continuous round trip is exact") {
  EncoderConfig cfg;
  const Signal s = random_signal(20, 42);
  const Decoded d =
      decode(encode(s, cfg, TimeMode::Continuous), cfg.x_max, cfg);
  CHECK((d.signal.samples - s.samples).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("scale propagates through decode") {
  EncoderConfig cfg;
  SpikeFrame f;
  f.steps = Eigen::VectorXd::Zero(2);  // both channels at +x_max
  f.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(2, true);
  const Decoded d = decode(f, 3.5, cfg);
  CHECK(d.signal.samples[0].real() == 3.5);
  CHECK(d.signal.samples[0].imag() == 3.5);
}

TEST_CASE("unfired channels decode to the floor value and are counted") {
  EncoderConfig cfg;
  SpikeFrame f;
  f.steps = Eigen::VectorXd::Constant(4, 128.0);
  f.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(4, true);
  f.fired[2] = false;
  const Decoded d = decode(f, 2.0, cfg);
  CHECK(d.missing == 1);
  CHECK(d.signal.samples[0].real() == 0.0);
  CHECK(d.signal.samples[0].imag() == -2.0);  // never fired
}

TEST_CASE("decode rejects malformed frames") {
  EncoderConfig cfg;
  SpikeFrame odd;
  odd.steps = Eigen::VectorXd::Zero(3);
  odd.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(3, true);
  CHECK_THROWS_AS((void)decode(odd, 1.0, cfg), std::invalid_argument);

  SpikeFrame late;
  late.steps = Eigen::VectorXd::Constant(2, 257.0);  // beyond the stage window
  late.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(2, true);
  CHECK_THROWS_AS((void)decode(late, 1.0, cfg), std::out_of_range);

  SpikeFrame ok;
  ok.steps = Eigen::VectorXd::Zero(2);
  ok.fired = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(2, true);
  CHECK_THROWS_AS((void)decode(ok, 0.0, cfg), std::domain_error);
}

}  // TEST_SUITE
