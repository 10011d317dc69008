#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sft/evaluate.hpp"

using namespace sft;
using cd = std::complex<double>;

namespace {

Spectrum ramp_spectrum(int n) {
  Spectrum s(n);
  for (int k = 0; k < n; ++k) s[k] = cd(k + 1.0, -0.5 * k);
  return s;
}

std::string tmp_file(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("evaluate") {

TEST_CASE("normalization drops the offset bin and fixes the scale") {
  const Spectrum a = ramp_spectrum(8);
  Spectrum a_shifted = a;
  a_shifted[0] = cd(999.0, -999.0);  // offset bin must not matter
  const NormalizedPair p1 = normalize_pair(a, a, true);
  const NormalizedPair p2 = normalize_pair(a_shifted, a, true);
  CHECK(p1.bins == 4);
  CHECK(p1.a.size() == 8);  // re and im halves
  CHECK((p1.a - p2.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((p1.a - p1.b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(p1.a.cwiseAbs().maxCoeff() == doctest::Approx(1.0));

  // each side is scaled by its own max, so a global factor disappears
  const NormalizedPair p3 = normalize_pair(a, 2.5 * a, true);
  CHECK((p3.a - p3.b).cwiseAbs().maxCoeff() < 1e-12);

  const NormalizedPair full = normalize_pair(a, a, false);
  CHECK(full.bins == 7);

  const NormalizedPair zero = normalize_pair(Spectrum::Zero(8), a, true);
  CHECK(zero.a_zero);
  CHECK_FALSE(zero.b_zero);
  CHECK(zero.a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rmse measures the mean gap") {
  Eigen::VectorXd a(2), b(2);
  a << 1.0, 0.0;
  b << 0.0, 0.0;
  CHECK(rmse(a, b) == doctest::Approx(std::sqrt(0.5)));
  CHECK(rmse(a, a) == 0.0);
  CHECK(rmse(a, b) == rmse(b, a));
  CHECK_THROWS_AS((void)rmse(a, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("scenario evaluation produces a coherent report") {
  const EvalReport rep = evaluate_scenario(PlanKind::Sdft, "S1", 64, 65, false);
  CHECK(rep.scenario == "S1");
  CHECK(rep.n == 64);
  CHECK(rep.steps_per_stage == 65);
  CHECK_FALSE(rep.quantized);
  CHECK(rep.rmse >= 0.0);
  CHECK(rep.rmse < 0.5);
  CHECK(rep.peak_bin >= 1);
  CHECK(rep.peak_bin <= 32);
  CHECK(rep.oracle_peak_bin >= 1);
  CHECK(rep.oracle_peak_bin <= 32);
  CHECK(rep.abs_error.size() == 64);  // 32 retained bins, re + im
  CHECK(rep.missing == 0);

  const auto j = nlohmann::json::parse(rep.json());
  CHECK(j["scenario"] == "S1");
  CHECK(j["kind"] == "sdft");
  CHECK(j["rmse"] == doctest::Approx(rep.rmse));
  CHECK(j["values_compared"] == 64);
}

TEST_CASE("continuous evaluation collapses to the oracle") {
  const EvalReport rep =
      evaluate_scenario(PlanKind::Sfft, "S3", 64, 65, false, TimeMode::Continuous);
  CHECK(rep.rmse < 1e-9);
  CHECK(rep.peak_bin == rep.oracle_peak_bin);
}

TEST_CASE("unreachable lengths are rejected") {
  CHECK_THROWS_WITH_AS((void)evaluate_scenario(PlanKind::Sdft, "S1", 100, 65, false),
                       doctest::Contains("power of 4"), std::domain_error);
}

TEST_CASE("step sweeps aggregate scenario error") {
  const SweepResult res = sweep_steps(PlanKind::Sfft, {"S1"}, {64}, {65, 129}, true);
  REQUIRE(res.rows.size() == 2);
  CHECK(res.rows[0].n == 64);
  CHECK(res.rows[0].steps_per_stage == 65);
  CHECK(res.rows[1].steps_per_stage == 129);
  CHECK(res.rows[1].rmse < res.rows[0].rmse);
  CHECK(res.decreasing_fraction == doctest::Approx(1.0));

  const std::string csv = res.csv();
  CHECK(csv.rfind("n,steps_per_stage,rmse\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("static scenes pin the doppler axis to zero") {
  RadarConfig rc;
  rc.samples_cap = 64;
  rc.chirps_per_frame = 16;
  const auto frame = synthesize_frame(rc, {{20.0, 0.0, 0.8}}, 0.005, 3);
  EncoderConfig ec;
  ec.steps_per_stage = 129;
  const RangeDopplerMap map =
      range_doppler(frame, [&](int n, bool) { return build_sfft(n, ec); });

  CHECK(map.magnitude.rows() == 32);
  CHECK(map.magnitude.cols() == 16);
  CHECK(map.oracle_magnitude.rows() == 32);
  CHECK(map.range_bin == 11);  // 20 m at 1.75 m per bin
  CHECK(map.oracle_range_bin == 11);
  CHECK(map.doppler_bin == 0);
  CHECK(map.oracle_doppler_bin == 0);
  CHECK(map.range_cut.size() == 32);
  CHECK(map.doppler_cut.size() == 16);
  CHECK(map.doppler_cut[0] == map.magnitude(map.range_bin - 1, 0));

  auto ragged = frame;
  ragged[3].samples.conservativeResize(32);
  CHECK_THROWS_AS(
      (void)range_doppler(ragged, [&](int n, bool) { return build_sfft(n, ec); }),
      std::invalid_argument);
}

TEST_CASE("csv writers emit readable tables") {
  const Spectrum s = ramp_spectrum(8);
  const std::string spec_path = tmp_file("sft_eval_spectrum.csv");
  write_spectrum_csv(spec_path, s, s);
  {
    std::ifstream in(spec_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "bin,oracle_re,oracle_im,snn_re,snn_im,oracle_logmag,snn_logmag");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
  }
  std::remove(spec_path.c_str());

  Eigen::MatrixXd m(2, 3);
  m << 1.0, 2.5, -3.0, 0.0, 4.25, 5.0;
  const std::string mat_path = tmp_file("sft_eval_matrix.csv");
  write_matrix_csv(mat_path, m);
  {
    std::ifstream in(mat_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "1,2.5,-3");
    std::getline(in, line);
    CHECK(line == "0,4.25,5");
  }
  std::remove(mat_path.c_str());
}

}  // TEST_SUITE
