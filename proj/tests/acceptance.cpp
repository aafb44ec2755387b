/*
 * Copyright 2026 The Panolift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cli_scenarios.hpp"
#include "panolift/calibrate.hpp"
#include "panolift/canonicalize.hpp"
#include "panolift/codec.hpp"
#include "panolift/metrics.hpp"
#include "panolift/projection.hpp"
#include "panolift/trajectory.hpp"
#include "test_support.hpp"

using namespace panolift;
using namespace panolift::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& s) { notes += (notes.empty() ? "" : ", ") + s; }
  std::string notes;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double angle_deg(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0)) * 180.0 / kPi;
}

Outcome projection_round_trip() {
  Outcome o;
  const Image erp = render_scene(band_limited, 1024);
  const CameraParams cam{90, 0, 0, 0};
  const auto t0 = std::chrono::steady_clock::now();
  const Image pers = pano2pers(erp, cam, 512, 512);
  const ProjectedConditioning pc = pers2pano(pers, cam, 1024, 2048);
  const double secs = seconds_since(t0);
  const double err = masked_mean_abs_diff(pc.image, erp, pc.mask);
  o.note("in-mask mean abs " + fmt("%.2e", err));
  o.note("runtime " + fmt("%.2f s", secs));
  o.require(err < 0.01, "error too large");
  o.require(secs < 5.0, "too slow");
  return o;
}

Outcome exact_yaw_shifts() {
  Outcome o;
  const Image erp = render_scene(TexturedScene(2), 256);
  const int w = erp.width();
  const Image rotated = rotate_erp(erp, rotation_from_ypr({90, 360.0 / w, 0, 0}));
  o.require(rotated == roll_columns(erp, -1), "one-column yaw is not a column shift");
  for (long k : {3L, -7L, 100L}) {
    const Rotation3 r = rotation_from_ypr({90, normalize_angle_deg(360.0 * k / w), 0, 0});
    o.require(rotate_erp(erp, r) == roll_columns(erp, -k), "yaw multiple not a shift");
  }
  o.require(yaw_shift_augment(erp, w) == erp, "shift by W is not identity");
  o.require(yaw_shift_augment(erp, -2L * w) == erp, "shift by -2W is not identity");
  o.note("bit-exact");
  return o;
}

Outcome rotation_composition() {
  Outcome o;
  const Image erps[] = {render_scene(band_limited, 128),
                        render_scene(rotated_scene(band_limited, rotation_from_ypr({90, 40, 25, -10}).matrix()), 128)};
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> yaw(-180, 180), pitch(-90, 90), roll(-180, 180);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const Image& erp = erps[k % 2];
    const Rotation3 a = rotation_from_ypr({90, yaw(gen), pitch(gen), roll(gen)});
    const Rotation3 b = rotation_from_ypr({90, yaw(gen), pitch(gen), roll(gen)});
    const double d = mean_abs_diff(rotate_erp(rotate_erp(erp, a), b), rotate_erp(erp, a * b));
    worst = std::max(worst, d);
  }
  o.note("worst mean abs over 50 pairs " + fmt("%.2e", worst));
  o.require(worst < 0.02, "composition mismatch");
  return o;
}

Outcome calibration_recovery() {
  Outcome o;
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> fov(30, 120), pitch(-60, 60), roll(-15, 15);
  const SearchConfig cfg;
  std::vector<double> dfov, dpitch, droll;
  double calib_secs = 0.0;
  int argmin_mismatch = 0;
  for (int k = 0; k < 20; ++k) {
    const Image erp = render_scene(TexturedScene(500 + k, 6, 9.0), 256);
    const CameraParams truth{fov(gen), 0.0, pitch(gen), roll(gen)};
    const Image pers = pano2pers(erp, truth, 128, 128);
    const auto t0 = std::chrono::steady_clock::now();
    const CalibResult r = calibrate(pers, erp, cfg);
    calib_secs += seconds_since(t0);
    dfov.push_back(std::abs(r.best.fov_deg - truth.fov_deg));
    dpitch.push_back(std::abs(r.best.pitch_deg - truth.pitch_deg));
    droll.push_back(std::abs(r.best.roll_deg - truth.roll_deg));

    const Image target = box_resize(pers, 64, 64);
    double best = std::numeric_limits<double>::infinity();
    CameraParams arg;
    for (double f : coarse_values(cfg.fov))
      for (double p : coarse_values(cfg.pitch))
        for (double q : coarse_values(cfg.roll)) {
          const double s = plain_mse(target, pano2pers(erp, {f, 0, p, q}, 64, 64));
          if (s < best) {
            best = s;
            arg = {f, 0, p, q};
          }
        }
    if (!(r.coarse_best == arg) || r.coarse_score != best) ++argmin_mismatch;
  }
  const double mf = median(dfov), mp = median(dpitch), mr = median(droll);
  o.note("median |dfov| " + fmt("%.3f", mf) + ", |dpitch| " + fmt("%.3f", mp) + ", |droll| " +
         fmt("%.3f", mr));
  o.note("coarse argmin mismatches " + std::to_string(argmin_mismatch));
  o.note("calibration time " + fmt("%.1f s", calib_secs));
  o.require(mf <= 1.0 && mp <= 1.0 && mr <= 0.5, "median error too large");
  o.require(argmin_mismatch == 0, "coarse argmin differs from brute force");
  o.require(calib_secs < 60.0, "too slow");
  return o;
}

Outcome cle_equivariance() {
  Outcome o;
  double worst_eq = 0.0, worst_cle = 0.0, min_ratio = std::numeric_limits<double>::infinity();
  for (int v = 0; v < 5; ++v) {
    const Image img = smooth_erp(64, v);
    const LatentGrid full = encode(img, PaddingMode::kCircular);
    for (int wp : {8, 16, 32, img.width()})
      worst_eq = std::max(worst_eq, max_abs_diff(circular_encode(img, wp), full));
    const double e_cle = latent_equivariance_error(img, true);
    const double e_zero = latent_equivariance_error(img, false);
    worst_cle = std::max(worst_cle, e_cle);
    o.require(e_cle <= 1e-5, "CLE equivariance error above 1e-5");
    o.require(e_zero >= 10.0 * e_cle && e_zero > 0.0, "zero-mode error not 10x the CLE error");
    min_ratio = std::min(min_ratio, e_cle > 0 ? e_zero / e_cle : std::numeric_limits<double>::infinity());
  }
  o.require(worst_eq <= 1e-6, "circular_encode differs from circular encode");
  o.note("max |CLE - circular| " + fmt("%.2e", worst_eq));
  o.note("max E_cle " + fmt("%.2e", worst_cle));
  o.note(std::isinf(min_ratio) ? std::string("E_zero/E_cle inf") : "min E_zero/E_cle " + fmt("%.3g", min_ratio));
  return o;
}

Outcome seam_ordering() {
  Outcome o;
  double worst_gap = std::numeric_limits<double>::infinity();
  for (int v = 0; v < 5; ++v) {
    const Image img = smooth_erp(64, v);
    const double cle = discontinuity_score(circular_decode(circular_encode(img)));
    const double zero = discontinuity_score(decode(encode(img, PaddingMode::kZero), PaddingMode::kZero));
    o.require(cle < zero, "CLE round trip not below zero-padding round trip");
    worst_gap = std::min(worst_gap, zero - cle);
  }
  const double ds_cont = discontinuity_score(periodic_sinusoid(256, 1));
  Image step(16, 32, 3, 0.3f);
  for (int i = 0; i < 16; ++i)
    for (int j = 16; j < 32; ++j)
      for (int c = 0; c < 3; ++c) step.at(i, j, c) = 0.5f;
  Image wrap_step(16, 32, 3, 0.5f);
  for (int i = 0; i < 16; ++i)
    for (int c = 0; c < 3; ++c) wrap_step.at(i, 31, c) = 0.3f;
  const double ds_step = discontinuity_score(wrap_step);
  const double ds_halves = discontinuity_score(step);
  o.require(ds_cont < 0.5, "wrap-continuous DS not below 0.5");
  o.require(std::abs(ds_step - 20.0) <= 0.01, "injected step DS not 20");
  o.require(std::abs(ds_halves - 20.0) <= 0.01, "two-level DS not 20");
  o.note("min DS gap " + fmt("%.3f", worst_gap));
  o.note("continuous DS " + fmt("%.2e", ds_cont));
  o.note("step DS " + fmt("%.4f", ds_step));
  return o;
}

Outcome gravity_pipeline() {
  Outcome o;
  std::mt19937_64 gen(77);
  std::normal_distribution<double> n(0.0, 0.004);
  const Vec3 g0 = Vec3(0.06, -1.0, -0.03).normalized();
  std::vector<Vec3> estimates;
  Vec3 clean = Vec3::Zero();
  for (int k = 0; k < 95; ++k) {
    const Vec3 e = (g0 + Vec3(n(gen), n(gen), n(gen))).normalized();
    estimates.push_back(e);
    clean += e;
  }
  clean.normalize();
  double sigma = 0.0;
  for (const Vec3& e : estimates) sigma += std::pow(angle_deg(e, clean), 2);
  sigma = std::sqrt(sigma / 95.0);
  const Vec3 tilt(std::sin(35.0 * kPi / 180.0), 0, 0);
  for (int k = 0; k < 5; ++k) {
    const Vec3 bad = (Vec3(0, -1, 0) + (k % 2 ? tilt : Vec3(0, 0, 0.7))).normalized();
    o.require(angle_deg(bad, clean) > 3.0 * sigma, "outlier not beyond 3 sigma");
    estimates.insert(estimates.begin() + 20 * k, bad);
  }
  const double err = angle_deg(average_gravity(estimates), clean);
  o.note("recovered vs clean mean " + fmt("%.3f deg", err));
  o.require(err <= 0.5, "gravity estimate off");
  const Image frame = render_scene(TexturedScene(8), 64);
  o.require(gravity_align(frame, Vec3(0, -1, 0)) == frame, "down gravity not identity");
  return o;
}

Outcome mask_coverage() {
  Outcome o;
  const Grid m = frustum_mask({90, 0, 0, 0}, 512, 512, 512, 1024);
  const double oracle = monte_carlo_frustum_fraction(1.0, 1.0, 1'000'000, 99);
  const double rel = std::abs(sphere_coverage(m) - oracle) / oracle;
  o.note("coverage " + fmt("%.5f", sphere_coverage(m)) + " vs oracle " + fmt("%.5f", oracle));
  o.require(rel < 0.01, "coverage off by more than 1%");
  SimConfig sim;
  sim.frames = 24;
  sim.seed = 3;
  sim.max_rate = {4.0, 1.0, 0.5};
  const Trajectory traj = simulate_trajectory(sim);
  Grid prev(64, 128, 1);
  double prev_cov = 0.0;
  for (int t = 1; t <= sim.frames; ++t) {
    Trajectory head = traj;
    head.frames.resize(t);
    const Grid u = trajectory_mask(head, 48, 64, 64, 128);
    for (std::size_t k = 0; k < u.size(); ++k)
      if (prev.data()[k] > u.data()[k]) o.require(false, "union lost pixels at T=" + std::to_string(t));
    const double cov = sphere_coverage(u);
    o.require(cov >= prev_cov, "coverage decreased");
    prev = u;
    prev_cov = cov;
  }
  o.note("union coverage at T=24 " + fmt("%.4f", prev_cov));
  return o;
}

Outcome flow_identities() {
  Outcome o;
  std::mt19937_64 gen(91);
  std::normal_distribution<float> n(0.0f, 1.0f);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    Grid y(16, 32, 4), e(16, 32, 4);
    for (float& v : y.data()) v = n(gen);
    for (float& v : e.data()) v = n(gen);
    o.require(flow_interpolate(y, e, 0.0) == y, "t=0 endpoint");
    o.require(flow_interpolate(y, e, 1.0) == e, "t=1 endpoint");
    const Grid vel = velocity_target(y, e);
    for (double t : {0.05, 0.25, 0.5, 0.8, 0.999}) {
      const Grid yt = flow_interpolate(y, e, t);
      for (std::size_t i = 0; i < y.size(); ++i)
        worst = std::max(worst, std::abs(yt.data()[i] + (1.0 - t) * vel.data()[i] - e.data()[i]));
    }
  }
  o.note("identity residual " + fmt("%.2e", worst));
  o.require(worst <= 1e-6, "identity residual above 1e-6");
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path in = temp_dir("acc_inputs");
  write_cli_inputs(in);
  const fs::path a = temp_dir("acc_run_a"), b = temp_dir("acc_run_b");
  const auto ra = run_every_subcommand(in, a, "13");
  const auto rb = run_every_subcommand(in, b, "13");
  for (const auto& [name, run] : ra) {
    o.require(run.code == 0, name + " exited " + std::to_string(run.code));
    o.require(run.out == rb.at(name).out && run.err == rb.at(name).err, name + " stdout differs");
  }
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), a);
    const bool same = fs::exists(b / rel) && io::read_file(e.path()) == io::read_file(b / rel);
    o.require(same, rel.string() + " differs");
    ++files;
  }
  std::size_t files_b = 0;
  for (const auto& e : fs::recursive_directory_iterator(b)) files_b += e.is_regular_file();
  o.require(files == files_b, "different file sets");
  const std::uint64_t h = CodecWeights::standard().hash();
  o.require(h == kStandardWeightHash, "weight hash differs from the frozen value");
  o.require(h == ref_fnv(reference_layers(CodecWeights::kDefaultSeed)), "weight hash differs from recomputation");
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  o.note(std::to_string(ra.size()) + " subcommand runs, " + std::to_string(files) + " files identical");
  o.note(std::string("weight hash ") + hex);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"projection round trip", projection_round_trip},
      {"exact yaw shifts", exact_yaw_shifts},
      {"rotation composition", rotation_composition},
      {"calibration recovery", calibration_recovery},
      {"CLE equivalence and equivariance", cle_equivariance},
      {"seam ordering", seam_ordering},
      {"gravity pipeline", gravity_pipeline},
      {"mask coverage", mask_coverage},
      {"flow identities", flow_identities},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] %2d %s: %s%s%s\n", o.pass ? "PASS" : "FAIL", index, name, o.notes.c_str(),
                o.detail.empty() ? "" : " | ", o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
