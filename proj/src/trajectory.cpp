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

#include "panolift/trajectory.hpp"

#include <algorithm>
#include <string>

#include "panolift/error.hpp"
#include "panolift/projection.hpp"

namespace panolift {

Trajectory simulate_trajectory(const SimConfig& cfg) {
  if (cfg.frames < 1) throw InvalidArgument("simulate_trajectory: frames must be >= 1");
  if (cfg.max_rate.yaw < 0.0 || cfg.max_rate.pitch < 0.0 || cfg.max_rate.roll < 0.0 ||
      cfg.noise_std_deg < 0.0) {
    throw InvalidArgument("simulate_trajectory: rates and noise must be non-negative");
  }
  SplitMix64 rng(cfg.seed);
  const CameraParams start = sample_camera(rng, cfg.ranges);
  const double v_yaw = rng.uniform(-cfg.max_rate.yaw, cfg.max_rate.yaw);
  const double v_pitch = rng.uniform(-cfg.max_rate.pitch, cfg.max_rate.pitch);
  const double v_roll = rng.uniform(-cfg.max_rate.roll, cfg.max_rate.roll);

  Trajectory traj;
  traj.source = TrajectorySource::kSimulated;
  traj.frames.reserve(static_cast<std::size_t>(cfg.frames));
  traj.frames.push_back(start);
  for (int k = 1; k < cfg.frames; ++k) {
    const double n_yaw = rng.gaussian();
    const double n_pitch = rng.gaussian();
    const double n_roll = rng.gaussian();
    CameraParams cam;
    cam.fov_deg = start.fov_deg;
    cam.yaw_deg = normalize_angle_deg(start.yaw_deg + k * v_yaw + cfg.noise_std_deg * n_yaw);
    cam.pitch_deg = std::clamp(start.pitch_deg + k * v_pitch + cfg.noise_std_deg * n_pitch,
                               cfg.ranges.pitch.lo, cfg.ranges.pitch.hi);
    cam.roll_deg = std::clamp(start.roll_deg + k * v_roll + cfg.noise_std_deg * n_roll,
                              cfg.ranges.roll.lo, cfg.ranges.roll.hi);
    traj.frames.push_back(cam);
  }
  return traj;
}

void validate(const Trajectory& traj) {
  if (traj.frames.empty()) throw InvalidArgument("trajectory has no frames");
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    try {
      validate(traj.frames[k]);
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("trajectory frame " + std::to_string(k) + ": " + e.what());
    }
  }
}

std::vector<Image> crop_video(const std::vector<Image>& erp_frames, const Trajectory& traj,
                              int h, int w) {
  if (erp_frames.size() != traj.size()) {
    throw InvalidArgument("crop_video: " + std::to_string(erp_frames.size()) +
                          " frames but trajectory has " + std::to_string(traj.size()));
  }
  std::vector<Image> out;
  out.reserve(erp_frames.size());
  for (std::size_t k = 0; k < erp_frames.size(); ++k) {
    out.push_back(pano2pers(erp_frames[k], traj.frames[k], h, w));
  }
  return out;
}

}  // namespace panolift
