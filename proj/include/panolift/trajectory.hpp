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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "panolift/grid.hpp"
#include "panolift/sphere.hpp"

namespace panolift {

enum class TrajectorySource { kSimulated, kReal };

struct Trajectory {
  std::vector<CameraParams> frames;
  TrajectorySource source = TrajectorySource::kReal;

  std::size_t size() const { return frames.size(); }
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Maximum per-axis angular velocity in degrees per frame.
struct AngularRates {
  double yaw = 0.5;
  double pitch = 0.25;
  double roll = 0.1;
};

/// Linear-motion-plus-noise simulation settings.
struct SimConfig {
  int frames = 1;
  AugmentationRanges ranges;
  AngularRates max_rate;
  double noise_std_deg = 0.05;
  std::uint64_t seed = 0;
};

/// Simulates one trajectory.
///
/// Draw order on SplitMix64(seed): frame 0 via sample_camera (fov, yaw,
/// pitch, roll), then velocities for yaw, pitch, roll, each uniform in
/// [-max, max], then for every frame k >= 1 one gaussian per axis in the order
/// yaw, pitch, roll. Frame k = frame 0 + k * velocity + noise_std * gaussian;
/// pitch and roll are clamped to their ranges, yaw is wrapped into
/// (-180, 180], fov stays constant.
Trajectory simulate_trajectory(const SimConfig& cfg);

/// Throws InvalidArgument if empty or any frame violates CameraParams.
void validate(const Trajectory& traj);

/// frame k = pano2pers(erp_frames[k], traj.frames[k], h, w).
std::vector<Image> crop_video(const std::vector<Image>& erp_frames, const Trajectory& traj,
                              int h, int w);

}  // namespace panolift
