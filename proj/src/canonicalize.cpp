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

#include "panolift/canonicalize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "panolift/error.hpp"
#include "panolift/projection.hpp"

namespace panolift {

std::vector<Image> stabilize(const std::vector<Image>& frames, const PoseList& poses) {
  if (frames.size() != poses.size()) {
    throw InvalidArgument("stabilize: " + std::to_string(frames.size()) + " frames but " +
                          std::to_string(poses.size()) + " poses");
  }
  std::vector<Image> out;
  out.reserve(frames.size());
  for (std::size_t k = 0; k < frames.size(); ++k) {
    if (k == 0) {
      require_erp(frames[0], "frame 0");
      out.push_back(frames[0]);
      continue;
    }
    out.push_back(rotate_erp(frames[k], poses[k].inverse() * poses[0]));
  }
  return out;
}

Vec3 average_gravity(const std::vector<Vec3>& estimates) {
  if (estimates.empty()) {
    throw InvalidArgument("average_gravity: at least one estimate is required");
  }
  Vec3 sum = Vec3::Zero();
  for (const Vec3& g : estimates) sum += g.normalized();
  if (!(sum.norm() > 1e-12)) {
    throw InvalidArgument("average_gravity: estimates cancel out");
  }
  const Vec3 m0 = sum.normalized();

  std::vector<double> angles;
  angles.reserve(estimates.size());
  for (const Vec3& g : estimates) {
    angles.push_back(std::acos(std::clamp(g.normalized().dot(m0), -1.0, 1.0)));
  }
  double mean = 0.0;
  for (double a : angles) mean += a;
  mean /= static_cast<double>(angles.size());
  double var = 0.0;
  for (double a : angles) var += (a - mean) * (a - mean);
  var /= static_cast<double>(angles.size());
  const double limit = mean + 3.0 * std::sqrt(var);

  Vec3 kept = Vec3::Zero();
  std::size_t survivors = 0;
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    if (angles[k] <= limit) {
      kept += estimates[k].normalized();
      ++survivors;
    }
  }
  if (survivors == 0 || !(kept.norm() > 1e-12)) return m0;
  return kept.normalized();
}

Rotation3 gravity_alignment(const Vec3& gravity) {
  return minimal_rotation_between(gravity, Vec3(0.0, -1.0, 0.0));
}

Image gravity_align(const Image& frame, const Vec3& gravity) {
  // Sampling with Q^T places the content that sat along `gravity` at -Y.
  return rotate_erp(frame, gravity_alignment(gravity).inverse());
}

std::vector<Image> gravity_align(const std::vector<Image>& frames, const Vec3& gravity) {
  const Rotation3 sample_rot = gravity_alignment(gravity).inverse();
  std::vector<Image> out;
  out.reserve(frames.size());
  for (const Image& f : frames) out.push_back(rotate_erp(f, sample_rot));
  return out;
}

Image yaw_shift_augment(const Image& erp, long k) {
  require_erp(erp);
  return roll_columns(erp, k);
}

}  // namespace panolift
