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

#include <vector>

#include "panolift/grid.hpp"
#include "panolift/sphere.hpp"

namespace panolift {

/// Per-frame camera-to-world rotations of a panorama video.
using PoseList = std::vector<Rotation3>;

/// Rotates every frame into frame 0's orientation. Frame k is resampled once
/// with R_k^-1 * R_0; frame 0 is returned unchanged.
std::vector<Image> stabilize(const std::vector<Image>& frames, const PoseList& poses);

/// Robust mean of unit gravity estimates.
///
/// Normalizes the mean m0, measures each estimate's angle to m0, drops those
/// beyond mean + 3 std of the angles (one pass) and returns the normalized
/// mean of the survivors. Falls back to m0 when nothing survives.
Vec3 average_gravity(const std::vector<Vec3>& estimates);

/// Rotation applied to ERP content so that it looks straight down along
/// (0, -1, 0) where it used to look along `gravity`.
Rotation3 gravity_alignment(const Vec3& gravity);

/// Rotates every frame so `gravity` becomes (0, -1, 0).
std::vector<Image> gravity_align(const std::vector<Image>& frames, const Vec3& gravity);
Image gravity_align(const Image& frame, const Vec3& gravity);

/// Exact circular shift of columns by k (column j moves to j + k mod W).
Image yaw_shift_augment(const Image& erp, long k);

}  // namespace panolift
