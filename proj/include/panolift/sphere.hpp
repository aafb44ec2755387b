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

#include <Eigen/Core>

#include "panolift/rng.hpp"

// Coordinate conventions used throughout the library:
//
//   World frame: +X right, +Y up (against gravity), +Z forward. Longitude 0
//   and latitude 0 point along +Z.
//
//   ERP pixel (row i, col j), pixel centers at integer coordinates:
//     lon = 2 pi (j + 0.5) / W - pi
//     lat = pi / 2 - pi (i + 0.5) / H
//     d   = (cos(lat) sin(lon), sin(lat), cos(lat) cos(lon))
//
//   Camera-to-world rotation R = Ry(yaw) * Rx(pitch) * Rz(roll). Positive yaw
//   turns toward +X, positive pitch looks up, positive roll rotates the image
//   content counter-clockwise.
//
//   Pinhole cameras use a horizontal field of view, f = (w / 2) / tan(fov / 2),
//   and the ray through pixel (v, u) is normalize(u + 0.5 - w/2, -(v + 0.5 - h/2), f).

namespace panolift {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Horizontal field of view and orientation, all in degrees.
struct CameraParams {
  double fov_deg = 90.0;
  double yaw_deg = 0.0;
  double pitch_deg = 0.0;
  double roll_deg = 0.0;

  friend bool operator==(const CameraParams&, const CameraParams&) = default;
};

// Throws InvalidArgument unless 0 < fov < 180, pitch in [-90, 90],
// yaw and roll in (-180, 180].
void validate(const CameraParams& cam);
bool is_valid(const CameraParams& cam);

/// Closed interval [lo, hi] in degrees.
struct DegRange {
  double lo = 0.0;
  double hi = 0.0;
};

/// Per-field sampling ranges for camera augmentation.
struct AugmentationRanges {
  DegRange fov{30.0, 120.0};
  DegRange pitch{-60.0, 60.0};
  DegRange roll{-15.0, 15.0};
  DegRange yaw{-180.0, 180.0};
};

void validate(const AugmentationRanges& ranges);

/// Proper rotation (orthonormal, det +1).
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}

  // Throws InvalidArgument when `m` deviates from SO(3) by more than `tol`
  // per entry of m^T m - I or in det(m) - 1.
  static Rotation3 from_matrix(const Mat3& m, double tol = 1e-6);
  static Rotation3 identity() { return Rotation3(); }

  const Mat3& matrix() const { return m_; }
  Rotation3 inverse() const { return Rotation3(m_.transpose()); }

  Vec3 operator*(const Vec3& v) const { return m_ * v; }
  Rotation3 operator*(const Rotation3& o) const { return Rotation3(m_ * o.m_); }

 private:
  explicit Rotation3(const Mat3& m) : m_(m) {}
  friend Rotation3 rotation_from_ypr(const CameraParams&);
  friend Rotation3 minimal_rotation_between(const Vec3&, const Vec3&);

  Mat3 m_;
};

bool is_rotation(const Mat3& m, double tol = 1e-6);

// Sine and cosine of an angle in degrees; exact at multiples of 90.
double sin_deg(double deg);
double cos_deg(double deg);

/// Wraps an angle into (-180, 180].
double normalize_angle_deg(double deg);

/// Continuous ERP coordinate; pixel centers sit at integer (row, col).
struct ErpCoord {
  double row = 0.0;
  double col = 0.0;
};

/// Unit direction of continuous ERP coordinate (row, col); col wraps mod W.
Vec3 erp_dir(double row, double col, int height, int width);

/// Inverse of erp_dir. Returns col in [-0.5, W - 0.5). `d` is normalized
/// first; a zero vector throws InvalidArgument.
ErpCoord dir_to_erp(const Vec3& d, int height, int width);

Rotation3 rotation_from_ypr(const CameraParams& cam);

/// Smallest-angle rotation taking unit `a` onto unit `b`. Antiparallel inputs
/// rotate by pi about normalize(+Z x a), or about +X when that is degenerate.
Rotation3 minimal_rotation_between(const Vec3& a, const Vec3& b);

/// Focal length in pixels for a horizontal field of view over `width` pixels.
double focal_from_fov(double fov_deg, int width);

/// Camera-frame unit ray through perspective pixel (v, u).
Vec3 pinhole_ray(double v, double u, int height, int width, double focal);

/// Draws fov, yaw, pitch, roll (in that order) uniformly from `ranges`.
/// Yaw is normalized into (-180, 180].
CameraParams sample_camera(SplitMix64& rng, const AugmentationRanges& ranges);

namespace detail {
// Unchecked variants for inner loops. `d` must be unit length.
ErpCoord unit_dir_to_erp(const Vec3& d, int height, int width);
}  // namespace detail

}  // namespace panolift
