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

#include "panolift/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Geometry>

#include "panolift/error.hpp"

namespace panolift {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;

void check_range(const DegRange& r, const char* name) {
  if (!(r.lo <= r.hi)) {
    throw InvalidArgument(std::string("augmentation range '") + name +
                          "' must satisfy lo <= hi");
  }
}

}  // namespace

bool is_valid(const CameraParams& cam) {
  return cam.fov_deg > 0.0 && cam.fov_deg < 180.0 && cam.pitch_deg >= -90.0 &&
         cam.pitch_deg <= 90.0 && cam.yaw_deg > -180.0 && cam.yaw_deg <= 180.0 &&
         cam.roll_deg > -180.0 && cam.roll_deg <= 180.0;
}

void validate(const CameraParams& cam) {
  if (!(cam.fov_deg > 0.0 && cam.fov_deg < 180.0)) {
    throw InvalidArgument("camera fov must be in (0, 180) degrees, got " +
                          std::to_string(cam.fov_deg));
  }
  if (!(cam.pitch_deg >= -90.0 && cam.pitch_deg <= 90.0)) {
    throw InvalidArgument("camera pitch must be in [-90, 90] degrees, got " +
                          std::to_string(cam.pitch_deg));
  }
  if (!(cam.yaw_deg > -180.0 && cam.yaw_deg <= 180.0)) {
    throw InvalidArgument("camera yaw must be in (-180, 180] degrees, got " +
                          std::to_string(cam.yaw_deg));
  }
  if (!(cam.roll_deg > -180.0 && cam.roll_deg <= 180.0)) {
    throw InvalidArgument("camera roll must be in (-180, 180] degrees, got " +
                          std::to_string(cam.roll_deg));
  }
}

void validate(const AugmentationRanges& ranges) {
  check_range(ranges.fov, "fov");
  check_range(ranges.pitch, "pitch");
  check_range(ranges.roll, "roll");
  check_range(ranges.yaw, "yaw");
}

bool is_rotation(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  const Mat3 err = m.transpose() * m - Mat3::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

Rotation3 Rotation3::from_matrix(const Mat3& m, double tol) {
  if (!is_rotation(m, tol)) {
    throw InvalidArgument("matrix is not a proper rotation");
  }
  return Rotation3(m);
}

double sin_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 0.0 || r == 180.0) return 0.0;
  if (r == 90.0) return 1.0;
  if (r == 270.0) return -1.0;
  return std::sin(r * kDegToRad);
}

double cos_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r == 90.0 || r == 270.0) return 0.0;
  if (r == 0.0) return 1.0;
  if (r == 180.0) return -1.0;
  return std::cos(r * kDegToRad);
}

double normalize_angle_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) r += 360.0;
  if (r > 180.0) r -= 360.0;
  return r;
}

Vec3 erp_dir(double row, double col, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw InvalidArgument("erp_dir: dimensions must be positive");
  }
  const double lon = 2.0 * kPi * (col + 0.5) / width - kPi;
  const double lat = kPi / 2.0 - kPi * (row + 0.5) / height;
  const double cl = std::cos(lat);
  return {cl * std::sin(lon), std::sin(lat), cl * std::cos(lon)};
}

namespace detail {

ErpCoord unit_dir_to_erp(const Vec3& d, int height, int width) {
  const double lon = std::atan2(d.x(), d.z());
  const double lat = std::asin(std::clamp(d.y(), -1.0, 1.0));
  double col = (lon + kPi) * width / (2.0 * kPi) - 0.5;
  if (col >= width - 0.5) col -= width;
  const double row = (kPi / 2.0 - lat) * height / kPi - 0.5;
  return {row, col};
}

}  // namespace detail

ErpCoord dir_to_erp(const Vec3& d, int height, int width) {
  if (height <= 0 || width <= 0) {
    throw InvalidArgument("dir_to_erp: dimensions must be positive");
  }
  const double n = d.norm();
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw InvalidArgument("dir_to_erp: direction must be a non-zero finite vector");
  }
  return detail::unit_dir_to_erp(d / n, height, width);
}

Rotation3 rotation_from_ypr(const CameraParams& cam) {
  const double cy = cos_deg(cam.yaw_deg), sy = sin_deg(cam.yaw_deg);
  const double cp = cos_deg(cam.pitch_deg), sp = sin_deg(cam.pitch_deg);
  const double cr = cos_deg(cam.roll_deg), sr = sin_deg(cam.roll_deg);
  Mat3 ry, rx, rz;
  // Ry maps forward (0,0,1) to (sin yaw, 0, cos yaw).
  ry << cy, 0, sy,
        0, 1, 0,
        -sy, 0, cy;
  // Rx maps forward to (0, sin pitch, cos pitch): positive pitch looks up.
  rx << 1, 0, 0,
        0, cp, sp,
        0, -sp, cp;
  // Rz tilts the camera's right axis downward, so content turns counter-clockwise.
  rz << cr, sr, 0,
        -sr, cr, 0,
        0, 0, 1;
  return Rotation3(ry * rx * rz);
}

Rotation3 minimal_rotation_between(const Vec3& a_in, const Vec3& b_in) {
  const Vec3 a = a_in.normalized();
  const Vec3 b = b_in.normalized();
  const Vec3 cross = a.cross(b);
  const double s = cross.norm();
  const double c = std::clamp(a.dot(b), -1.0, 1.0);
  if (s < 1e-12) {
    if (c > 0.0) return Rotation3();
    Vec3 axis = Vec3::UnitZ().cross(a);
    if (axis.norm() < 1e-9) {
      axis = Vec3::UnitX();
    } else {
      axis.normalize();
    }
    return Rotation3(Eigen::AngleAxisd(kPi, axis).toRotationMatrix());
  }
  const double angle = std::atan2(s, c);
  return Rotation3(Eigen::AngleAxisd(angle, cross / s).toRotationMatrix());
}

double focal_from_fov(double fov_deg, int width) {
  return (width / 2.0) / std::tan(fov_deg * kDegToRad / 2.0);
}

Vec3 pinhole_ray(double v, double u, int height, int width, double focal) {
  return Vec3(u + 0.5 - width / 2.0, -(v + 0.5 - height / 2.0), focal).normalized();
}

CameraParams sample_camera(SplitMix64& rng, const AugmentationRanges& ranges) {
  validate(ranges);
  CameraParams cam;
  cam.fov_deg = rng.uniform(ranges.fov.lo, ranges.fov.hi);
  cam.yaw_deg = normalize_angle_deg(rng.uniform(ranges.yaw.lo, ranges.yaw.hi));
  cam.pitch_deg = rng.uniform(ranges.pitch.lo, ranges.pitch.hi);
  cam.roll_deg = rng.uniform(ranges.roll.lo, ranges.roll.hi);
  return cam;
}

}  // namespace panolift
