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

#include "panolift/projection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "panolift/error.hpp"

namespace panolift {
namespace {

constexpr double kLattice = 1048576.0;  // 2^20

double snap(double x) { return std::nearbyint(x * kLattice) / kLattice; }

int wrap(long j, int w) {
  const long r = j % w;
  return static_cast<int>(r < 0 ? r + w : r);
}

void blend(const float* p00, const float* p01, const float* p10,
           const float* p11, double fr, double fc, int channels, float* out) {
  const double wr0 = 1.0 - fr, wc0 = 1.0 - fc;
  for (int ch = 0; ch < channels; ++ch) {
    const double top = wc0 * p00[ch] + fc * p01[ch];
    const double bottom = wc0 * p10[ch] + fc * p11[ch];
    out[ch] = static_cast<float>(wr0 * top + fr * bottom);
  }
}

// Perspective pixel coordinate of camera-frame ray `c`, or false when the ray
// is behind the camera or outside [-0.5, size - 0.5] on either axis.
bool project_ray(const Vec3& c, double focal, int h, int w, double& v, double& u) {
  if (!(c.z() > 0.0)) return false;
  const double px = focal * (c.x() / c.z());
  const double py = -focal * (c.y() / c.z());
  const double half_w = w / 2.0;
  const double half_h = h / 2.0;
  if (px < -half_w || px > half_w || py < -half_h || py > half_h) return false;
  u = px + half_w - 0.5;
  v = py + half_h - 0.5;
  return true;
}

void require_dims(int h, int w, const char* what) {
  if (h < 2 || w < 2) {
    throw InvalidArgument(std::string(what) + ": output dimensions must be >= 2");
  }
}

void require_erp_dims(int height, int width) {
  if (height < 2 || width != 2 * height) {
    throw InvalidArgument("ERP dimensions must satisfy H >= 2 and W == 2H");
  }
}

}  // namespace

void sample_erp(const Image& erp, double row, double col, float* out) {
  const int h = erp.height();
  const int w = erp.width();
  row = snap(row);
  col = snap(col);
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  const double fr = row - r0f;
  const double fc = col - c0f;
  const long r0 = static_cast<long>(r0f);
  const long c0 = static_cast<long>(c0f);
  const int ra = static_cast<int>(std::clamp<long>(r0, 0, h - 1));
  const int rb = static_cast<int>(std::clamp<long>(r0 + 1, 0, h - 1));
  const int ca = wrap(c0, w);
  const int cb = wrap(c0 + 1, w);
  blend(erp.pixel(ra, ca), erp.pixel(ra, cb), erp.pixel(rb, ca), erp.pixel(rb, cb),
        fr, fc, erp.channels(), out);
}

void sample_clamped(const Image& img, double row, double col, float* out) {
  const int h = img.height();
  const int w = img.width();
  row = std::clamp(snap(row), 0.0, h - 1.0);
  col = std::clamp(snap(col), 0.0, w - 1.0);
  const double r0f = std::floor(row);
  const double c0f = std::floor(col);
  const int ra = static_cast<int>(r0f);
  const int ca = static_cast<int>(c0f);
  const int rb = std::min(ra + 1, h - 1);
  const int cb = std::min(ca + 1, w - 1);
  blend(img.pixel(ra, ca), img.pixel(ra, cb), img.pixel(rb, ca), img.pixel(rb, cb),
        row - r0f, col - c0f, img.channels(), out);
}

Image pano2pers(const Image& erp, const CameraParams& cam, int out_h, int out_w) {
  require_erp(erp);
  validate(cam);
  require_dims(out_h, out_w, "pano2pers");
  const Mat3 rot = rotation_from_ypr(cam).matrix();
  const double focal = focal_from_fov(cam.fov_deg, out_w);
  Image out(out_h, out_w, erp.channels());
  for (int v = 0; v < out_h; ++v) {
    for (int u = 0; u < out_w; ++u) {
      const Vec3 d = rot * pinhole_ray(v, u, out_h, out_w, focal);
      const ErpCoord p = detail::unit_dir_to_erp(d, erp.height(), erp.width());
      sample_erp(erp, p.row, p.col, out.pixel(v, u));
    }
  }
  return out;
}

ProjectedConditioning pers2pano(const Image& pers, const CameraParams& cam,
                                int height, int width) {
  require_image(pers, "perspective image");
  validate(cam);
  require_erp_dims(height, width);
  const Mat3 rot_t = rotation_from_ypr(cam).matrix().transpose();
  const double focal = focal_from_fov(cam.fov_deg, pers.width());
  ProjectedConditioning result{Image(height, width, pers.channels()),
                               Grid(height, width, 1)};
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const Vec3 c = rot_t * erp_dir(i, j, height, width);
      double v = 0.0, u = 0.0;
      if (!project_ray(c, focal, pers.height(), pers.width(), v, u)) continue;
      sample_clamped(pers, v, u, result.image.pixel(i, j));
      result.mask.at(i, j) = 1.0f;
    }
  }
  return result;
}

Grid frustum_mask(const CameraParams& cam, int pers_h, int pers_w, int height,
                  int width) {
  validate(cam);
  require_dims(pers_h, pers_w, "frustum_mask");
  require_erp_dims(height, width);
  const Mat3 rot_t = rotation_from_ypr(cam).matrix().transpose();
  const double focal = focal_from_fov(cam.fov_deg, pers_w);
  Grid mask(height, width, 1);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const Vec3 c = rot_t * erp_dir(i, j, height, width);
      double v = 0.0, u = 0.0;
      if (project_ray(c, focal, pers_h, pers_w, v, u)) mask.at(i, j) = 1.0f;
    }
  }
  return mask;
}

double sphere_coverage(const Grid& mask) {
  const int h = mask.height();
  const int w = mask.width();
  double covered = 0.0;
  double total = 0.0;
  for (int i = 0; i < h; ++i) {
    const double lat_top = std::numbers::pi / 2.0 - std::numbers::pi * i / h;
    const double lat_bottom = std::numbers::pi / 2.0 - std::numbers::pi * (i + 1) / h;
    const double band = std::sin(lat_top) - std::sin(lat_bottom);
    int count = 0;
    for (int j = 0; j < w; ++j) count += mask.at(i, j) > 0.5f ? 1 : 0;
    covered += band * count;
    total += band * w;
  }
  return total > 0.0 ? covered / total : 0.0;
}

Image rotate_erp(const Image& erp, const Rotation3& rot) {
  require_erp(erp);
  const Mat3& m = rot.matrix();
  const int h = erp.height();
  const int w = erp.width();
  Image out(h, w, erp.channels());
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) {
      const Vec3 d = m * erp_dir(i, j, h, w);
      const ErpCoord p = detail::unit_dir_to_erp(d, h, w);
      sample_erp(erp, p.row, p.col, out.pixel(i, j));
    }
  }
  return out;
}

std::string_view face_name(CubeFace face) {
  switch (face) {
    case CubeFace::kFront: return "front";
    case CubeFace::kRight: return "right";
    case CubeFace::kBack: return "back";
    case CubeFace::kLeft: return "left";
    case CubeFace::kUp: return "up";
    case CubeFace::kDown: return "down";
  }
  return "unknown";
}

CameraParams face_camera(CubeFace face) {
  switch (face) {
    case CubeFace::kFront: return {90.0, 0.0, 0.0, 0.0};
    case CubeFace::kRight: return {90.0, 90.0, 0.0, 0.0};
    case CubeFace::kBack: return {90.0, 180.0, 0.0, 0.0};
    case CubeFace::kLeft: return {90.0, -90.0, 0.0, 0.0};
    case CubeFace::kUp: return {90.0, 0.0, 90.0, 0.0};
    case CubeFace::kDown: return {90.0, 0.0, -90.0, 0.0};
  }
  return {};
}

CubeMap erp_to_cubemap(const Image& erp, int face_size) {
  require_erp(erp);
  if (face_size < 2) throw InvalidArgument("cube face size must be >= 2");
  CubeMap cube;
  for (CubeFace f : kCubeFaces) {
    cube.face(f) = pano2pers(erp, face_camera(f), face_size, face_size);
  }
  return cube;
}

Image cubemap_to_erp(const CubeMap& cube, int height, int width) {
  const int s = cube.faces[0].height();
  const int channels = cube.faces[0].channels();
  for (const Image& face : cube.faces) {
    if (face.height() != s || face.width() != s || face.channels() != channels) {
      throw InvalidArgument("cube faces must all be square with equal size and channels");
    }
  }
  if (s < 2) throw InvalidArgument("cube face size must be >= 2");
  require_erp_dims(height, width);

  std::array<Mat3, 6> to_face;
  for (CubeFace f : kCubeFaces) {
    to_face[static_cast<int>(f)] = rotation_from_ypr(face_camera(f)).matrix().transpose();
  }
  const double focal = s / 2.0;
  Image out(height, width, channels);
  for (int i = 0; i < height; ++i) {
    for (int j = 0; j < width; ++j) {
      const Vec3 d = erp_dir(i, j, height, width);
      const double ax = std::abs(d.x()), ay = std::abs(d.y()), az = std::abs(d.z());
      CubeFace f;
      if (az >= ax && az >= ay) {
        f = d.z() > 0.0 ? CubeFace::kFront : CubeFace::kBack;
      } else if (ax >= ay) {
        f = d.x() > 0.0 ? CubeFace::kRight : CubeFace::kLeft;
      } else {
        f = d.y() > 0.0 ? CubeFace::kUp : CubeFace::kDown;
      }
      const Vec3 c = to_face[static_cast<int>(f)] * d;
      const double u = focal * (c.x() / c.z()) + focal - 0.5;
      const double v = -focal * (c.y() / c.z()) + focal - 0.5;
      sample_clamped(cube.face(f), v, u, out.pixel(i, j));
    }
  }
  return out;
}

}  // namespace panolift
