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

#include <array>
#include <string_view>

#include "panolift/grid.hpp"
#include "panolift/sphere.hpp"

namespace panolift {

/// Bilinear ERP lookup at a continuous coordinate: columns wrap, rows clamp.
/// Coordinates are snapped to a 2^-20 pixel lattice first so that lookups
/// landing on pixel centers (up to round-off) return the stored value exactly.
void sample_erp(const Image& erp, double row, double col, float* out);

/// Bilinear lookup with both axes clamped.
void sample_clamped(const Image& img, double row, double col, float* out);

/// Perspective content splatted into ERP layout with its coverage mask.
struct ProjectedConditioning {
  Image image;  // zero outside the mask
  Grid mask;    // H x W x 1, exactly 0 or 1
};

/// Renders a pinhole view of `erp` with camera `cam`.
Image pano2pers(const Image& erp, const CameraParams& cam, int out_h, int out_w);

/// Projects a perspective image into an H x W ERP canvas.
ProjectedConditioning pers2pano(const Image& pers, const CameraParams& cam,
                                int height, int width);

/// Coverage mask of a perspective frustum on an H x W ERP grid, identical to
/// the mask produced by pers2pano.
Grid frustum_mask(const CameraParams& cam, int pers_h, int pers_w, int height,
                  int width);

/// Solid-angle fraction covered by a binary ERP mask (rows weighted by their
/// exact spherical area).
double sphere_coverage(const Grid& mask);

/// out(d) = erp(R d) for every output direction d.
Image rotate_erp(const Image& erp, const Rotation3& rot);

enum class CubeFace { kFront = 0, kRight, kBack, kLeft, kUp, kDown };

inline constexpr std::array<CubeFace, 6> kCubeFaces = {
    CubeFace::kFront, CubeFace::kRight, CubeFace::kBack,
    CubeFace::kLeft,  CubeFace::kUp,    CubeFace::kDown};

std::string_view face_name(CubeFace face);

/// 90 degree camera looking through the given face. Front +Z, right +X,
/// back -Z, left -X, up +Y (image top toward -Z), down -Y (image top toward +Z).
CameraParams face_camera(CubeFace face);

struct CubeMap {
  std::array<Image, 6> faces;

  Image& face(CubeFace f) { return faces[static_cast<int>(f)]; }
  const Image& face(CubeFace f) const { return faces[static_cast<int>(f)]; }
  int face_size() const { return faces[0].height(); }
};

CubeMap erp_to_cubemap(const Image& erp, int face_size);

Image cubemap_to_erp(const CubeMap& cube, int height, int width);

}  // namespace panolift
