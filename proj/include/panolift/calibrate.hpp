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
#include <vector>

#include "panolift/grid.hpp"
#include "panolift/sphere.hpp"

namespace panolift {

/// One searched parameter: coarse values lo, lo + coarse_step, ..., <= hi;
/// the fine stage spans +-coarse_step around the coarse optimum in
/// fine_step increments, clipped to [lo, hi].
struct SearchAxis {
  double lo = 0.0;
  double hi = 0.0;
  double coarse_step = 1.0;
  double fine_step = 1.0;
};

struct SearchConfig {
  SearchAxis fov{30.0, 120.0, 5.0, 0.5};
  SearchAxis pitch{-60.0, 60.0, 5.0, 0.5};
  SearchAxis roll{-15.0, 15.0, 2.5, 0.25};
  // Only used when search_yaw is set; otherwise yaw is fixed to 0.
  SearchAxis yaw{-170.0, 180.0, 10.0, 1.0};
  bool search_yaw = false;
  // Width of the scoring render; height follows the perspective aspect ratio.
  int render_res = 64;
};

void validate(const SearchConfig& cfg);

struct CalibResult {
  CameraParams best;
  double residual = 0.0;        // full-resolution MSE at `best`
  double score = 0.0;           // scoring-resolution MSE at `best`
  std::uint64_t evaluations = 0;  // coarse + fine grid points scored
  CameraParams coarse_best;
  double coarse_score = 0.0;
};

/// Values of one axis on the coarse grid.
std::vector<double> coarse_values(const SearchAxis& axis);

/// Values of one axis on the fine grid centered at `center`.
std::vector<double> fine_values(const SearchAxis& axis, double center);

/// Area-weighted box downsampling (or identity when sizes match).
Image box_resize(const Image& img, int out_h, int out_w);

/// Scoring render height for a perspective image scored at width `res`.
int render_height(const Image& pers, int res);

/// Mean squared difference over all pixels and channels.
double mean_squared_error(const Image& a, const Image& b);

/// MSE between `pers` box-downsampled to the scoring size (width `res`) and
/// pano2pers(erp, cam) rendered at that size.
double render_residual(const Image& pers, const Image& erp, const CameraParams& cam, int res);

/// Two-stage exhaustive search for the camera that best explains `pers` as a
/// crop of `erp`. Ties resolve toward the smallest (fov, pitch, roll, yaw).
CalibResult calibrate(const Image& pers, const Image& erp, const SearchConfig& cfg = {});

}  // namespace panolift
