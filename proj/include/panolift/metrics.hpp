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

#include <string>
#include <vector>

#include "panolift/grid.hpp"
#include "panolift/trajectory.hpp"

namespace panolift {

struct MetricReport {
  std::string name;
  double value = 0.0;  // +infinity when the metric is unbounded (e.g. zero MSE)
  double coverage = 0.0;
  std::vector<double> per_frame;

  bool is_infinite() const;
};

/// Seam score of an image treated as horizontally periodic.
///
/// g(j) is the mean over rows and channels of |Y[:, j+1 mod W] - Y[:, j]|.
/// DS = 100 * max(0, g(W-1) - median{g(0..W-2)}). Any width >= 2 is accepted.
double discontinuity_score(const Image& img);

/// PSNR (peak 1.0) between ground-truth and generated ERP videos over the
/// union of the trajectory's frustum masks. MSE averages every union pixel of
/// every frame and channel. `coverage` is the solid-angle fraction of the
/// union; `per_frame` holds each frame's PSNR over the same union.
/// Throws EmptyMaskError when the union is empty.
MetricReport masked_psnr(const std::vector<Image>& gt, const std::vector<Image>& gen,
                         const Trajectory& traj, int pers_h, int pers_w);

/// Union of the trajectory's frustum masks on an H x W ERP grid.
Grid trajectory_mask(const Trajectory& traj, int pers_h, int pers_w, int height, int width);

/// Mean abs of ENC(shift(erp, 8 s)) - shift(ENC(erp), s) with s = W / 16,
/// i.e. a half-turn. ENC is zero-padded encoding, or Circular Latent Encoding
/// with the default w' = W / 8 when `use_cle` is set. W must be a multiple of 64.
double latent_equivariance_error(const Image& erp, bool use_cle);

}  // namespace panolift
