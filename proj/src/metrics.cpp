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

#include "panolift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "panolift/codec.hpp"
#include "panolift/error.hpp"
#include "panolift/projection.hpp"

namespace panolift {

bool MetricReport::is_infinite() const { return std::isinf(value); }

double discontinuity_score(const Image& img) {
  const int h = img.height();
  const int w = img.width();
  const int c = img.channels();
  if (h < 1 || w < 2) throw InvalidArgument("discontinuity_score: width must be >= 2");
  std::vector<double> grad(static_cast<std::size_t>(w), 0.0);
  for (int j = 0; j < w; ++j) {
    const int next = (j + 1) % w;
    double sum = 0.0;
    for (int r = 0; r < h; ++r) {
      const float* a = img.pixel(r, j);
      const float* b = img.pixel(r, next);
      for (int ch = 0; ch < c; ++ch) sum += std::abs(static_cast<double>(b[ch]) - a[ch]);
    }
    grad[static_cast<std::size_t>(j)] = sum / (static_cast<double>(h) * c);
  }
  const double seam = grad.back();
  std::vector<double> interior(grad.begin(), grad.end() - 1);
  const std::size_t n = interior.size();
  const std::size_t mid = n / 2;
  std::nth_element(interior.begin(), interior.begin() + mid, interior.end());
  double median = interior[mid];
  if (n % 2 == 0) {
    const double lower = *std::max_element(interior.begin(), interior.begin() + mid);
    median = 0.5 * (lower + median);
  }
  return 100.0 * std::max(0.0, seam - median);
}

Grid trajectory_mask(const Trajectory& traj, int pers_h, int pers_w, int height, int width) {
  validate(traj);
  Grid mask(height, width, 1);
  for (const CameraParams& cam : traj.frames) {
    const Grid m = frustum_mask(cam, pers_h, pers_w, height, width);
    auto dst = mask.data();
    const auto src = m.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = std::max(dst[k], src[k]);
  }
  return mask;
}

MetricReport masked_psnr(const std::vector<Image>& gt, const std::vector<Image>& gen,
                         const Trajectory& traj, int pers_h, int pers_w) {
  if (gt.size() != gen.size() || gt.size() != traj.size() || gt.empty()) {
    throw InvalidArgument("masked_psnr: gt, gen and trajectory lengths must match and be non-zero");
  }
  for (std::size_t k = 0; k < gt.size(); ++k) {
    require_erp(gt[k], "ground-truth frame");
    if (!gt[k].same_shape(gen[k]) || !gt[k].same_shape(gt[0])) {
      throw InvalidArgument("masked_psnr: frame " + std::to_string(k) + " shape mismatch");
    }
  }
  const int h = gt[0].height();
  const int w = gt[0].width();
  const int c = gt[0].channels();
  const Grid mask = trajectory_mask(traj, pers_h, pers_w, h, w);

  std::size_t union_pixels = 0;
  for (float m : mask.data()) union_pixels += m > 0.5f ? 1 : 0;
  if (union_pixels == 0) throw EmptyMaskError("masked_psnr: union mask is empty");

  auto psnr = [](double mse) {
    return mse > 0.0 ? 10.0 * std::log10(1.0 / mse)
                     : std::numeric_limits<double>::infinity();
  };

  MetricReport report;
  report.name = "masked_psnr";
  report.coverage = sphere_coverage(mask);
  double total = 0.0;
  const double per_frame_count = static_cast<double>(union_pixels) * c;
  for (std::size_t k = 0; k < gt.size(); ++k) {
    double frame_sum = 0.0;
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < w; ++j) {
        if (mask.at(i, j) <= 0.5f) continue;
        const float* a = gt[k].pixel(i, j);
        const float* b = gen[k].pixel(i, j);
        for (int ch = 0; ch < c; ++ch) {
          const double d = static_cast<double>(a[ch]) - b[ch];
          frame_sum += d * d;
        }
      }
    }
    report.per_frame.push_back(psnr(frame_sum / per_frame_count));
    total += frame_sum;
  }
  report.value = psnr(total / (per_frame_count * static_cast<double>(gt.size())));
  return report;
}

double latent_equivariance_error(const Image& erp, bool use_cle) {
  if (erp.width() % 64 != 0 || erp.height() % kDownsample != 0) {
    throw InvalidArgument("latent_equivariance_error: width must be a multiple of 64 and "
                          "height a multiple of 8");
  }
  auto enc = [use_cle](const Image& img) {
    return use_cle ? circular_encode(img) : encode(img, PaddingMode::kZero);
  };
  const long s = erp.width() / kDownsample / 2;
  const LatentGrid shifted_then_encoded = enc(roll_columns(erp, kDownsample * s));
  const LatentGrid encoded_then_shifted = roll_columns(enc(erp), s);
  const auto a = shifted_then_encoded.data();
  const auto b = encoded_then_shifted.data();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::abs(static_cast<double>(a[k]) - b[k]);
  return sum / static_cast<double>(a.size());
}

}  // namespace panolift
