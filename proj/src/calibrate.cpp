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

#include "panolift/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "panolift/error.hpp"
#include "panolift/projection.hpp"

namespace panolift {
namespace {

constexpr double kGridEps = 1e-9;

void validate_axis(const SearchAxis& a, const char* name) {
  if (!(a.coarse_step > 0.0) || !(a.fine_step > 0.0) || !(a.fine_step <= a.coarse_step)) {
    throw InvalidArgument(std::string("search axis '") + name +
                          "': steps must be positive with fine_step <= coarse_step");
  }
  if (!(a.lo <= a.hi)) {
    throw InvalidArgument(std::string("search axis '") + name + "': empty range");
  }
}

// Box filter weights mapping `in` samples onto `out` cells of equal width.
struct AxisWeights {
  std::vector<int> begin;
  std::vector<std::vector<double>> weights;
};

AxisWeights box_weights(int in, int out) {
  AxisWeights aw;
  aw.begin.resize(out);
  aw.weights.resize(out);
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    const double lo = o * scale;
    const double hi = (o + 1) * scale;
    const int first = static_cast<int>(std::floor(lo));
    const int last = std::min(in - 1, static_cast<int>(std::ceil(hi)) - 1);
    aw.begin[o] = first;
    for (int k = first; k <= last; ++k) {
      const double overlap = std::min(hi, k + 1.0) - std::max(lo, static_cast<double>(k));
      aw.weights[o].push_back(overlap / scale);
    }
  }
  return aw;
}

// Renders exactly what pano2pers produces and accumulates the squared error
// against `target` in the same order as mean_squared_error.
class ResidualScorer {
 public:
  ResidualScorer(const Image& erp, const Image& target) : erp_(erp), target_(target) {}

  void set_fov(double fov_deg) {
    const int h = target_.height();
    const int w = target_.width();
    const double focal = focal_from_fov(fov_deg, w);
    rays_.resize(static_cast<std::size_t>(h) * w);
    for (int v = 0; v < h; ++v)
      for (int u = 0; u < w; ++u)
        rays_[static_cast<std::size_t>(v) * w + u] = pinhole_ray(v, u, h, w, focal);
  }

  // Returns +inf as soon as the running mean already exceeds `bound`; the
  // full score could then never beat it.
  double score(const CameraParams& cam, double bound) {
    const Mat3 rot = rotation_from_ypr(cam).matrix();
    const int c = target_.channels();
    const int h = target_.height();
    const int w = target_.width();
    const double n = static_cast<double>(target_.size());
    float sample[3];
    double sum = 0.0;
    for (int v = 0; v < h; ++v) {
      if ((v & 3) == 0 && v > 0 && sum / n > bound) {
        return std::numeric_limits<double>::infinity();
      }
      for (int u = 0; u < w; ++u) {
        const Vec3 d = rot * rays_[static_cast<std::size_t>(v) * w + u];
        const ErpCoord p = detail::unit_dir_to_erp(d, erp_.height(), erp_.width());
        sample_erp(erp_, p.row, p.col, sample);
        const float* t = target_.pixel(v, u);
        for (int ch = 0; ch < c; ++ch) {
          const double diff = static_cast<double>(t[ch]) - sample[ch];
          sum += diff * diff;
        }
      }
    }
    return sum / n;
  }

 private:
  const Image& erp_;
  const Image& target_;
  std::vector<Vec3> rays_;
};

struct Best {
  CameraParams cam;
  double score = std::numeric_limits<double>::infinity();
  bool found = false;
};

}  // namespace

void validate(const SearchConfig& cfg) {
  validate_axis(cfg.fov, "fov");
  validate_axis(cfg.pitch, "pitch");
  validate_axis(cfg.roll, "roll");
  if (cfg.search_yaw) validate_axis(cfg.yaw, "yaw");
  if (cfg.render_res < 2) throw InvalidArgument("render_res must be >= 2");
}

std::vector<double> coarse_values(const SearchAxis& axis) {
  std::vector<double> values;
  const double span = (axis.hi - axis.lo) / axis.coarse_step;
  const long n = static_cast<long>(std::floor(span + kGridEps)) + 1;
  for (long k = 0; k < n; ++k) values.push_back(axis.lo + k * axis.coarse_step);
  return values;
}

std::vector<double> fine_values(const SearchAxis& axis, double center) {
  std::vector<double> values;
  const long m = std::lround(axis.coarse_step / axis.fine_step);
  for (long k = -m; k <= m; ++k) {
    const double v = center + k * axis.fine_step;
    if (v < axis.lo - kGridEps || v > axis.hi + kGridEps) continue;
    values.push_back(v);
  }
  return values;
}

Image box_resize(const Image& img, int out_h, int out_w) {
  if (out_h < 1 || out_w < 1) throw InvalidArgument("box_resize: invalid output size");
  if (out_h == img.height() && out_w == img.width()) return img;
  if (out_h > img.height() || out_w > img.width()) {
    throw InvalidArgument("box_resize: only downsampling is supported");
  }
  const AxisWeights wy = box_weights(img.height(), out_h);
  const AxisWeights wx = box_weights(img.width(), out_w);
  const int c = img.channels();
  Image out(out_h, out_w, c);
  std::vector<double> acc(c);
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (std::size_t a = 0; a < wy.weights[y].size(); ++a) {
        const int sy = wy.begin[y] + static_cast<int>(a);
        for (std::size_t b = 0; b < wx.weights[x].size(); ++b) {
          const int sx = wx.begin[x] + static_cast<int>(b);
          const double wgt = wy.weights[y][a] * wx.weights[x][b];
          const float* p = img.pixel(sy, sx);
          for (int ch = 0; ch < c; ++ch) acc[ch] += wgt * p[ch];
        }
      }
      for (int ch = 0; ch < c; ++ch) out.at(y, x, ch) = static_cast<float>(acc[ch]);
    }
  }
  return out;
}

int render_height(const Image& pers, int res) {
  if (pers.height() == pers.width()) return res;
  return std::max(2, static_cast<int>(std::lround(static_cast<double>(res) * pers.height() /
                                                  pers.width())));
}

double mean_squared_error(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw InvalidArgument("mean_squared_error: shape mismatch");
  const int c = a.channels();
  double sum = 0.0;
  for (int v = 0; v < a.height(); ++v) {
    for (int u = 0; u < a.width(); ++u) {
      const float* p = a.pixel(v, u);
      const float* q = b.pixel(v, u);
      for (int ch = 0; ch < c; ++ch) {
        const double diff = static_cast<double>(p[ch]) - q[ch];
        sum += diff * diff;
      }
    }
  }
  return sum / static_cast<double>(a.size());
}

double render_residual(const Image& pers, const Image& erp, const CameraParams& cam, int res) {
  require_image(pers, "perspective image");
  require_erp(erp);
  if (pers.channels() != erp.channels()) {
    throw InvalidArgument("render_residual: channel counts differ");
  }
  res = std::min(res, pers.width());
  const int rh = std::min(render_height(pers, res), pers.height());
  const Image target = box_resize(pers, rh, res);
  return mean_squared_error(target, pano2pers(erp, cam, rh, res));
}

CalibResult calibrate(const Image& pers, const Image& erp, const SearchConfig& cfg) {
  validate(cfg);
  require_image(pers, "perspective image");
  require_erp(erp);
  if (pers.channels() != erp.channels()) {
    throw InvalidArgument("calibrate: channel counts differ");
  }
  const int res = std::min(cfg.render_res, pers.width());
  const int rh = std::min(render_height(pers, res), pers.height());
  const Image target = box_resize(pers, rh, res);
  ResidualScorer scorer(erp, target);

  const std::vector<double> yaw_coarse =
      cfg.search_yaw ? coarse_values(cfg.yaw) : std::vector<double>{0.0};
  const std::vector<double> fov_coarse = coarse_values(cfg.fov);
  const std::vector<double> pitch_coarse = coarse_values(cfg.pitch);
  const std::vector<double> roll_coarse = coarse_values(cfg.roll);

  CalibResult result;
  auto search = [&](const std::vector<double>& fovs, const std::vector<double>& pitches,
                    const std::vector<double>& rolls, const std::vector<double>& yaws,
                    double bound) {
    Best best;
    for (double fov : fovs) {
      if (!(fov > 0.0 && fov < 180.0)) continue;
      scorer.set_fov(fov);
      for (double pitch : pitches) {
        if (pitch < -90.0 || pitch > 90.0) continue;
        for (double roll : rolls) {
          for (double yaw : yaws) {
            const CameraParams cam{fov, normalize_angle_deg(yaw), pitch,
                                   normalize_angle_deg(roll)};
            const double s = scorer.score(cam, std::min(bound, best.score));
            ++result.evaluations;
            if (s < best.score || !best.found) {
              best = {cam, s, true};
            }
          }
        }
      }
    }
    return best;
  };

  constexpr double kNoBound = std::numeric_limits<double>::infinity();
  const Best coarse = search(fov_coarse, pitch_coarse, roll_coarse, yaw_coarse, kNoBound);
  if (!coarse.found) throw InvalidArgument("calibrate: search grid is empty");
  result.coarse_best = coarse.cam;
  result.coarse_score = coarse.score;

  const std::vector<double> yaw_fine =
      cfg.search_yaw ? [&] {
        std::vector<double> ys;
        const long m = std::lround(cfg.yaw.coarse_step / cfg.yaw.fine_step);
        for (long k = -m; k <= m; ++k) ys.push_back(coarse.cam.yaw_deg + k * cfg.yaw.fine_step);
        return ys;
      }()
                     : std::vector<double>{0.0};
  const Best fine = search(fine_values(cfg.fov, coarse.cam.fov_deg),
                           fine_values(cfg.pitch, coarse.cam.pitch_deg),
                           fine_values(cfg.roll, coarse.cam.roll_deg), yaw_fine,
                           coarse.score);
  const Best& best = (fine.found && fine.score <= coarse.score) ? fine : coarse;
  result.best = best.cam;
  result.score = best.score;
  result.residual = render_residual(pers, erp, best.cam, pers.width());
  return result;
}

}  // namespace panolift
