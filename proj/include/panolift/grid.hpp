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

#include <cstddef>
#include <span>
#include <vector>

namespace panolift {

/// Row-major H x W x C float grid. Used for ERP images, perspective images,
/// masks (C = 1) and codec latents.
class Grid {
 public:
  Grid() = default;
  Grid(int height, int width, int channels, float fill = 0.0f);

  int height() const { return height_; }
  int width() const { return width_; }
  int channels() const { return channels_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  float& at(int row, int col, int ch = 0) {
    return data_[index(row, col, ch)];
  }
  float at(int row, int col, int ch = 0) const {
    return data_[index(row, col, ch)];
  }
  // Pointer to the C channel values of one pixel.
  float* pixel(int row, int col) { return data_.data() + index(row, col, 0); }
  const float* pixel(int row, int col) const {
    return data_.data() + index(row, col, 0);
  }

  std::span<float> data() { return data_; }
  std::span<const float> data() const { return data_; }

  bool same_shape(const Grid& other) const {
    return height_ == other.height_ && width_ == other.width_ &&
           channels_ == other.channels_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int row, int col, int ch) const {
    return (static_cast<std::size_t>(row) * width_ + col) * channels_ + ch;
  }

  int height_ = 0;
  int width_ = 0;
  int channels_ = 0;
  std::vector<float> data_;
};

using Image = Grid;
using LatentGrid = Grid;

// Throws InvalidArgument unless the grid is a valid equirectangular image:
// W == 2H, H >= 2, C in {1, 3}.
void require_erp(const Grid& img, const char* what = "ERP image");

// Throws InvalidArgument unless height, width >= 2 and C in {1, 3}.
void require_image(const Grid& img, const char* what = "image");

/// Exact circular column shift: out[:, (j + k) mod W] = in[:, j].
Grid roll_columns(const Grid& in, long k);

/// Columns [begin, begin + count) of `in`, wrapping modulo W.
Grid wrap_columns(const Grid& in, long begin, int count);

}  // namespace panolift
