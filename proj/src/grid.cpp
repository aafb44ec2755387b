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

#include "panolift/grid.hpp"

#include <algorithm>
#include <string>

#include "panolift/error.hpp"

namespace panolift {

Grid::Grid(int height, int width, int channels, float fill)
    : height_(height), width_(width), channels_(channels) {
  if (height <= 0 || width <= 0 || channels <= 0) {
    throw InvalidArgument("grid dimensions must be positive, got " +
                          std::to_string(height) + "x" + std::to_string(width) +
                          "x" + std::to_string(channels));
  }
  data_.assign(static_cast<std::size_t>(height) * width * channels, fill);
}

void require_image(const Grid& img, const char* what) {
  if (img.height() < 2 || img.width() < 2) {
    throw InvalidArgument(std::string(what) + ": height and width must be >= 2");
  }
  if (img.channels() != 1 && img.channels() != 3) {
    throw InvalidArgument(std::string(what) + ": channels must be 1 or 3, got " +
                          std::to_string(img.channels()));
  }
}

void require_erp(const Grid& img, const char* what) {
  require_image(img, what);
  if (img.width() != 2 * img.height()) {
    throw InvalidArgument(std::string(what) + ": width must equal 2*height, got " +
                          std::to_string(img.height()) + "x" +
                          std::to_string(img.width()));
  }
}

static long wrap_index(long j, long w) {
  const long r = j % w;
  return r < 0 ? r + w : r;
}

Grid roll_columns(const Grid& in, long k) {
  if (in.empty()) return in;
  const int w = in.width();
  const int c = in.channels();
  Grid out(in.height(), w, c);
  const long shift = wrap_index(k, w);
  for (int r = 0; r < in.height(); ++r) {
    for (int j = 0; j < w; ++j) {
      const float* src = in.pixel(r, j);
      std::copy(src, src + c, out.pixel(r, static_cast<int>(wrap_index(j + shift, w))));
    }
  }
  return out;
}

Grid wrap_columns(const Grid& in, long begin, int count) {
  if (count <= 0) throw InvalidArgument("wrap_columns: count must be positive");
  const int w = in.width();
  const int c = in.channels();
  Grid out(in.height(), count, c);
  for (int r = 0; r < in.height(); ++r) {
    for (int j = 0; j < count; ++j) {
      const float* src = in.pixel(r, static_cast<int>(wrap_index(begin + j, w)));
      std::copy(src, src + c, out.pixel(r, j));
    }
  }
  return out;
}

}  // namespace panolift
