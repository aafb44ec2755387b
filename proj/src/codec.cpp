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

#include "panolift/codec.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "panolift/error.hpp"
#include "panolift/rng.hpp"

namespace panolift {
namespace {

ConvKernel fill_kernel(SplitMix64& rng, int in_ch, int out_ch) {
  ConvKernel k;
  k.in_channels = in_ch;
  k.out_channels = out_ch;
  k.weights.resize(static_cast<std::size_t>(out_ch) * in_ch * 9);
  const double a = 1.0 / std::sqrt(static_cast<double>(in_ch) * 9.0);
  for (float& w : k.weights) {
    const double u = static_cast<double>(rng.next() >> 40) * 0x1.0p-24;
    w = static_cast<float>((2.0 * u - 1.0) * a);
  }
  return k;
}

void apply_tanh(Grid& g) {
  for (float& v : g.data()) v = std::tanh(v);
}

Grid upsample2x(const Grid& in) {
  Grid out(in.height() * 2, in.width() * 2, in.channels());
  const int c = in.channels();
  for (int r = 0; r < out.height(); ++r) {
    for (int j = 0; j < out.width(); ++j) {
      const float* src = in.pixel(r / 2, j / 2);
      std::copy(src, src + c, out.pixel(r, j));
    }
  }
  return out;
}

Grid as_rgb(const Image& img) {
  if (img.channels() == 3) return img;
  if (img.channels() != 1) {
    throw InvalidArgument("encode: image must have 1 or 3 channels");
  }
  Grid out(img.height(), img.width(), 3);
  for (int r = 0; r < img.height(); ++r) {
    for (int j = 0; j < img.width(); ++j) {
      float* p = out.pixel(r, j);
      p[0] = p[1] = p[2] = img.at(r, j);
    }
  }
  return out;
}

// Concatenates column blocks horizontally.
Grid hconcat(std::initializer_list<const Grid*> parts) {
  const Grid& first = **parts.begin();
  int width = 0;
  for (const Grid* p : parts) width += p->width();
  Grid out(first.height(), width, first.channels());
  const int c = first.channels();
  int offset = 0;
  for (const Grid* p : parts) {
    for (int r = 0; r < p->height(); ++r) {
      std::memcpy(out.pixel(r, offset), p->pixel(r, 0),
                  sizeof(float) * static_cast<std::size_t>(p->width()) * c);
    }
    offset += p->width();
  }
  return out;
}

Grid crop_columns(const Grid& in, int begin, int count) {
  Grid out(in.height(), count, in.channels());
  for (int r = 0; r < in.height(); ++r) {
    std::memcpy(out.pixel(r, 0), in.pixel(r, begin),
                sizeof(float) * static_cast<std::size_t>(count) * in.channels());
  }
  return out;
}

void require_same_shape(const Grid& a, const Grid& b, const char* what) {
  if (!a.same_shape(b)) {
    throw InvalidArgument(std::string(what) + ": grid shapes differ");
  }
}

}  // namespace

CodecWeights::CodecWeights(std::uint64_t seed) {
  SplitMix64 rng(seed);
  encoder_[0] = fill_kernel(rng, 3, 8);
  encoder_[1] = fill_kernel(rng, 8, 16);
  encoder_[2] = fill_kernel(rng, 16, kLatentChannels);
  decoder_[0] = fill_kernel(rng, kLatentChannels, 16);
  decoder_[1] = fill_kernel(rng, 16, 8);
  decoder_[2] = fill_kernel(rng, 8, 3);
}

const CodecWeights& CodecWeights::standard() {
  static const CodecWeights weights(kDefaultSeed);
  return weights;
}

std::uint64_t CodecWeights::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto absorb = [&h](const ConvKernel& k) {
    for (float w : k.weights) {
      std::uint32_t bits;
      std::memcpy(&bits, &w, sizeof bits);
      for (int b = 0; b < 4; ++b) {
        h ^= (bits >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ULL;
      }
    }
  };
  for (const ConvKernel& k : encoder_) absorb(k);
  for (const ConvKernel& k : decoder_) absorb(k);
  return h;
}

Grid conv3x3(const Grid& in, const ConvKernel& kernel, int stride, PaddingMode mode) {
  if (in.channels() != kernel.in_channels) {
    throw InvalidArgument("conv3x3: input has " + std::to_string(in.channels()) +
                          " channels, kernel expects " +
                          std::to_string(kernel.in_channels));
  }
  if (stride != 1 && stride != 2) throw InvalidArgument("conv3x3: stride must be 1 or 2");
  const int h = in.height();
  const int w = in.width();
  if (stride == 2 && (h % 2 != 0 || w % 2 != 0)) {
    throw InvalidArgument("conv3x3: stride-2 input dimensions must be even");
  }
  const int oh = h / stride;
  const int ow = w / stride;
  const int ic = kernel.in_channels;
  const int oc = kernel.out_channels;

  // Per-tap [ky][kx][out][in] layout for the inner loop.
  std::vector<float> taps(kernel.weights.size());
  for (int o = 0; o < oc; ++o)
    for (int i = 0; i < ic; ++i)
      for (int ky = 0; ky < 3; ++ky)
        for (int kx = 0; kx < 3; ++kx)
          taps[((static_cast<std::size_t>(ky) * 3 + kx) * oc + o) * ic + i] =
              kernel.at(o, i, ky, kx);

  Grid out(oh, ow, oc);
  std::vector<float> acc(oc);
  for (int oy = 0; oy < oh; ++oy) {
    for (int ox = 0; ox < ow; ++ox) {
      std::fill(acc.begin(), acc.end(), 0.0f);
      for (int ky = 0; ky < 3; ++ky) {
        const int iy = oy * stride + ky - 1;
        if (iy < 0 || iy >= h) continue;
        for (int kx = 0; kx < 3; ++kx) {
          int ix = ox * stride + kx - 1;
          if (ix < 0 || ix >= w) {
            if (mode == PaddingMode::kZero) continue;
            ix = (ix + w) % w;
          }
          const float* px = in.pixel(iy, ix);
          const float* tap = taps.data() + (static_cast<std::size_t>(ky) * 3 + kx) * oc * ic;
          for (int o = 0; o < oc; ++o) {
            float s = acc[o];
            const float* row = tap + static_cast<std::size_t>(o) * ic;
            for (int i = 0; i < ic; ++i) s += row[i] * px[i];
            acc[o] = s;
          }
        }
      }
      std::copy(acc.begin(), acc.end(), out.pixel(oy, ox));
    }
  }
  return out;
}

LatentGrid encode(const Image& img, PaddingMode mode, const CodecWeights& weights) {
  if (img.height() % kDownsample != 0 || img.width() % kDownsample != 0) {
    throw InvalidArgument("encode: height and width must be multiples of 8, got " +
                          std::to_string(img.height()) + "x" +
                          std::to_string(img.width()));
  }
  const auto& enc = weights.encoder();
  Grid x = conv3x3(as_rgb(img), enc[0], 2, mode);
  apply_tanh(x);
  x = conv3x3(x, enc[1], 2, mode);
  apply_tanh(x);
  return conv3x3(x, enc[2], 2, mode);
}

Image decode(const LatentGrid& latent, PaddingMode mode, const CodecWeights& weights) {
  if (latent.channels() != kLatentChannels) {
    throw InvalidArgument("decode: latent must have 4 channels");
  }
  const auto& dec = weights.decoder();
  Grid x = conv3x3(upsample2x(latent), dec[0], 1, mode);
  apply_tanh(x);
  x = conv3x3(upsample2x(x), dec[1], 1, mode);
  apply_tanh(x);
  return conv3x3(upsample2x(x), dec[2], 1, mode);
}

LatentGrid circular_encode(const Image& erp, int w_prime, const CodecWeights& weights) {
  if (w_prime < 0) w_prime = erp.width() / kDownsample;
  if (w_prime % kDownsample != 0) {
    throw InvalidArgument("circular_encode: w_prime must be a multiple of 8, got " +
                          std::to_string(w_prime));
  }
  if (w_prime > erp.width()) {
    throw InvalidArgument("circular_encode: w_prime exceeds the image width");
  }
  if (w_prime == 0) return encode(erp, PaddingMode::kZero, weights);
  const Grid left = wrap_columns(erp, erp.width() - w_prime, w_prime);
  const Grid right = wrap_columns(erp, 0, w_prime);
  const Grid padded = hconcat({&left, &erp, &right});
  const LatentGrid full = encode(padded, PaddingMode::kZero, weights);
  const int drop = w_prime / kDownsample;
  return crop_columns(full, drop, full.width() - 2 * drop);
}

Image circular_decode(const LatentGrid& latent, int pad, const CodecWeights& weights) {
  if (pad < kDecoderReach || pad > latent.width()) {
    throw InvalidArgument("circular_decode: pad must be in [1, latent width], got " +
                          std::to_string(pad));
  }
  const Grid left = wrap_columns(latent, latent.width() - pad, pad);
  const Grid right = wrap_columns(latent, 0, pad);
  const Grid padded = hconcat({&left, &latent, &right});
  const Image full = decode(padded, PaddingMode::kZero, weights);
  const int drop = pad * kDownsample;
  return crop_columns(full, drop, full.width() - 2 * drop);
}

Grid flow_interpolate(const Grid& clean, const Grid& noise, double t) {
  require_same_shape(clean, noise, "flow_interpolate");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InvalidArgument("flow_interpolate: t must be in [0, 1]");
  }
  Grid out = clean;
  const auto y = clean.data();
  const auto e = noise.data();
  auto o = out.data();
  const double keep = 1.0 - t;
  for (std::size_t k = 0; k < o.size(); ++k) {
    o[k] = static_cast<float>(keep * y[k] + t * e[k]);
  }
  return out;
}

Grid velocity_target(const Grid& clean, const Grid& noise) {
  require_same_shape(clean, noise, "velocity_target");
  Grid out = noise;
  const auto y = clean.data();
  auto o = out.data();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= y[k];
  return out;
}

}  // namespace panolift
