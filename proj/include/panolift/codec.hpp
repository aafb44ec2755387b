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
#include <cstdint>
#include <span>
#include <vector>

#include "panolift/grid.hpp"

namespace panolift {

/// Horizontal boundary handling of every convolution. Vertical padding is
/// always zero because the top and bottom of an ERP are not periodic.
enum class PaddingMode { kZero, kCircular };

/// 3x3 kernel bank, stored [out][in][ky][kx]. Biases are zero.
struct ConvKernel {
  int in_channels = 0;
  int out_channels = 0;
  std::vector<float> weights;

  float at(int o, int i, int ky, int kx) const {
    return weights[((static_cast<std::size_t>(o) * in_channels + i) * 3 + ky) * 3 + kx];
  }
};

/// Fixed random weights of the stand-in codec.
///
/// Encoder: three stride-2 convolutions, channels 3 -> 8 -> 16 -> 4, tanh
/// after the first two. Decoder: three (nearest 2x upsample, stride-1 conv)
/// stages, channels 4 -> 16 -> 8 -> 3, tanh after the first two.
///
/// Fill order is enc1, enc2, enc3, dec1, dec2, dec3; inside a layer the
/// index order is [out][in][ky][kx]. Each value takes one SplitMix64 draw
/// x, u = (x >> 40) / 2^24, weight = float((2u - 1) * a) with
/// a = 1 / sqrt(in_channels * 9).
class CodecWeights {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0x360A11CE;

  explicit CodecWeights(std::uint64_t seed = kDefaultSeed);

  // Shared immutable instance built from kDefaultSeed.
  static const CodecWeights& standard();

  const std::array<ConvKernel, 3>& encoder() const { return encoder_; }
  const std::array<ConvKernel, 3>& decoder() const { return decoder_; }

  /// FNV-1a 64 over the little-endian bytes of every weight in fill order.
  std::uint64_t hash() const;

 private:
  std::array<ConvKernel, 3> encoder_;
  std::array<ConvKernel, 3> decoder_;
};

inline constexpr int kLatentChannels = 4;
inline constexpr int kDownsample = 8;
/// Half-width, in input pixels, of the encoder's receptive field.
inline constexpr int kEncoderReach = 7;
/// Latent columns of context the decoder needs on each side.
inline constexpr int kDecoderReach = 1;

/// 3x3 convolution with pad 1 (vertical zero, horizontal per `mode`).
Grid conv3x3(const Grid& in, const ConvKernel& kernel, int stride, PaddingMode mode);

/// Encodes a 1- or 3-channel image whose height and width are multiples of 8.
/// Grayscale input is replicated to three channels.
LatentGrid encode(const Image& img, PaddingMode mode,
                  const CodecWeights& weights = CodecWeights::standard());

Image decode(const LatentGrid& latent, PaddingMode mode,
             const CodecWeights& weights = CodecWeights::standard());

/// Circular Latent Encoding: wrap `w_prime` columns onto each side, encode
/// with zero padding, drop the w_prime / 8 latent columns on each side.
/// A negative `w_prime` selects the default W / 8.
LatentGrid circular_encode(const Image& erp, int w_prime = -1,
                           const CodecWeights& weights = CodecWeights::standard());

/// Wraps `pad` latent columns onto each side, decodes with zero padding and
/// crops 8 * pad pixel columns from each side.
Image circular_decode(const LatentGrid& latent, int pad = 2,
                      const CodecWeights& weights = CodecWeights::standard());

/// (1 - t) * clean + t * noise.
Grid flow_interpolate(const Grid& clean, const Grid& noise, double t);

/// noise - clean, the regression target of the flow-matching objective.
Grid velocity_target(const Grid& clean, const Grid& noise);

}  // namespace panolift
