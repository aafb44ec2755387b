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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "panolift/canonicalize.hpp"
#include "panolift/grid.hpp"
#include "panolift/trajectory.hpp"

namespace panolift::io {

namespace fs = std::filesystem;

/// Raw float tensor: "PTEN", u32 rank, rank x u32 dims, f32 payload, all
/// little-endian, row-major. Rank is 1..4.
struct Tensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> data;
};

std::vector<std::uint8_t> encode_tensor(const Tensor& t);
Tensor decode_tensor(const std::vector<std::uint8_t>& bytes, const std::string& origin = "<memory>");

Tensor read_tensor(const fs::path& path);
void write_tensor(const Tensor& t, const fs::path& path);

// Grids travel as rank-3 [H, W, C] tensors; rank 2 [H, W] reads as C = 1.
Tensor to_tensor(const Grid& g);
Grid to_grid(const Tensor& t, const std::string& origin = "<memory>");

/// PNG (8-bit gray or RGB) or .pten, chosen by extension. PNG values map to
/// [0, 1] by /255; on write they are clamped and rounded half-to-even.
Image read_image(const fs::path& path);
void write_image(const Image& img, const fs::path& path);

/// Writes `bytes` to a sibling temp file and renames it over `path`.
void write_file_atomic(const fs::path& path, const std::string& bytes);
std::string read_file(const fs::path& path);

std::string trajectory_to_json(const Trajectory& traj);
Trajectory trajectory_from_json(const std::string& text, const std::string& origin = "<memory>");
Trajectory load_trajectory(const fs::path& path);
void save_trajectory(const Trajectory& traj, const fs::path& path);

struct PoseGravity {
  PoseList poses;
  std::vector<Vec3> gravity;  // may be empty
};

PoseGravity pose_gravity_from_json(const std::string& text, const std::string& origin = "<memory>");
PoseGravity load_pose_gravity(const fs::path& path);

/// Sorted frame_NNNN.{png,pten} files of a directory.
std::vector<fs::path> list_frames(const fs::path& dir);
std::vector<Image> read_frames(const fs::path& dir);
/// Writes frame_0000.<ext> ... into `dir`, creating it if needed.
void write_frames(const std::vector<Image>& frames, const fs::path& dir,
                  const std::string& ext = ".png");
std::string frame_name(std::size_t index, const std::string& ext);

}  // namespace panolift::io
