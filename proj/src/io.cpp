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

#include "panolift/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "panolift/error.hpp"

namespace panolift::io {
namespace {

using nlohmann::json;

constexpr char kMagic[4] = {'P', 'T', 'E', 'N'};

static_assert(std::endian::native == std::endian::little,
              "raw tensor I/O assumes a little-endian host");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::string lower_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(origin + ":" + std::to_string(line_of(text, e.byte)) +
                      ": invalid JSON: " + e.what());
  }
}

double number_field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    throw FormatError(where + ": missing numeric field '" + key + "'");
  }
  return it->get<double>();
}

Vec3 vec3_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw FormatError(where + ": expected [x, y, z]");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    if (!j[k].is_number()) throw FormatError(where + ": non-numeric component");
    v[k] = j[k].get<double>();
  }
  return v;
}

Mat3 mat3_from(const json& j, const std::string& where) {
  Mat3 m;
  if (j.is_array() && j.size() == 9) {
    for (int k = 0; k < 9; ++k) {
      if (!j[k].is_number()) throw FormatError(where + ": non-numeric entry");
      m(k / 3, k % 3) = j[k].get<double>();
    }
    return m;
  }
  if (j.is_array() && j.size() == 3) {
    for (int r = 0; r < 3; ++r) {
      const Vec3 row = vec3_from(j[r], where);
      m.row(r) = row.transpose();
    }
    return m;
  }
  throw FormatError(where + ": expected a row-major 3x3 matrix");
}

}  // namespace

std::vector<std::uint8_t> encode_tensor(const Tensor& t) {
  if (t.dims.empty() || t.dims.size() > 4) {
    throw InvalidArgument("tensor rank must be in [1, 4]");
  }
  std::size_t count = 1;
  for (auto d : t.dims) count *= d;
  if (count != t.data.size()) throw InvalidArgument("tensor payload does not match dims");
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) put_u32(out, d);
  const std::size_t header = out.size();
  out.resize(header + count * 4);
  std::memcpy(out.data() + header, t.data.data(), count * 4);
  return out;
}

Tensor decode_tensor(const std::vector<std::uint8_t>& bytes, const std::string& origin) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw FormatError(origin + ": not a PTEN tensor file");
  }
  const std::uint32_t rank = get_u32(bytes.data() + 4);
  if (rank < 1 || rank > 4) {
    throw FormatError(origin + ": tensor rank " + std::to_string(rank) + " not in [1, 4]");
  }
  const std::size_t header = 8 + 4 * static_cast<std::size_t>(rank);
  if (bytes.size() < header) throw FormatError(origin + ": truncated tensor header");
  Tensor t;
  std::uint64_t count = 1;
  for (std::uint32_t k = 0; k < rank; ++k) {
    t.dims.push_back(get_u32(bytes.data() + 8 + 4 * k));
    count *= t.dims.back();
  }
  if (bytes.size() - header != count * 4) {
    throw FormatError(origin + ": tensor payload is " + std::to_string(bytes.size() - header) +
                      " bytes, dims require " + std::to_string(count * 4));
  }
  t.data.resize(count);
  std::memcpy(t.data.data(), bytes.data() + header, count * 4);
  return t;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError(path.string() + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError(path.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

Tensor read_tensor(const fs::path& path) {
  const std::string raw = read_file(path);
  return decode_tensor(std::vector<std::uint8_t>(raw.begin(), raw.end()), path.string());
}

void write_tensor(const Tensor& t, const fs::path& path) {
  const auto bytes = encode_tensor(t);
  write_file_atomic(path, std::string(bytes.begin(), bytes.end()));
}

Tensor to_tensor(const Grid& g) {
  Tensor t;
  t.dims = {static_cast<std::uint32_t>(g.height()), static_cast<std::uint32_t>(g.width()),
            static_cast<std::uint32_t>(g.channels())};
  t.data.assign(g.data().begin(), g.data().end());
  return t;
}

Grid to_grid(const Tensor& t, const std::string& origin) {
  if (t.dims.size() != 2 && t.dims.size() != 3) {
    throw FormatError(origin + ": expected a rank-2 or rank-3 tensor for an image");
  }
  const int h = static_cast<int>(t.dims[0]);
  const int w = static_cast<int>(t.dims[1]);
  const int c = t.dims.size() == 3 ? static_cast<int>(t.dims[2]) : 1;
  if (h <= 0 || w <= 0 || c <= 0) throw FormatError(origin + ": zero-sized tensor");
  Grid g(h, w, c);
  std::copy(t.data.begin(), t.data.end(), g.data().begin());
  return g;
}

Image read_image(const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".pten") return to_grid(read_tensor(path), path.string());
  if (ext != ".png") throw FormatError(path.string() + ": unsupported image format");

  const std::string raw = read_file(path);
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, raw.data(), raw.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(path.string() + ": corrupt PNG: " + msg);
  }
  if (image.format & (PNG_FORMAT_FLAG_LINEAR | PNG_FORMAT_FLAG_ALPHA | PNG_FORMAT_FLAG_COLORMAP)) {
    png_image_free(&image);
    throw FormatError(path.string() +
                      ": only 8-bit grayscale or RGB PNG without alpha or palette is supported");
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  const int channels = color ? 3 : 1;
  std::vector<std::uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(path.string() + ": corrupt PNG: " + msg);
  }
  const int h = static_cast<int>(image.height);
  const int w = static_cast<int>(image.width);
  png_image_free(&image);
  Image img(h, w, channels);
  auto dst = img.data();
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = static_cast<float>(pixels[k]) / 255.0f;
  return img;
}

void write_image(const Image& img, const fs::path& path) {
  const std::string ext = lower_ext(path);
  if (ext == ".pten") {
    write_tensor(to_tensor(img), path);
    return;
  }
  if (ext != ".png") throw FormatError(path.string() + ": unsupported image format");
  if (img.channels() != 1 && img.channels() != 3) {
    throw FormatError(path.string() + ": PNG output needs 1 or 3 channels");
  }
  std::vector<std::uint8_t> pixels(img.size());
  const auto src = img.data();
  for (std::size_t k = 0; k < src.size(); ++k) {
    const double v = std::clamp(static_cast<double>(src[k]), 0.0, 1.0);
    pixels[k] = static_cast<std::uint8_t>(std::nearbyint(v * 255.0));
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0, pixels.data(), 0, nullptr)) {
    throw FormatError(path.string() + ": PNG encoding failed: " + image.message);
  }
  std::string buffer(size, '\0');
  if (!png_image_write_to_memory(&image, buffer.data(), &size, 0, pixels.data(), 0, nullptr)) {
    throw FormatError(path.string() + ": PNG encoding failed: " + image.message);
  }
  buffer.resize(size);
  write_file_atomic(path, buffer);
}

std::string trajectory_to_json(const Trajectory& traj) {
  // One frame per line keeps the files diffable.
  std::ostringstream out;
  out << "{\n  \"source\": \""
      << (traj.source == TrajectorySource::kSimulated ? "simulated" : "real")
      << "\",\n  \"frames\": [\n";
  for (std::size_t k = 0; k < traj.frames.size(); ++k) {
    const CameraParams& c = traj.frames[k];
    json f = {{"fov_deg", c.fov_deg},
              {"yaw_deg", c.yaw_deg},
              {"pitch_deg", c.pitch_deg},
              {"roll_deg", c.roll_deg}};
    out << "    " << f.dump() << (k + 1 < traj.frames.size() ? ",\n" : "\n");
  }
  out << "  ]\n}\n";
  return out.str();
}

Trajectory trajectory_from_json(const std::string& text, const std::string& origin) {
  const json doc = parse_json(text, origin);
  Trajectory traj;
  traj.source = TrajectorySource::kReal;
  const json* frames = &doc;
  if (doc.is_object()) {
    if (const auto it = doc.find("source"); it != doc.end()) {
      if (*it == "simulated") {
        traj.source = TrajectorySource::kSimulated;
      } else if (*it != "real") {
        throw FormatError(origin + ": source must be \"simulated\" or \"real\"");
      }
    }
    const auto it = doc.find("frames");
    if (it == doc.end()) throw FormatError(origin + ": missing \"frames\" array");
    frames = &*it;
  }
  if (!frames->is_array() || frames->empty()) {
    throw FormatError(origin + ": trajectory must be a non-empty array of camera objects");
  }
  for (std::size_t k = 0; k < frames->size(); ++k) {
    const json& f = (*frames)[k];
    const std::string where = origin + ": frame " + std::to_string(k);
    if (!f.is_object()) throw FormatError(where + ": expected an object");
    CameraParams cam{number_field(f, "fov_deg", where), number_field(f, "yaw_deg", where),
                     number_field(f, "pitch_deg", where), number_field(f, "roll_deg", where)};
    try {
      validate(cam);
    } catch (const InvalidArgument& e) {
      throw FormatError(where + ": " + e.what());
    }
    traj.frames.push_back(cam);
  }
  return traj;
}

Trajectory load_trajectory(const fs::path& path) {
  return trajectory_from_json(read_file(path), path.string());
}

void save_trajectory(const Trajectory& traj, const fs::path& path) {
  validate(traj);
  write_file_atomic(path, trajectory_to_json(traj));
}

PoseGravity pose_gravity_from_json(const std::string& text, const std::string& origin) {
  const json doc = parse_json(text, origin);
  if (!doc.is_object()) throw FormatError(origin + ": expected a JSON object");
  const auto poses = doc.find("poses");
  if (poses == doc.end() || !poses->is_array() || poses->empty()) {
    throw FormatError(origin + ": missing non-empty \"poses\" array");
  }
  PoseGravity pg;
  for (std::size_t k = 0; k < poses->size(); ++k) {
    const std::string where = origin + ": pose " + std::to_string(k);
    const Mat3 m = mat3_from((*poses)[k], where);
    if (!is_rotation(m)) throw FormatError(where + ": not a proper rotation matrix");
    pg.poses.push_back(Rotation3::from_matrix(m));
  }
  if (const auto g = doc.find("gravity"); g != doc.end()) {
    if (!g->is_array()) throw FormatError(origin + ": \"gravity\" must be an array");
    for (std::size_t k = 0; k < g->size(); ++k) {
      const std::string where = origin + ": gravity " + std::to_string(k);
      const Vec3 v = vec3_from((*g)[k], where);
      if (std::abs(v.norm() - 1.0) > 1e-3) throw FormatError(where + ": not a unit vector");
      pg.gravity.push_back(v.normalized());
    }
  }
  return pg;
}

PoseGravity load_pose_gravity(const fs::path& path) {
  return pose_gravity_from_json(read_file(path), path.string());
}

std::string frame_name(std::size_t index, const std::string& ext) {
  std::ostringstream ss;
  ss << "frame_" << std::setw(4) << std::setfill('0') << index << ext;
  return ss.str();
}

std::vector<fs::path> list_frames(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw FormatError(dir.string() + ": not a directory");
  static const std::regex pattern(R"(frame_(\d+)\.(png|pten))", std::regex::icase);
  std::vector<std::pair<long, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::smatch m;
    const std::string name = entry.path().filename().string();
    if (std::regex_match(name, m, pattern)) found.emplace_back(std::stol(m[1]), entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<fs::path> paths;
  for (auto& [idx, p] : found) paths.push_back(p);
  if (paths.empty()) throw FormatError(dir.string() + ": no frame_NNNN.png/.pten files");
  return paths;
}

std::vector<Image> read_frames(const fs::path& dir) {
  std::vector<Image> frames;
  for (const auto& p : list_frames(dir)) frames.push_back(read_image(p));
  return frames;
}

void write_frames(const std::vector<Image>& frames, const fs::path& dir, const std::string& ext) {
  fs::create_directories(dir);
  for (std::size_t k = 0; k < frames.size(); ++k) write_image(frames[k], dir / frame_name(k, ext));
}

}  // namespace panolift::io
