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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstring>

#include "panolift/calibrate.hpp"
#include "panolift/canonicalize.hpp"
#include "panolift/codec.hpp"
#include "panolift/error.hpp"
#include "panolift/io.hpp"
#include "panolift/metrics.hpp"
#include "panolift/projection.hpp"
#include "panolift/trajectory.hpp"

namespace py = pybind11;
using namespace panolift;

namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;

// (H, W) or (H, W, C) float32 array -> Grid.
Grid to_grid(const FloatArray& a) {
  if (a.ndim() != 2 && a.ndim() != 3)
    throw InvalidArgument("expected an array of shape (H, W) or (H, W, C)");
  const int c = a.ndim() == 3 ? static_cast<int>(a.shape(2)) : 1;
  Grid g(static_cast<int>(a.shape(0)), static_cast<int>(a.shape(1)), c);
  std::memcpy(g.data().data(), a.data(), g.size() * sizeof(float));
  return g;
}

FloatArray to_array(const Grid& g) {
  FloatArray a({g.height(), g.width(), g.channels()});
  std::memcpy(a.mutable_data(), g.data().data(), g.size() * sizeof(float));
  return a;
}

std::vector<Image> to_grids(const std::vector<FloatArray>& v) {
  std::vector<Image> out;
  out.reserve(v.size());
  for (const auto& a : v) out.push_back(to_grid(a));
  return out;
}

std::vector<FloatArray> to_arrays(const std::vector<Image>& v) {
  std::vector<FloatArray> out;
  out.reserve(v.size());
  for (const auto& g : v) out.push_back(to_array(g));
  return out;
}

PaddingMode parse_mode(const std::string& s) {
  if (s == "zero") return PaddingMode::kZero;
  if (s == "circular") return PaddingMode::kCircular;
  throw InvalidArgument("padding mode must be 'zero' or 'circular', got '" + s + "'");
}

Trajectory make_trajectory(const std::vector<CameraParams>& frames) {
  Trajectory t;
  t.frames = frames;
  return t;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "360 degree panorama geometry: projection, codec, calibration and metrics";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<EmptyMaskError>(m, "EmptyMaskError", PyExc_ValueError);

  py::class_<CameraParams>(m, "CameraParams")
      .def(py::init([](double fov, double yaw, double pitch, double roll) {
             return CameraParams{fov, yaw, pitch, roll};
           }),
           py::arg("fov_deg") = 90.0, py::arg("yaw_deg") = 0.0, py::arg("pitch_deg") = 0.0,
           py::arg("roll_deg") = 0.0)
      .def_readwrite("fov_deg", &CameraParams::fov_deg)
      .def_readwrite("yaw_deg", &CameraParams::yaw_deg)
      .def_readwrite("pitch_deg", &CameraParams::pitch_deg)
      .def_readwrite("roll_deg", &CameraParams::roll_deg)
      .def(py::self == py::self)
      .def("__repr__", [](const CameraParams& c) {
        return "CameraParams(fov_deg=" + std::to_string(c.fov_deg) + ", yaw_deg=" +
               std::to_string(c.yaw_deg) + ", pitch_deg=" + std::to_string(c.pitch_deg) +
               ", roll_deg=" + std::to_string(c.roll_deg) + ")";
      });

  // sphere
  m.def("erp_dir", [](double row, double col, int h, int w) { return Vec3(erp_dir(row, col, h, w)); },
        py::arg("row"), py::arg("col"), py::arg("height"), py::arg("width"));
  m.def("dir_to_erp", [](const Vec3& d, int h, int w) {
    const ErpCoord c = dir_to_erp(d, h, w);
    return py::make_tuple(c.row, c.col);
  }, py::arg("direction"), py::arg("height"), py::arg("width"));
  m.def("rotation_from_ypr", [](const CameraParams& c) { return Mat3(rotation_from_ypr(c).matrix()); },
        py::arg("camera"));
  m.def("minimal_rotation_between",
        [](const Vec3& a, const Vec3& b) { return Mat3(minimal_rotation_between(a, b).matrix()); },
        py::arg("a"), py::arg("b"));

  // projection
  m.def("pano2pers", [](const FloatArray& erp, const CameraParams& cam, int h, int w) {
    return to_array(pano2pers(to_grid(erp), cam, h, w));
  }, py::arg("erp"), py::arg("camera"), py::arg("height"), py::arg("width"));
  m.def("pers2pano", [](const FloatArray& pers, const CameraParams& cam, int h, int w) {
    const ProjectedConditioning pc = pers2pano(to_grid(pers), cam, h, w);
    return py::make_tuple(to_array(pc.image), to_array(pc.mask));
  }, py::arg("pers"), py::arg("camera"), py::arg("height"), py::arg("width"));
  m.def("frustum_mask", [](const CameraParams& cam, int ph, int pw, int h, int w) {
    return to_array(frustum_mask(cam, ph, pw, h, w));
  }, py::arg("camera"), py::arg("pers_height"), py::arg("pers_width"), py::arg("height"),
        py::arg("width"));
  m.def("sphere_coverage", [](const FloatArray& mask) { return sphere_coverage(to_grid(mask)); },
        py::arg("mask"));
  m.def("rotate_erp", [](const FloatArray& erp, const Mat3& r) {
    return to_array(rotate_erp(to_grid(erp), Rotation3::from_matrix(r)));
  }, py::arg("erp"), py::arg("rotation"));
  m.def("erp_to_cubemap", [](const FloatArray& erp, int size) {
    const CubeMap cube = erp_to_cubemap(to_grid(erp), size);
    py::dict faces;
    for (CubeFace f : kCubeFaces) faces[py::str(std::string(face_name(f)))] = to_array(cube.face(f));
    return faces;
  }, py::arg("erp"), py::arg("face_size"));
  m.def("cubemap_to_erp", [](const py::dict& faces, int h, int w) {
    CubeMap cube;
    for (CubeFace f : kCubeFaces) {
      const std::string key(face_name(f));
      if (!faces.contains(key)) throw InvalidArgument("missing cube face '" + key + "'");
      cube.face(f) = to_grid(faces[py::str(key)].cast<FloatArray>());
    }
    return to_array(cubemap_to_erp(cube, h, w));
  }, py::arg("faces"), py::arg("height"), py::arg("width"));

  // canonicalize
  m.def("stabilize", [](const std::vector<FloatArray>& frames, const std::vector<Mat3>& poses) {
    PoseList p;
    for (const Mat3& r : poses) p.push_back(Rotation3::from_matrix(r));
    return to_arrays(stabilize(to_grids(frames), p));
  }, py::arg("frames"), py::arg("poses"));
  m.def("average_gravity", [](const std::vector<Vec3>& g) { return Vec3(average_gravity(g)); },
        py::arg("estimates"));
  m.def("gravity_align", [](const FloatArray& frame, const Vec3& g) {
    return to_array(gravity_align(to_grid(frame), g));
  }, py::arg("erp"), py::arg("gravity"));
  m.def("yaw_shift_augment", [](const FloatArray& erp, long k) {
    return to_array(yaw_shift_augment(to_grid(erp), k));
  }, py::arg("erp"), py::arg("k"));

  // codec
  m.def("encode", [](const FloatArray& img, const std::string& mode) {
    return to_array(encode(to_grid(img), parse_mode(mode)));
  }, py::arg("image"), py::arg("mode") = "circular");
  m.def("decode", [](const FloatArray& lat, const std::string& mode) {
    return to_array(decode(to_grid(lat), parse_mode(mode)));
  }, py::arg("latent"), py::arg("mode") = "circular");
  m.def("circular_encode", [](const FloatArray& erp, int w_prime) {
    return to_array(circular_encode(to_grid(erp), w_prime));
  }, py::arg("erp"), py::arg("w_prime") = -1);
  m.def("circular_decode", [](const FloatArray& lat, int pad) {
    return to_array(circular_decode(to_grid(lat), pad));
  }, py::arg("latent"), py::arg("pad") = 2);
  m.def("weight_hash", [](std::uint64_t seed) { return CodecWeights(seed).hash(); },
        py::arg("seed") = CodecWeights::kDefaultSeed);
  m.def("flow_interpolate", [](const FloatArray& y, const FloatArray& e, double t) {
    return to_array(flow_interpolate(to_grid(y), to_grid(e), t));
  }, py::arg("clean"), py::arg("noise"), py::arg("t"));
  m.def("velocity_target", [](const FloatArray& y, const FloatArray& e) {
    return to_array(velocity_target(to_grid(y), to_grid(e)));
  }, py::arg("clean"), py::arg("noise"));

  // trajectory
  m.def("simulate_trajectory", [](int frames, std::uint64_t seed, double noise) {
    SimConfig cfg;
    cfg.frames = frames;
    cfg.seed = seed;
    cfg.noise_std_deg = noise;
    return simulate_trajectory(cfg).frames;
  }, py::arg("frames"), py::arg("seed") = 0, py::arg("noise_std_deg") = 0.05);
  m.def("crop_video", [](const std::vector<FloatArray>& frames, const std::vector<CameraParams>& traj,
                         int h, int w) {
    return to_arrays(crop_video(to_grids(frames), make_trajectory(traj), h, w));
  }, py::arg("frames"), py::arg("trajectory"), py::arg("height"), py::arg("width"));

  // calibrate
  m.def("calibrate", [](const FloatArray& pers, const FloatArray& erp, bool search_yaw, int res) {
    SearchConfig cfg;
    cfg.search_yaw = search_yaw;
    cfg.render_res = res;
    const CalibResult r = calibrate(to_grid(pers), to_grid(erp), cfg);
    py::dict d;
    d["camera"] = r.best;
    d["residual"] = r.residual;
    d["evaluations"] = r.evaluations;
    return d;
  }, py::arg("pers"), py::arg("erp"), py::arg("search_yaw") = false, py::arg("render_res") = 64);

  // metrics
  m.def("discontinuity_score", [](const FloatArray& img) { return discontinuity_score(to_grid(img)); },
        py::arg("image"));
  m.def("masked_psnr", [](const std::vector<FloatArray>& gt, const std::vector<FloatArray>& gen,
                          const std::vector<CameraParams>& traj, int ph, int pw) {
    const MetricReport r = masked_psnr(to_grids(gt), to_grids(gen), make_trajectory(traj), ph, pw);
    py::dict d;
    d["value"] = r.value;
    d["coverage"] = r.coverage;
    d["per_frame"] = r.per_frame;
    return d;
  }, py::arg("gt"), py::arg("gen"), py::arg("trajectory"), py::arg("pers_height"),
        py::arg("pers_width"));
  m.def("latent_equivariance_error", [](const FloatArray& erp, bool use_cle) {
    return latent_equivariance_error(to_grid(erp), use_cle);
  }, py::arg("erp"), py::arg("use_cle"));

  // io
  m.def("read_image", [](const std::filesystem::path& p) { return to_array(io::read_image(p)); },
        py::arg("path"));
  m.def("write_image", [](const FloatArray& img, const std::filesystem::path& p) {
    io::write_image(to_grid(img), p);
  }, py::arg("image"), py::arg("path"));
}
