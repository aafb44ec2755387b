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

#include "panolift/cli.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "panolift/calibrate.hpp"
#include "panolift/canonicalize.hpp"
#include "panolift/codec.hpp"
#include "panolift/error.hpp"
#include "panolift/io.hpp"
#include "panolift/metrics.hpp"
#include "panolift/projection.hpp"
#include "panolift/trajectory.hpp"

namespace panolift::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Size {
  int width = 0;
  int height = 0;
};

// "WIDTHxHEIGHT", e.g. 512x384.
Size parse_size(const std::string& text) {
  Size s;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> s.width >> x >> s.height) || (x != 'x' && x != 'X') || !in.eof() ||
      s.width < 2 || s.height < 2) {
    throw CLI::ValidationError("--size", "expected WIDTHxHEIGHT with both >= 2, got '" + text + "'");
  }
  return s;
}

CLI::Validator size_validator() {
  return CLI::Validator(
      [](std::string& value) {
        try {
          parse_size(value);
        } catch (const CLI::ValidationError&) {
          return std::string("expected WIDTHxHEIGHT with both >= 2");
        }
        return std::string();
      },
      "WIDTHxHEIGHT");
}

PaddingMode parse_padding(const std::string& mode) {
  return mode == "zero" ? PaddingMode::kZero : PaddingMode::kCircular;
}

std::string scalar(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(8) << v;
  return ss.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const MetricReport& r) {
  json j = {{"metric", r.name},
            {"value", number_or_null(r.value)},
            {"infinite", r.is_infinite()},
            {"coverage", r.coverage}};
  json frames = json::array();
  for (double v : r.per_frame) frames.push_back(number_or_null(v));
  j["per_frame"] = frames;
  return j;
}

void emit_json(const json& j, const std::string& path, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    io::write_file_atomic(path, text);
  }
}

std::string frames_ext(const fs::path& dir) {
  return io::list_frames(dir).front().extension().string();
}

struct Camera {
  double fov = 90.0, yaw = 0.0, pitch = 0.0, roll = 0.0;
  CameraParams params() const { return {fov, yaw, pitch, roll}; }
};

void add_camera(CLI::App* sub, Camera& cam) {
  sub->add_option("--fov", cam.fov, "Horizontal field of view (deg)")->capture_default_str();
  sub->add_option("--yaw", cam.yaw, "Yaw (deg)")->capture_default_str();
  sub->add_option("--pitch", cam.pitch, "Pitch (deg)")->capture_default_str();
  sub->add_option("--roll", cam.roll, "Roll (deg)")->capture_default_str();
}

using Action = std::function<void()>;

struct Runner {
  std::ostream& out;
  std::ostream& err;
  std::uint64_t seed = 0;
  Action action;
};

void add_project(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("project", "Render a perspective view of an ERP image");
  struct Opts {
    std::string erp, outp, size = "512x512";
    Camera cam;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--erp", o->erp, "Input ERP image")->required();
  sub->add_option("--out", o->outp, "Output perspective image")->required();
  sub->add_option("--size", o->size, "Output size WIDTHxHEIGHT")
      ->check(size_validator())
      ->capture_default_str();
  add_camera(sub, o->cam);
  sub->callback([o, &r] {
    r.action = [o] {
      const Size s = parse_size(o->size);
      io::write_image(pano2pers(io::read_image(o->erp), o->cam.params(), s.height, s.width),
                      o->outp);
    };
  });
}

void add_unproject(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("unproject", "Project a perspective image into ERP space");
  struct Opts {
    std::string pers, outp, mask;
    int height = 512;
    Camera cam;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--pers", o->pers, "Input perspective image")->required();
  sub->add_option("--out", o->outp, "Output ERP image")->required();
  sub->add_option("--mask", o->mask, "Output coverage mask (default <out>_mask.<ext>)");
  sub->add_option("--height", o->height, "ERP height (width = 2 * height)")
      ->check(CLI::Range(2, 1 << 15))
      ->capture_default_str();
  add_camera(sub, o->cam);
  sub->callback([o, &r] {
    r.action = [o] {
      const ProjectedConditioning pc =
          pers2pano(io::read_image(o->pers), o->cam.params(), o->height, 2 * o->height);
      fs::path mask = o->mask;
      if (mask.empty()) {
        const fs::path outp = o->outp;
        mask = outp.parent_path() /
               (outp.stem().string() + "_mask" + outp.extension().string());
      }
      io::write_image(pc.image, o->outp);
      io::write_image(pc.mask, mask);
    };
  });
}

void add_rotate(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("rotate", "Resample an ERP image under a rotation");
  struct Opts {
    std::string erp, outp;
    double yaw = 0.0, pitch = 0.0, roll = 0.0;
    std::vector<double> matrix;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--erp", o->erp, "Input ERP image")->required();
  sub->add_option("--out", o->outp, "Output ERP image")->required();
  auto* yaw = sub->add_option("--yaw", o->yaw, "Yaw (deg)");
  auto* pitch = sub->add_option("--pitch", o->pitch, "Pitch (deg)");
  auto* roll = sub->add_option("--roll", o->roll, "Roll (deg)");
  auto* matrix = sub->add_option("--matrix", o->matrix, "Row-major 3x3 rotation, 9 comma-separated values")
                     ->delimiter(',')
                     ->expected(9);
  matrix->excludes(yaw)->excludes(pitch)->excludes(roll);
  sub->callback([o, &r] {
    r.action = [o] {
      Rotation3 rot;
      if (!o->matrix.empty()) {
        Mat3 m;
        for (int k = 0; k < 9; ++k) m(k / 3, k % 3) = o->matrix[k];
        rot = Rotation3::from_matrix(m);
      } else {
        rot = rotation_from_ypr({90.0, o->yaw, o->pitch, o->roll});
      }
      io::write_image(rotate_erp(io::read_image(o->erp), rot), o->outp);
    };
  });
}

void add_cube(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("cube", "Convert between ERP and cubemap faces");
  struct Opts {
    std::string erp, faces, outp, out_dir, ext = ".png";
    int face_size = 256, height = 512;
  };
  auto o = std::make_shared<Opts>();
  auto* erp = sub->add_option("--erp", o->erp, "ERP input (to faces)");
  auto* faces = sub->add_option("--faces", o->faces, "Directory of face_<name> images (to ERP)");
  erp->excludes(faces);
  sub->add_option("--out-dir", o->out_dir, "Output directory for faces");
  sub->add_option("--out", o->outp, "Output ERP image");
  sub->add_option("--face-size", o->face_size, "Face size in pixels")
      ->check(CLI::Range(2, 1 << 15))
      ->capture_default_str();
  sub->add_option("--height", o->height, "ERP height for faces -> ERP")
      ->check(CLI::Range(2, 1 << 15))
      ->capture_default_str();
  sub->add_option("--ext", o->ext, "Face file extension")
      ->check(CLI::IsMember({".png", ".pten"}))
      ->capture_default_str();
  sub->callback([o, &r] {
    if (o->erp.empty() == o->faces.empty()) {
      throw CLI::ValidationError("cube", "exactly one of --erp or --faces is required");
    }
    if (!o->erp.empty() && o->out_dir.empty()) {
      throw CLI::RequiredError("--out-dir");
    }
    if (!o->faces.empty() && o->outp.empty()) {
      throw CLI::RequiredError("--out");
    }
    r.action = [o] {
      if (!o->erp.empty()) {
        const CubeMap cube = erp_to_cubemap(io::read_image(o->erp), o->face_size);
        fs::create_directories(o->out_dir);
        for (CubeFace f : kCubeFaces) {
          io::write_image(cube.face(f),
                          fs::path(o->out_dir) / ("face_" + std::string(face_name(f)) + o->ext));
        }
        return;
      }
      CubeMap cube;
      for (CubeFace f : kCubeFaces) {
        const std::string stem = "face_" + std::string(face_name(f));
        fs::path p = fs::path(o->faces) / (stem + ".png");
        if (!fs::exists(p)) p = fs::path(o->faces) / (stem + ".pten");
        cube.face(f) = io::read_image(p);
      }
      io::write_image(cubemap_to_erp(cube, o->height, 2 * o->height), o->outp);
    };
  });
}

void add_canonicalize(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("canonicalize", "Stabilize and gravity-align an ERP video");
  struct Opts {
    std::string frames, poses, outp;
    bool skip_gravity = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--frames", o->frames, "Input frames directory")->required();
  sub->add_option("--poses", o->poses, "Pose/gravity JSON")->required();
  sub->add_option("--out", o->outp, "Output frames directory")->required();
  sub->add_flag("--skip-gravity", o->skip_gravity, "Only stabilize");
  sub->callback([o, &r] {
    r.action = [o, &r] {
      const io::PoseGravity pg = io::load_pose_gravity(o->poses);
      const std::vector<Image> frames = io::read_frames(o->frames);
      std::vector<Image> out = stabilize(frames, pg.poses);
      if (!o->skip_gravity && !pg.gravity.empty()) {
        const Vec3 g = average_gravity(pg.gravity);
        out = gravity_align(out, g);
        r.out << "gravity " << scalar(g.x()) << " " << scalar(g.y()) << " " << scalar(g.z())
              << "\n";
      }
      io::write_frames(out, o->outp, frames_ext(o->frames));
    };
  });
}

void add_calibrate(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("calibrate", "Estimate fov, pitch and roll by exhaustive search");
  struct Opts {
    std::string pers, erp, json_path;
    int res = 64;
    bool search_yaw = false;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--pers", o->pers, "Perspective image")->required();
  sub->add_option("--erp", o->erp, "Panorama the image was taken from")->required();
  sub->add_option("--json", o->json_path, "Output JSON (default: standard output)");
  sub->add_option("--res", o->res, "Scoring render width")
      ->check(CLI::Range(2, 4096))
      ->capture_default_str();
  sub->add_flag("--search-yaw", o->search_yaw, "Also search yaw on a 10 degree ring");
  sub->callback([o, &r] {
    r.action = [o, &r] {
      SearchConfig cfg;
      cfg.render_res = o->res;
      cfg.search_yaw = o->search_yaw;
      const CalibResult res = calibrate(io::read_image(o->pers), io::read_image(o->erp), cfg);
      const json j = {{"fov_deg", res.best.fov_deg},     {"yaw_deg", res.best.yaw_deg},
                      {"pitch_deg", res.best.pitch_deg}, {"roll_deg", res.best.roll_deg},
                      {"residual", res.residual},       {"evaluations", res.evaluations}};
      emit_json(j, o->json_path, r.out);
    };
  });
}

void add_seam_score(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("seam-score", "Print the discontinuity score of an ERP image");
  struct Opts {
    std::string erp, json_path;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--erp", o->erp, "ERP image")->required();
  sub->add_option("--json", o->json_path, "Also write a metric report");
  sub->callback([o, &r] {
    r.action = [o, &r] {
      MetricReport rep;
      rep.name = "discontinuity_score";
      rep.value = discontinuity_score(io::read_image(o->erp));
      r.out << scalar(rep.value) << "\n";
      if (!o->json_path.empty()) emit_json(report_json(rep), o->json_path, r.out);
    };
  });
}

void add_encode(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("encode", "Encode an image to a latent grid");
  struct Opts {
    std::string in, outp, mode = "cle";
    int wprime = -1;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--in", o->in, "Input image")->required();
  sub->add_option("--out", o->outp, "Output latent (.pten)")->required();
  sub->add_option("--mode", o->mode, "Padding: zero, circular or cle")
      ->check(CLI::IsMember({"zero", "circular", "cle"}))
      ->capture_default_str();
  sub->add_option("--wprime", o->wprime, "Circular pad width for cle (default W/8)");
  sub->callback([o, &r] {
    r.action = [o] {
      const Image img = io::read_image(o->in);
      const LatentGrid lat = o->mode == "cle" ? circular_encode(img, o->wprime)
                                              : encode(img, parse_padding(o->mode));
      io::write_tensor(io::to_tensor(lat), o->outp);
    };
  });
}

void add_decode(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("decode", "Decode a latent grid to an image");
  struct Opts {
    std::string in, outp, mode = "cle";
    int pad = 2;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--in", o->in, "Input latent (.pten)")->required();
  sub->add_option("--out", o->outp, "Output image")->required();
  sub->add_option("--mode", o->mode, "Padding: zero, circular or cle")
      ->check(CLI::IsMember({"zero", "circular", "cle"}))
      ->capture_default_str();
  sub->add_option("--pad", o->pad, "Latent columns wrapped per side for cle")
      ->capture_default_str();
  sub->callback([o, &r] {
    r.action = [o] {
      const LatentGrid lat = io::to_grid(io::read_tensor(o->in), o->in);
      const Image img = o->mode == "cle" ? circular_decode(lat, o->pad)
                                         : decode(lat, parse_padding(o->mode));
      io::write_image(img, o->outp);
    };
  });
}

void add_simulate(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("simulate-traj", "Simulate a linear-motion camera trajectory");
  struct Opts {
    std::string outp;
    int frames = 49;
    std::vector<double> fov{30.0, 120.0}, pitch{-60.0, 60.0}, roll{-15.0, 15.0},
        yaw{-180.0, 180.0}, rate{0.5, 0.25, 0.1};
    double noise = 0.05;
    double real_prob = 0.0;
    std::vector<std::string> real;
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--out", o->outp, "Output trajectory JSON")->required();
  sub->add_option("--frames", o->frames, "Number of frames")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto range = [sub](const char* name, std::vector<double>& v, const char* help) {
    sub->add_option(name, v, help)->delimiter(',')->expected(2)->capture_default_str();
  };
  range("--fov-range", o->fov, "FoV range lo,hi (deg)");
  range("--pitch-range", o->pitch, "Pitch range lo,hi (deg)");
  range("--roll-range", o->roll, "Roll range lo,hi (deg)");
  range("--yaw-range", o->yaw, "Yaw range lo,hi (deg)");
  sub->add_option("--max-rate", o->rate, "Max yaw,pitch,roll rate (deg/frame)")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  sub->add_option("--noise-std", o->noise, "Per-frame noise std (deg)")->capture_default_str();
  sub->add_option("--real-prob", o->real_prob,
                  "Probability of emitting one of the --real trajectories instead")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_option("--real", o->real, "Real trajectory JSON files to mix in");
  sub->callback([o, &r] {
    r.action = [o, &r] {
      // The mixing draw uses its own stream so the simulated path is the same
      // whether or not real trajectories are supplied.
      SplitMix64 mix(~r.seed);
      if (!o->real.empty() && mix.uniform() < o->real_prob) {
        const std::size_t pick = std::min(
            o->real.size() - 1, static_cast<std::size_t>(mix.uniform() * o->real.size()));
        Trajectory real = io::load_trajectory(o->real[pick]);
        if (real.size() < static_cast<std::size_t>(o->frames)) {
          throw FormatError(o->real[pick] + ": trajectory shorter than --frames");
        }
        real.frames.resize(static_cast<std::size_t>(o->frames));
        io::save_trajectory(real, o->outp);
        return;
      }
      SimConfig cfg;
      cfg.frames = o->frames;
      cfg.ranges.fov = {o->fov[0], o->fov[1]};
      cfg.ranges.pitch = {o->pitch[0], o->pitch[1]};
      cfg.ranges.roll = {o->roll[0], o->roll[1]};
      cfg.ranges.yaw = {o->yaw[0], o->yaw[1]};
      cfg.max_rate = {o->rate[0], o->rate[1], o->rate[2]};
      cfg.noise_std_deg = o->noise;
      cfg.seed = r.seed;
      io::save_trajectory(simulate_trajectory(cfg), o->outp);
    };
  });
}

void add_crop(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("crop", "Crop perspective frames from an ERP video");
  struct Opts {
    std::string frames, traj, outp, size = "512x512";
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--frames", o->frames, "ERP frames directory")->required();
  sub->add_option("--traj", o->traj, "Trajectory JSON")->required();
  sub->add_option("--out", o->outp, "Output frames directory")->required();
  sub->add_option("--size", o->size, "Crop size WIDTHxHEIGHT")
      ->check(size_validator())
      ->capture_default_str();
  sub->callback([o, &r] {
    r.action = [o] {
      const Size s = parse_size(o->size);
      const auto crops =
          crop_video(io::read_frames(o->frames), io::load_trajectory(o->traj), s.height, s.width);
      io::write_frames(crops, o->outp, frames_ext(o->frames));
    };
  });
}

void add_mask_psnr(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("mask-psnr", "PSNR over the trajectory-covered ERP region");
  struct Opts {
    std::string gt, gen, traj, json_path, size = "512x512";
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--gt", o->gt, "Ground-truth ERP frames directory")->required();
  sub->add_option("--gen", o->gen, "Generated ERP frames directory")->required();
  sub->add_option("--traj", o->traj, "Trajectory JSON")->required();
  sub->add_option("--size", o->size, "Perspective size WIDTHxHEIGHT")
      ->check(size_validator())
      ->capture_default_str();
  sub->add_option("--json", o->json_path, "Also write the metric report");
  sub->callback([o, &r] {
    r.action = [o, &r] {
      const Size s = parse_size(o->size);
      const MetricReport rep = masked_psnr(io::read_frames(o->gt), io::read_frames(o->gen),
                                           io::load_trajectory(o->traj), s.height, s.width);
      r.out << scalar(rep.value) << "\n";
      if (!o->json_path.empty()) emit_json(report_json(rep), o->json_path, r.out);
    };
  });
}

void add_equivariance(CLI::App& app, Runner& r) {
  auto* sub = app.add_subcommand("equivariance", "Latent half-turn shift-equivariance error");
  struct Opts {
    std::string erp, json_path, mode = "cle";
  };
  auto o = std::make_shared<Opts>();
  sub->add_option("--erp", o->erp, "ERP image (width multiple of 64)")->required();
  sub->add_option("--mode", o->mode, "Encoder: zero or cle")
      ->check(CLI::IsMember({"zero", "cle"}))
      ->capture_default_str();
  sub->add_option("--json", o->json_path, "Also write the metric report");
  sub->callback([o, &r] {
    r.action = [o, &r] {
      MetricReport rep;
      rep.name = "latent_equivariance_error";
      rep.value = latent_equivariance_error(io::read_image(o->erp), o->mode == "cle");
      r.out << scalar(rep.value) << "\n";
      if (!o->json_path.empty()) emit_json(report_json(rep), o->json_path, r.out);
    };
  });
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equirectangular geometry, latent seam and calibration toolkit", "panolift"};
  app.require_subcommand(1);
  app.fallthrough();
  Runner runner{out, err, 0, {}};
  app.add_option("--seed", runner.seed, "Seed for every random draw")->capture_default_str();

  add_project(app, runner);
  add_unproject(app, runner);
  add_rotate(app, runner);
  add_cube(app, runner);
  add_canonicalize(app, runner);
  add_calibrate(app, runner);
  add_seam_score(app, runner);
  add_encode(app, runner);
  add_decode(app, runner);
  add_simulate(app, runner);
  add_crop(app, runner);
  add_mask_psnr(app, runner);
  add_equivariance(app, runner);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (runner.action) runner.action();
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const EmptyMaskError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace panolift::cli
