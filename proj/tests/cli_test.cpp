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

#include <doctest.h>

#include <nlohmann/json.hpp>

#include "cli_scenarios.hpp"
#include "panolift/calibrate.hpp"
#include "panolift/canonicalize.hpp"
#include "panolift/codec.hpp"
#include "panolift/metrics.hpp"

using namespace panolift;
using namespace panolift::testing;
namespace fs = std::filesystem;

namespace {

const fs::path& inputs() {
  static const fs::path dir = [] {
    const fs::path d = temp_dir("cli_inputs");
    write_cli_inputs(d);
    return d;
  }();
  return dir;
}

const std::map<std::string, CliRun>& default_runs() {
  static const auto runs = run_every_subcommand(inputs(), temp_dir("cli_out"), "0");
  return runs;
}

fs::path out_dir() { return fs::temp_directory_path() / "panolift_test_cli_out"; }

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(io::read_file(p)); }

}  // namespace

TEST_CASE("every subcommand succeeds") {
  for (const auto& [name, run] : default_runs()) {
    INFO(name << ": " << run.err);
    CHECK(run.code == cli::kExitOk);
  }
}

TEST_CASE("subcommands delegate to the library") {
  const auto& runs = default_runs();
  const Image erp = io::read_image(inputs() / "erp.png");

  CHECK(io::read_image(out_dir() / "view.png") ==
        io::read_image([&] {
          const fs::path p = out_dir() / "view_ref.png";
          io::write_image(pano2pers(erp, {90, 30, -10, 5}, 32, 48), p);
          return p;
        }()));

  const Image pers = io::read_image(inputs() / "pers.png");
  const ProjectedConditioning pc = pers2pano(pers, {60, 0, 10, 2.5}, 64, 128);
  CHECK(io::read_image(out_dir() / "splat.pten") == pc.image);
  CHECK(io::read_image(out_dir() / "splat_mask.pten") == pc.mask);

  const Rotation3 turn = Rotation3::from_matrix((Mat3() << 0, 0, 1, 0, 1, 0, -1, 0, 0).finished());
  CHECK(io::read_image(out_dir() / "rot_m.pten") == rotate_erp(io::read_image(inputs() / "erp.pten"), turn));

  const CubeMap cube = erp_to_cubemap(erp, 32);
  for (CubeFace f : kCubeFaces) {
    const fs::path p = out_dir() / "faces" / ("face_" + std::string(face_name(f)) + ".png");
    REQUIRE(fs::exists(p));
    CHECK(io::read_image(p).same_shape(cube.face(f)));
  }
  CHECK(io::read_image(out_dir() / "cube_erp.png").width() == 128);

  const auto canon = io::read_frames(out_dir() / "canon");
  CHECK(canon.size() == 3);
  CHECK(runs.at("canonicalize").out.find("gravity") != std::string::npos);

  const nlohmann::json calib = read_json(out_dir() / "calib.json");
  for (const char* key : {"fov_deg", "yaw_deg", "pitch_deg", "roll_deg", "residual", "evaluations"})
    CHECK(calib.contains(key));
  SearchConfig cfg;
  cfg.render_res = 16;
  const CalibResult direct = calibrate(pers, erp, cfg);
  CHECK(calib["fov_deg"].get<double>() == doctest::Approx(direct.best.fov_deg));
  CHECK(calib["evaluations"].get<std::uint64_t>() == direct.evaluations);

  // seam-score prints the DS as a decimal.
  CHECK(std::stod(runs.at("seam-score").out) == doctest::Approx(discontinuity_score(erp)).epsilon(1e-6));
  CHECK(read_json(out_dir() / "ds.json")["value"].get<double>() ==
        doctest::Approx(discontinuity_score(erp)).epsilon(1e-6));

  CHECK(io::read_image(out_dir() / "lat.pten") == circular_encode(erp));
  CHECK(io::read_image(out_dir() / "lat_zero.pten") == encode(erp, PaddingMode::kZero));
  CHECK(io::read_image(out_dir() / "dec.pten") == circular_decode(circular_encode(erp), 2));

  const Trajectory traj = io::load_trajectory(out_dir() / "traj.json");
  CHECK(traj.size() == 3);
  CHECK(traj.source == TrajectorySource::kSimulated);
  SimConfig sim;
  sim.frames = 3;
  sim.seed = 0;
  CHECK(traj.frames == simulate_trajectory(sim).frames);

  const auto crops = io::read_frames(out_dir() / "crops");
  REQUIRE(crops.size() == 3);
  CHECK(crops[0].height() == 16);
  CHECK(crops[0].width() == 24);

  const nlohmann::json psnr = read_json(out_dir() / "psnr.json");
  CHECK(psnr["value"].get<double>() > 20.0);
  CHECK(psnr["coverage"].get<double>() > 0.0);

  const double eq = std::stod(runs.at("equivariance").out);
  CHECK(eq == doctest::Approx(latent_equivariance_error(erp, false)).epsilon(1e-6));
}

TEST_CASE("seeded runs are byte-identical") {
  const auto a = run_every_subcommand(inputs(), temp_dir("cli_seed_a"), "7");
  const auto b = run_every_subcommand(inputs(), temp_dir("cli_seed_b"), "7");
  for (const auto& [name, run] : a) {
    CHECK(run.code == 0);
    CHECK(run.out == b.at(name).out);
  }
  const fs::path da = fs::temp_directory_path() / "panolift_test_cli_seed_a";
  const fs::path db = fs::temp_directory_path() / "panolift_test_cli_seed_b";
  std::size_t files = 0;
  for (const auto& e : fs::recursive_directory_iterator(da)) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), da);
    CHECK(io::read_file(e.path()) == io::read_file(db / rel));
    ++files;
  }
  CHECK(files > 20);
  // A different seed changes the simulated trajectory.
  const auto c = run_every_subcommand(inputs(), temp_dir("cli_seed_c"), "8");
  CHECK(io::read_file(fs::temp_directory_path() / "panolift_test_cli_seed_c" / "traj.json") !=
        io::read_file(da / "traj.json"));
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run_cli({}).code == cli::kExitUsage);
  CHECK(run_cli({"frobnicate"}).code == cli::kExitUsage);
  const CliRun unknown = run_cli({"seam-score", "--erp", "x.png", "--bogus"});
  CHECK(unknown.code == cli::kExitUsage);
  CHECK(!unknown.err.empty());
  CHECK(run_cli({"project", "--erp", "x.png"}).code == cli::kExitUsage);
  CHECK(run_cli({"project", "--erp", "x.png", "--out", "y.png", "--size", "12by4"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"rotate", "--erp", "x.png", "--out", "y.png", "--yaw", "3", "--matrix",
                 "1,0,0,0,1,0,0,0,1"})
            .code == cli::kExitUsage);
  CHECK(run_cli({"encode", "--in", "x.png", "--out", "y.pten", "--mode", "sideways"}).code ==
        cli::kExitUsage);
  CHECK(run_cli({"cube", "--face-size", "8"}).code == cli::kExitUsage);
  CHECK(run_cli({"--seed", "abc", "seam-score", "--erp", "x.png"}).code == cli::kExitUsage);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("data errors exit with 2") {
  const fs::path dir = temp_dir("cli_errors");
  const auto I = [&](const char* p) { return (inputs() / p).string(); };
  const CliRun missing = run_cli({"seam-score", "--erp", (dir / "nope.png").string()});
  CHECK(missing.code == cli::kExitData);
  CHECK(missing.err.find("nope.png") != std::string::npos);

  io::write_file_atomic(dir / "bad.json", "[{\"fov_deg\": 0, \"yaw_deg\": 0, \"pitch_deg\": 0, \"roll_deg\": 0}]");
  CHECK(run_cli({"crop", "--frames", I("video"), "--traj", (dir / "bad.json").string(), "--out",
                 (dir / "c").string()})
            .code == cli::kExitData);
  CHECK(run_cli({"project", "--erp", I("erp.png"), "--fov", "190", "--out", (dir / "v.png").string()})
            .code == cli::kExitData);
  CHECK(run_cli({"rotate", "--erp", I("erp.png"), "--matrix", "1,0,0,0,1,0,0,0,2", "--out",
                 (dir / "r.png").string()})
            .code == cli::kExitData);
  io::write_image(Image(40, 80, 3), dir / "odd.pten");
  CHECK(run_cli({"equivariance", "--erp", (dir / "odd.pten").string()}).code == cli::kExitData);
  CHECK(run_cli({"encode", "--in", I("erp.png"), "--wprime", "12", "--out", (dir / "l.pten").string()})
            .code == cli::kExitData);
  io::write_file_atomic(dir / "poses.json", R"({"poses":[[1,0,0,0,1,0,0,0,1]]})");
  CHECK(run_cli({"canonicalize", "--frames", I("video"), "--poses", (dir / "poses.json").string(),
                 "--out", (dir / "canon").string()})
            .code == cli::kExitData);
  // Real trajectory shorter than the requested length.
  CHECK(run_cli({"simulate-traj", "--frames", "10", "--real-prob", "1", "--real", I("real.json"),
                 "--out", (dir / "t.json").string()})
            .code == cli::kExitData);
  // Nothing is left behind by failed writes.
  CHECK(!fs::exists(dir / "v.png"));
}

TEST_CASE("real trajectories are mixed in by probability") {
  const fs::path dir = temp_dir("cli_real");
  const auto I = [&](const char* p) { return (inputs() / p).string(); };
  REQUIRE(run_cli({"simulate-traj", "--frames", "2", "--real-prob", "1", "--real", I("real.json"),
                   "--out", (dir / "t.json").string()})
              .code == 0);
  const Trajectory t = io::load_trajectory(dir / "t.json");
  CHECK(t.source == TrajectorySource::kReal);
  CHECK(t.size() == 2);
  CHECK(t.frames[1].yaw_deg == 11.0);
  REQUIRE(run_cli({"simulate-traj", "--frames", "2", "--real-prob", "0", "--real", I("real.json"),
                   "--out", (dir / "s.json").string()})
              .code == 0);
  CHECK(io::load_trajectory(dir / "s.json").source == TrajectorySource::kSimulated);
}
