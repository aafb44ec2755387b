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

#include <Eigen/Geometry>
#include <random>

#include "panolift/canonicalize.hpp"
#include "panolift/error.hpp"
#include "panolift/metrics.hpp"
#include "panolift/projection.hpp"
#include "test_support.hpp"

using namespace panolift;
using namespace panolift::testing;

namespace {

double angle_between(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0));
}

Vec3 perturb(const Vec3& v, double max_deg, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0, 1);
  Vec3 axis(n(gen), n(gen), n(gen));
  axis = axis.cross(v).normalized();
  std::uniform_real_distribution<double> u(0, max_deg * kPi / 180.0);
  return Eigen::AngleAxisd(u(gen), axis) * v;
}

// Soft horizon band around the great circle orthogonal to `up`.
SceneFn horizon_scene(const Vec3& up) {
  return [up](const Vec3& d, float* out) {
    const float v = static_cast<float>(0.5 + 0.4 * std::tanh(3.0 * d.dot(up)));
    out[0] = out[1] = out[2] = v;
  };
}

double mean_row_variance(const Image& img) {
  double total = 0;
  for (int i = 0; i < img.height(); ++i) {
    for (int c = 0; c < img.channels(); ++c) {
      double s = 0, s2 = 0;
      for (int j = 0; j < img.width(); ++j) {
        s += img.at(i, j, c);
        s2 += double(img.at(i, j, c)) * img.at(i, j, c);
      }
      const double m = s / img.width();
      total += s2 / img.width() - m * m;
    }
  }
  return total / (img.height() * img.channels());
}

}  // namespace

TEST_CASE("stabilize") {
  const Image f0 = render_scene(TexturedScene(1), 32);
  SUBCASE("identity poses leave frames unchanged") {
    const std::vector<Image> frames = {f0, roll_columns(f0, 3), roll_columns(f0, 9)};
    const auto out = stabilize(frames, PoseList(3));
    CHECK(out == frames);
    CHECK(stabilize(out, PoseList(3)) == out);
  }
  SUBCASE("a one-column yaw step is undone exactly") {
    // Camera turned by one column: its panorama is the world shifted left.
    const Rotation3 r1 = rotation_from_ypr({90, 360.0 / 64, 0, 0});
    const Image f1 = roll_columns(f0, -1);
    const auto out = stabilize({f0, f1}, {Rotation3::identity(), r1});
    CHECK(out[0] == f0);
    CHECK(out[1] == f0);
  }
  SUBCASE("small random rotations on band-limited video") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> a(-8, 8);
    const Rotation3 r0 = rotation_from_ypr({90, 20, 5, -3});
    std::vector<Image> frames;
    PoseList poses;
    for (int k = 0; k < 4; ++k) {
      const Rotation3 rk = k == 0 ? r0 : rotation_from_ypr({90, 20 + a(gen), 5 + a(gen), -3 + a(gen)});
      poses.push_back(rk);
      // Camera-frame panorama: value at camera direction d is world(R_k d).
      frames.push_back(render_scene(rotated_scene(band_limited, rk.matrix()), 128));
    }
    const Image want = frames[0];
    const auto out = stabilize(frames, poses);
    CHECK(out[0] == want);
    for (int k = 1; k < 4; ++k) CHECK(mean_abs_diff(out[k], want) < 0.02);
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(stabilize({f0, f0}, PoseList(1)), InvalidArgument);
  }
}

TEST_CASE("average_gravity") {
  SUBCASE("equal estimates") {
    const Vec3 v = Vec3(0.1, -0.9, 0.2).normalized();
    const Vec3 got = average_gravity(std::vector<Vec3>(10, v));
    CHECK(angle_between(got, v) < 1e-9);
    CHECK(angle_between(average_gravity({v}), v) < 1e-12);
  }
  SUBCASE("planted outliers are rejected") {
    std::mt19937_64 gen(4);
    const Vec3 down(0, -1, 0);
    std::vector<Vec3> est;
    for (int k = 0; k < 95; ++k) est.push_back(perturb(down, 0.5, gen));
    for (int k = 0; k < 5; ++k) {
      std::normal_distribution<double> n(0, 1);
      const Vec3 axis = Vec3(n(gen), 0, n(gen)).normalized();
      est.push_back(Eigen::AngleAxisd(30.0 * kPi / 180.0, axis) * down);
    }
    Vec3 clean = Vec3::Zero();
    for (int k = 0; k < 95; ++k) clean += est[k];
    const Vec3 got = average_gravity(est);
    CHECK(std::abs(got.norm() - 1.0) < 1e-12);
    CHECK(angle_between(got, clean) * 180.0 / kPi < 0.5);
    CHECK(angle_between(got, down) * 180.0 / kPi < 0.5);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(average_gravity({}), InvalidArgument);
    CHECK_THROWS_AS(average_gravity({Vec3(0, 1, 0), Vec3(0, -1, 0)}), InvalidArgument);
  }
}

TEST_CASE("gravity_align") {
  const Image img = render_scene(TexturedScene(3), 32);
  SUBCASE("down gravity is a bit-exact identity") {
    CHECK(gravity_align(img, Vec3(0, -1, 0)) == img);
    const std::vector<Image> v = {img, roll_columns(img, 5)};
    CHECK(gravity_align(v, Vec3(0, -1, 0)) == v);
  }
  SUBCASE("tilted horizon becomes straight") {
    const Vec3 g(0, 0, -1);
    const Image tilted = render_scene(horizon_scene(-g), 64);
    CHECK(mean_row_variance(tilted) > 1e-2);
    const Image level = gravity_align(tilted, g);
    CHECK(mean_row_variance(level) < 1e-3);
    // Sky ends up on top.
    CHECK(level.at(2, 10) > level.at(61, 10));
  }
  SUBCASE("aligning twice is idempotent") {
    const Vec3 g = Vec3(0.2, -0.9, 0.3).normalized();
    const Image smooth = render_scene(band_limited, 128);
    const Image once = gravity_align(smooth, g);
    CHECK(mean_abs_diff(gravity_align(once, Vec3(0, -1, 0)), once) < 0.02);
  }
  SUBCASE("alignment rotation maps gravity to -Y") {
    const Vec3 g = Vec3(-0.3, -0.5, 0.8).normalized();
    CHECK((gravity_alignment(g) * g - Vec3(0, -1, 0)).norm() < 1e-12);
  }
}

TEST_CASE("yaw_shift_augment") {
  const Image img = render_scene(TexturedScene(6), 32);
  CHECK(yaw_shift_augment(img, 0) == img);
  CHECK(yaw_shift_augment(img, 64) == img);
  CHECK(yaw_shift_augment(img, -128) == img);
  CHECK(yaw_shift_augment(yaw_shift_augment(img, 32), 32) == img);
  CHECK(yaw_shift_augment(img, 7).at(4, 7, 1) == img.at(4, 0, 1));
  CHECK_THROWS_AS(yaw_shift_augment(Image(8, 8, 3), 1), InvalidArgument);

  // A wrap-continuous image stays seam-free wherever the seam lands.
  const Image smooth = periodic_sinusoid(32, 1);
  for (long k : {1L, 13L, 40L}) {
    const Image shifted = yaw_shift_augment(smooth, k);
    CHECK(discontinuity_score(shifted) < 0.5);
    Image stepped = shifted;
    for (int i = 0; i < 32; ++i)
      for (int j = 32; j < 64; ++j)
        for (int c = 0; c < 3; ++c) stepped.at(i, j, c) += 0.1f;
    CHECK(discontinuity_score(shifted) <= discontinuity_score(stepped));
  }
}
