#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>

#include "doctest.h"
#include "sbv/geometry.hpp"
#include "sbv/rng.hpp"

using namespace sbv;

TEST_CASE("aabb clip basics") {
  const Aabb box = scene_aabb();
  double t0, t1;
  CHECK(box.clip({0, 0, 3}, {0, 0, -1}, t0, t1));
  CHECK(t0 == doctest::Approx(2.0));
  CHECK(t1 == doctest::Approx(4.0));
  // origin inside
  CHECK(box.clip({0, 0, 0}, {1, 0, 0}, t0, t1));
  CHECK(t0 == doctest::Approx(-1.0));
  CHECK(t1 == doctest::Approx(1.0));
  // parallel to a slab, outside it
  CHECK_FALSE(box.clip({0, 2, 3}, {0, 0, -1}, t0, t1));
  // clean miss
  CHECK_FALSE(box.clip({5, 5, 5}, {1, 0, 0}, t0, t1));
  CHECK(box.contains({0.5, -0.5, 0.99}));
  CHECK_FALSE(box.contains({0.5, -1.5, 0.0}));
}

TEST_CASE("center pixel of an axis-aligned camera") {
  const CameraPose cam =
      CameraPose::look_at({0, 0, 3}, {0, 0, 0}, 64, 64, 0.7 * 64);
  // width 64 → center pixel index 31.5 maps through (px+0.5) to cx exactly
  const Ray ray = pixel_ray(cam, 31.5, 31.5);
  CHECK(ray.direction.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ray.direction.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ray.direction.z == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ray.t_near == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ray.t_far == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("pixel rays are unit norm and re-project to the pixel center") {
  const Aabb wide{{-10, -10, -10}, {10, 10, 10}};
  const auto rig = hemisphere_rig(10, 3.0, 5.0, 80.0, /*seed=*/17);
  Rng rng(2024);
  for (int k = 0; k < 1000; ++k) {
    const CameraPose& cam = rig[k % rig.size()];
    const double px = rng.uniform(0.0, cam.width - 1e-9);
    const double py = rng.uniform(0.0, cam.height - 1e-9);
    const Ray ray = pixel_ray(cam, px, py, wide);
    REQUIRE(std::abs(ray.direction.norm() - 1.0) < 1e-9);
    REQUIRE(ray.t_near < ray.t_far);
    double qx, qy;
    cam.project(ray.at(1.0), qx, qy);
    REQUIRE(std::abs(qx - px) < 1e-6);
    REQUIRE(std::abs(qy - py) < 1e-6);
  }
}

TEST_CASE("ray that misses the scene box throws") {
  // Corner pixel of a wide-angle camera far from the box.
  const CameraPose cam =
      CameraPose::look_at({0, 0, 8}, {0, 0, 0}, 64, 64, 0.2 * 64);
  CHECK_THROWS_AS(pixel_ray(cam, 0, 0), RayMissesScene);
}

TEST_CASE("camera_distance examples and metric properties") {
  CameraPose a, b;
  a.position = {0, 0, 0};
  b.position = {3, 4, 0};
  CHECK(camera_distance(a, a) == 0.0);
  CHECK(camera_distance(a, b) == doctest::Approx(5.0).epsilon(1e-15));

  Rng rng(7);
  for (int k = 0; k < 200; ++k) {
    CameraPose p, q, r;
    p.position = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    q.position = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    r.position = {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
    const double dx = p.position.x - q.position.x;
    const double dy = p.position.y - q.position.y;
    const double dz = p.position.z - q.position.z;
    const double naive = std::sqrt(dx * dx + dy * dy + dz * dz);
    REQUIRE(camera_distance(p, q) == naive);
    REQUIRE(std::abs(camera_distance(p, q) - camera_distance(q, p)) <= 1e-12);
    REQUIRE(camera_distance(p, r) <=
            camera_distance(p, q) + camera_distance(q, r) + 1e-12);
  }
}

TEST_CASE("hemisphere rig geometry") {
  SUBCASE("single pose at pinned elevation") {
    const auto rig = hemisphere_rig(1, 3.0, 30.0, 30.0, 5);
    REQUIRE(rig.size() == 1);
    CHECK(rig[0].position.norm() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rig[0].position.y == doctest::Approx(3.0 * 0.5).epsilon(1e-12));
  }
  SUBCASE("radius and elevation range hold for every pose") {
    const auto rig = hemisphere_rig(100, 3.0, 10.0, 70.0, 5);
    REQUIRE(rig.size() == 100);
    for (const auto& p : rig) {
      REQUIRE(std::abs(p.position.norm() - 3.0) < 1e-9);
      const double elev =
          std::asin(p.position.y / p.position.norm()) * 180.0 / M_PI;
      REQUIRE(elev >= 10.0 - 1e-9);
      REQUIRE(elev <= 70.0 + 1e-9);
      // looks at the origin
      const Vec3 to_origin = (Vec3{0, 0, 0} - p.position).normalized();
      REQUIRE(to_origin.dot(p.forward) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("bit-deterministic per seed, azimuths move with the seed") {
    const auto a = hemisphere_rig(100, 3.0, 10.0, 70.0, 5);
    const auto b = hemisphere_rig(100, 3.0, 10.0, 70.0, 5);
    const auto c = hemisphere_rig(100, 3.0, 10.0, 70.0, 6);
    bool same_ab = true, same_ac = true;
    for (int i = 0; i < 100; ++i) {
      same_ab &= a[i].position.x == b[i].position.x &&
                 a[i].position.y == b[i].position.y &&
                 a[i].position.z == b[i].position.z;
      same_ac &= a[i].position.x == c[i].position.x &&
                 a[i].position.z == c[i].position.z;
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
  }
}

TEST_CASE("imbalanced rig bands") {
  const Rig rig = imbalanced_rig(60, 10, 10, 3.0, 11);
  REQUIRE(rig.poses.size() == 80);
  REQUIRE(rig.bands.size() == 80);
  int n_common = 0, n_high = 0, n_low = 0;
  for (std::size_t i = 0; i < rig.poses.size(); ++i) {
    const double elev =
        std::asin(rig.poses[i].position.y / rig.poses[i].position.norm()) *
        180.0 / M_PI;
    switch (rig.bands[i]) {
      case ViewBand::Common:
        ++n_common;
        REQUIRE(elev >= 10.0 - 1e-9);
        REQUIRE(elev <= 35.0 + 1e-9);
        break;
      case ViewBand::High:
        ++n_high;
        REQUIRE(elev >= 55.0 - 1e-9);
        REQUIRE(elev <= 80.0 + 1e-9);
        break;
      case ViewBand::Low:
        ++n_low;
        REQUIRE(elev >= -10.0 - 1e-9);
        REQUIRE(elev <= 5.0 + 1e-9);
        break;
    }
  }
  CHECK(n_common == 60);
  CHECK(n_high == 10);
  CHECK(n_low == 10);
  // block order: common first, then high, then low
  CHECK(rig.bands.front() == ViewBand::Common);
  CHECK(rig.bands[60] == ViewBand::High);
  CHECK(rig.bands[70] == ViewBand::Low);

  const Rig test_split = imbalanced_rig(4, 4, 2, 3.0, 12);
  CHECK(test_split.poses.size() == 10);
  const Rig single = imbalanced_rig(0, 1, 0, 3.0, 13);
  REQUIRE(single.poses.size() == 1);
  CHECK(single.bands[0] == ViewBand::High);
}

TEST_CASE("rig json round trip") {
  Rig rig = imbalanced_rig(3, 2, 1, 3.0, 21);
  const std::string path = "tmp_rig_roundtrip.json";
  save_rig(path, rig);
  const Rig back = load_rig(path);
  REQUIRE(back.poses.size() == rig.poses.size());
  for (std::size_t i = 0; i < rig.poses.size(); ++i) {
    const auto& p = rig.poses[i];
    const auto& q = back.poses[i];
    CHECK(p.position.x == q.position.x);
    CHECK(p.position.y == q.position.y);
    CHECK(p.position.z == q.position.z);
    CHECK(p.right.x == q.right.x);
    CHECK(p.down.y == q.down.y);
    CHECK(p.forward.z == q.forward.z);
    CHECK(p.focal == q.focal);
    CHECK(p.width == q.width);
    CHECK(rig.bands[i] == back.bands[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("camera rotation is orthonormal with determinant +1") {
  const auto rig = hemisphere_rig(25, 3.0, -10.0, 80.0, 3);
  for (const auto& p : rig) {
    REQUIRE(std::abs(p.right.norm() - 1.0) < 1e-12);
    REQUIRE(std::abs(p.down.norm() - 1.0) < 1e-12);
    REQUIRE(std::abs(p.forward.norm() - 1.0) < 1e-12);
    REQUIRE(std::abs(p.right.dot(p.down)) < 1e-12);
    REQUIRE(std::abs(p.right.dot(p.forward)) < 1e-12);
    REQUIRE(std::abs(p.down.dot(p.forward)) < 1e-12);
    const double det = p.right.cross(p.down).dot(p.forward);
    REQUIRE(det == doctest::Approx(1.0).epsilon(1e-12));
  }
}
