#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sbv/image.hpp"
#include "sbv/rng.hpp"

using namespace sbv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("quantization is clamped round-half-up") {
  Image img(4, 1);
  img.at(0, 0, 0) = 0.5 / 255.0;          // exactly halfway → rounds up to 1
  img.at(0, 0, 1) = 0.4999 / 255.0;       // below halfway → 0
  img.at(0, 0, 2) = 1.0;                  // → 255
  img.at(1, 0, 0) = -0.25;                // clamped → 0
  img.at(1, 0, 1) = 2.0;                  // clamped → 255
  img.at(2, 0, 0) = 254.5 / 255.0;        // → 255
  img.at(3, 0, 2) = 100.0 / 255.0;        // exact byte → 100
  const std::string path = "tmp_quant.ppm";
  write_ppm(path, img);
  const std::string raw = slurp(path);
  // header "P6\n4 1\n255\n" is 11 bytes
  REQUIRE(raw.size() == 11 + 12);
  const auto* b = reinterpret_cast<const unsigned char*>(raw.data() + 11);
  CHECK(b[0] == 1);
  CHECK(b[1] == 0);
  CHECK(b[2] == 255);
  CHECK(b[3] == 0);
  CHECK(b[4] == 255);
  CHECK(b[6] == 255);
  CHECK(b[11] == 100);
  std::remove(path.c_str());
}

TEST_CASE("ppm round trip and byte stability") {
  Rng rng(31);
  Image img(17, 9);
  for (double& v : img.data) v = rng.uniform();
  const std::string p1 = "tmp_rt1.ppm";
  const std::string p2 = "tmp_rt2.ppm";
  write_ppm(p1, img);
  const Image back = read_ppm(p1);
  REQUIRE(back.width == img.width);
  REQUIRE(back.height == img.height);
  // Quantization already happened on write, so a second pass is lossless.
  write_ppm(p2, back);
  CHECK(slurp(p1) == slurp(p2));
  const Image back2 = read_ppm(p2);
  CHECK(back.data == back2.data);
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("read rejects bad files") {
  const std::string path = "tmp_bad.ppm";
  {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n2 2\n255\n";
  }
  CHECK_THROWS(read_ppm(path));
  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n2 2\n255\nab";  // truncated body
  }
  CHECK_THROWS(read_ppm(path));
  CHECK_THROWS(read_ppm("does_not_exist.ppm"));
  std::remove(path.c_str());
}

TEST_CASE("header comments are tolerated") {
  const std::string path = "tmp_comment.ppm";
  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n# made by hand\n2 1\n255\n";
    const unsigned char px[6] = {10, 20, 30, 40, 50, 60};
    out.write(reinterpret_cast<const char*>(px), 6);
  }
  const Image img = read_ppm(path);
  REQUIRE(img.width == 2);
  REQUIRE(img.height == 1);
  CHECK(img.at(0, 0, 0) == doctest::Approx(10.0 / 255.0));
  CHECK(img.at(1, 0, 2) == doctest::Approx(60.0 / 255.0));
  std::remove(path.c_str());
}
