#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "avgrade/core/hash.hpp"
#include "avgrade/core/image.hpp"
#include "avgrade/core/io_image.hpp"
#include "avgrade/core/parallel.hpp"
#include "avgrade/core/rng.hpp"

using namespace avgrade;

TEST_CASE("rng streams are deterministic and split streams differ") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) REQUIRE(a.next_u64() == b.next_u64());

  Rng c(derive_seed(42, 1)), d(derive_seed(42, 2));
  REQUIRE(c.next_u64() != d.next_u64());
  REQUIRE(derive_seed(42, 1, 2) != derive_seed(42, 2, 1));
}

TEST_CASE("rng uniform stays in range") {
  Rng rng(7);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    int v = rng.uniform_int(-3, 5);
    REQUIRE(v >= -3);
    REQUIRE(v <= 5);
  }
}

TEST_CASE("rng normal has sane first moments") {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  REQUIRE(std::abs(sum / n) < 0.03);
  REQUIRE(std::abs(sq / n - 1.0) < 0.05);
}

TEST_CASE("png round trip") {
  Rng rng(3);
  ImageU8 img(37, 23, 3);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.next_u64());
  auto bytes = encode_png(img);
  ImageU8 back = decode_png(bytes);
  REQUIRE(back == img);

  // deterministic bytes for identical pixels
  REQUIRE(encode_png(img) == bytes);
}

TEST_CASE("png gray round trip") {
  ImageU8 img(5, 4, 1);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<std::uint8_t>(13 * i);
  REQUIRE(decode_png(encode_png(img)) == img);
}

TEST_CASE("pnm round trip") {
  Rng rng(5);
  ImageU8 img(16, 9, 3);
  for (auto& v : img.data) v = static_cast<std::uint8_t>(rng.next_u64());
  REQUIRE(decode_pnm(encode_pnm(img)) == img);
}

TEST_CASE("save and load by extension") {
  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "avgrade_io_test";
  fs::create_directories(dir);
  ImageU8 img(8, 8, 3);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<std::uint8_t>(i * 7);
  for (const char* name : {"a.png", "a.ppm"}) {
    auto path = (dir / name).string();
    save_image(path, img);
    REQUIRE(load_image(path) == img);
  }
  fs::remove_all(dir);
}

TEST_CASE("parallel_for covers every index exactly once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 4);
  for (int h : hits) REQUIRE(h == 1);
}

TEST_CASE("fnv1a64 distinguishes inputs") {
  REQUIRE(fnv1a64(std::string("a")) != fnv1a64(std::string("b")));
  REQUIRE(hex64(0).size() == 16);
}
