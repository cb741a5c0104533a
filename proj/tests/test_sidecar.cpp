#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "qhic/bixel.hpp"
#include "qhic/sidecar.hpp"
#include "testutil.hpp"

using namespace qhic;
using qhic_test::TempDir;

namespace {

errc error_code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a qhic::Error");
  return errc::domain_error;
}

}  // namespace

TEST_CASE("sidecar round trip preserves the decomposition exactly") {
  TempDir dir("sidecar");
  std::mt19937_64 gen(51);
  const ImageTensor img = qhic_test::random_image8(gen, 10, 13, 3);
  auto [padded, pad] = pad_to_grid(img, 4, 4);
  const BlockDecomposition d = decompose(padded, 4, 4, pad);

  const std::string path = dir.file("blocks.qbd");
  save_sidecar(d, path);
  const BlockDecomposition back = load_sidecar(path);

  CHECK(back.bixel_h == d.bixel_h);
  CHECK(back.bixel_w == d.bixel_w);
  CHECK(back.grid_rows == d.grid_rows);
  CHECK(back.grid_cols == d.grid_cols);
  CHECK(back.channels == d.channels);
  CHECK(back.pad.original_height == d.pad.original_height);
  CHECK(back.pad.original_width == d.pad.original_width);
  CHECK(back.pad.padded_height == d.pad.padded_height);
  CHECK(back.pad.padded_width == d.pad.padded_width);
  CHECK(back.sums == d.sums);      // bit-exact doubles
  CHECK(back.weights == d.weights);
}

TEST_CASE("sidecar error handling") {
  TempDir dir("sidecar");

  SECTION("missing file") {
    CHECK(error_code_of([&] { load_sidecar(dir.file("missing.qbd")); }) ==
          errc::file_not_found);
  }

  SECTION("wrong magic") {
    const char junk[] = "NOTASIDECARFILE_________________";
    qhic_test::write_binary(dir.file("junk.qbd"), junk, sizeof junk);
    CHECK(error_code_of([&] { load_sidecar(dir.file("junk.qbd")); }) ==
          errc::unsupported_format);
  }

  SECTION("truncated payload") {
    std::mt19937_64 gen(53);
    const ImageTensor img = qhic_test::random_image8(gen, 4, 4, 1);
    const PadRecord pad{4, 4, 4, 4};
    const BlockDecomposition d = decompose(img, 2, 2, pad);
    const std::string path = dir.file("trunc.qbd");
    save_sidecar(d, path);
    const auto bytes = qhic_test::read_binary(path);
    qhic_test::write_binary(path, bytes.data(), bytes.size() - 9);
    CHECK(error_code_of([&] { load_sidecar(path); }) ==
          errc::corrupt_image_data);
  }

  SECTION("implausible geometry") {
    std::mt19937_64 gen(55);
    const ImageTensor img = qhic_test::random_image8(gen, 4, 4, 1);
    const PadRecord pad{4, 4, 4, 4};
    const BlockDecomposition d = decompose(img, 2, 2, pad);
    const std::string path = dir.file("geom.qbd");
    save_sidecar(d, path);
    auto bytes = qhic_test::read_binary(path);
    bytes[8] = 0xff;  // bixel_h low byte -> nonsense
    qhic_test::write_binary(path, bytes.data(), bytes.size());
    CHECK(error_code_of([&] { load_sidecar(path); }) ==
          errc::corrupt_image_data);
  }
}
