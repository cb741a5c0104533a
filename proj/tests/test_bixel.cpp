#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <numeric>
#include <random>

#include "qhic/bixel.hpp"
#include "qhic/image.hpp"
#include "testutil.hpp"

using namespace qhic;

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

PadRecord identity_pad(const ImageTensor& img) {
  return PadRecord{img.height, img.width, img.height, img.width};
}

// Independent block slicing in the canonical (row, column, channel) order.
std::vector<std::vector<double>> slice_blocks(const ImageTensor& img,
                                              std::int64_t bh, std::int64_t bw) {
  std::vector<std::vector<double>> blocks;
  for (std::int64_t br = 0; br < img.height / bh; ++br)
    for (std::int64_t bc = 0; bc < img.width / bw; ++bc) {
      std::vector<double> block;
      for (std::int64_t r = br * bh; r < (br + 1) * bh; ++r)
        for (std::int64_t c = bc * bw; c < (bc + 1) * bw; ++c)
          for (std::int64_t ch = 0; ch < img.channels; ++ch)
            block.push_back(img.at(r, c, ch));
      blocks.push_back(std::move(block));
    }
  return blocks;
}

}  // namespace

TEST_CASE("decompose computes block sums and weights") {
  SECTION("2x2 grayscale block with pixels {0.1,0.2,0.3,0.4}") {
    ImageTensor img = make_image(2, 2, 1);
    img.data = {0.1, 0.2, 0.3, 0.4};
    const BlockDecomposition d = decompose(img, 2, 2, identity_pad(img));
    REQUIRE(d.block_count() == 1);
    CHECK(d.block_len() == 4);
    CHECK_THAT(d.sums[0], Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(d.weights[0][0], Catch::Matchers::WithinAbs(0.1, 1e-12));
    CHECK_THAT(d.weights[0][1], Catch::Matchers::WithinAbs(0.2, 1e-12));
    CHECK_THAT(d.weights[0][2], Catch::Matchers::WithinAbs(0.3, 1e-12));
    CHECK_THAT(d.weights[0][3], Catch::Matchers::WithinAbs(0.4, 1e-12));
  }

  SECTION("all-zero block keeps the zero-weight sentinel") {
    const ImageTensor img = qhic_test::constant_image(4, 4, 3, 0.0);
    const BlockDecomposition d = decompose(img, 2, 2, identity_pad(img));
    for (std::int64_t b = 0; b < d.block_count(); ++b) {
      CHECK(d.sums[static_cast<std::size_t>(b)] == 0.0);
      for (double w : d.weights[static_cast<std::size_t>(b)]) CHECK(w == 0.0);
    }
  }

  SECTION("uniform block: sum cM and weights 1/M") {
    const double c = 0.25;
    const ImageTensor img = qhic_test::constant_image(6, 4, 3, c);
    const BlockDecomposition d = decompose(img, 3, 2, identity_pad(img));
    const double m = static_cast<double>(d.block_len());
    for (std::int64_t b = 0; b < d.block_count(); ++b) {
      CHECK_THAT(d.sums[static_cast<std::size_t>(b)],
                 Catch::Matchers::WithinRel(c * m, 1e-12));
      for (double w : d.weights[static_cast<std::size_t>(b)])
        CHECK_THAT(w, Catch::Matchers::WithinRel(1.0 / m, 1e-12));
    }
  }

  SECTION("weights of nonzero blocks sum to 1 within 1e-9") {
    std::mt19937_64 gen(5);
    const ImageTensor img = qhic_test::random_image8(gen, 12, 20, 3);
    const BlockDecomposition d = decompose(img, 4, 5, identity_pad(img));
    for (std::int64_t b = 0; b < d.block_count(); ++b) {
      const auto& w = d.weights[static_cast<std::size_t>(b)];
      if (d.sums[static_cast<std::size_t>(b)] > 0.0) {
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-9));
        for (double wi : w) CHECK(wi >= 0.0);
      }
    }
  }

  SECTION("sum of block sums equals the total image intensity") {
    std::mt19937_64 gen(6);
    for (int iter = 0; iter < 10; ++iter) {
      const auto h = static_cast<std::int64_t>(8 * (1 + gen() % 4));
      const auto w = static_cast<std::int64_t>(8 * (1 + gen() % 4));
      const ImageTensor img = qhic_test::random_image8(gen, h, w, 3);
      const BlockDecomposition d = decompose(img, 8, 8, identity_pad(img));
      const double block_total =
          std::accumulate(d.sums.begin(), d.sums.end(), 0.0);
      const double image_total =
          std::accumulate(img.data.begin(), img.data.end(), 0.0);
      CHECK_THAT(block_total, Catch::Matchers::WithinRel(image_total, 1e-6));
    }
  }

  SECTION("block count matches the grid") {
    std::mt19937_64 gen(7);
    const ImageTensor img = qhic_test::random_image8(gen, 12, 15, 1);
    const BlockDecomposition d = decompose(img, 3, 5, identity_pad(img));
    CHECK(d.grid_rows == 4);
    CHECK(d.grid_cols == 3);
    CHECK(d.block_count() == 12);
  }

  SECTION("bounds: 0 <= S_b <= M") {
    std::mt19937_64 gen(8);
    const ImageTensor img = qhic_test::random_image8(gen, 16, 16, 3);
    const BlockDecomposition d = decompose(img, 4, 4, identity_pad(img));
    for (double s : d.sums) {
      CHECK(s >= 0.0);
      CHECK(s <= static_cast<double>(d.block_len()));
    }
  }

  SECTION("non-multiple dimensions are rejected") {
    const ImageTensor img = qhic_test::constant_image(5, 4, 1, 0.5);
    CHECK(error_code_of([&] { decompose(img, 2, 2, identity_pad(img)); }) ==
          errc::dimension_mismatch);
  }
}

TEST_CASE("reassemble") {
  std::mt19937_64 gen(11);
  const ImageTensor img = qhic_test::random_image8(gen, 8, 12, 3);
  const BlockDecomposition d = decompose(img, 4, 4, identity_pad(img));

  SECTION("original flattened blocks give back the image bit-identically") {
    const auto blocks = slice_blocks(img, 4, 4);
    const ImageTensor back = reassemble(d, blocks);
    CHECK(back.data == img.data);
  }

  SECTION("single-block image is the vector reshaped directly") {
    const BlockDecomposition whole = decompose(img, 8, 12, identity_pad(img));
    const std::vector<std::vector<double>> one = {img.data};
    const ImageTensor back = reassemble(whole, one);
    CHECK(back.data == img.data);
  }

  SECTION("permuted blocks pass the shape check but change the content") {
    auto blocks = slice_blocks(img, 4, 4);
    std::swap(blocks.front(), blocks.back());
    const ImageTensor back = reassemble(d, blocks);
    CHECK(back.height == img.height);
    CHECK(back.data != img.data);
  }

  SECTION("weights times exact sums reproduce the image") {
    std::vector<std::vector<double>> blocks;
    for (std::int64_t b = 0; b < d.block_count(); ++b) {
      const auto& w = d.weights[static_cast<std::size_t>(b)];
      std::vector<double> block(w.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        block[i] = w[i] * d.sums[static_cast<std::size_t>(b)];
      blocks.push_back(std::move(block));
    }
    const ImageTensor back = reassemble(d, blocks);
    REQUIRE(back.data.size() == img.data.size());
    for (std::size_t i = 0; i < img.data.size(); ++i)
      CHECK_THAT(back.data[i], Catch::Matchers::WithinAbs(img.data[i], 1e-9));
  }

  SECTION("block count and length mismatches are rejected") {
    auto blocks = slice_blocks(img, 4, 4);
    blocks.pop_back();
    CHECK(error_code_of([&] { reassemble(d, blocks); }) ==
          errc::dimension_mismatch);

    auto ragged = slice_blocks(img, 4, 4);
    ragged[1].pop_back();
    CHECK(error_code_of([&] { reassemble(d, ragged); }) ==
          errc::dimension_mismatch);
  }
}

TEST_CASE("decompose of a padded image counts only original content") {
  std::mt19937_64 gen(13);
  const ImageTensor img = qhic_test::random_image8(gen, 5, 6, 1);
  auto [padded, pad] = pad_to_grid(img, 4, 4);
  const BlockDecomposition d = decompose(padded, 4, 4, pad);
  CHECK(d.block_count() == 4);
  // The corner block covers rows 4..7 x cols 4..7; only (4,4) and (4,5)
  // hold original pixels, the rest is zero padding.
  const double expected = img.at(4, 4, 0) + img.at(4, 5, 0);
  CHECK_THAT(d.sums[3], Catch::Matchers::WithinRel(expected, 1e-12));
}
