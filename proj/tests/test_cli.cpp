#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "corpus.hpp"
#include "json.hpp"
#include "qhic/image_io.hpp"
#include "testutil.hpp"

using qhic_test::CliResult;
using qhic_test::TempDir;
using qhic_test::run_cli;

TEST_CASE("cli help lists subcommands and exit codes") {
  TempDir dir("cli");
  const CliResult r = run_cli("--help", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("compress") != std::string::npos);
  CHECK(r.out.find("sweep") != std::string::npos);
  CHECK(r.out.find("qubits") != std::string::npos);
  CHECK(r.out.find("file-not-found") != std::string::npos);
  CHECK(r.out.find("io-write-failure") != std::string::npos);
}

TEST_CASE("cli compress writes image and report") {
  TempDir dir("cli");
  const auto img = qhic_test::make_blob_scene(91, 64, 64, 3);
  const std::string input = dir.file("in.png");
  qhic::save_image(img, input);
  const std::string out = dir.file("out.png");
  const std::string report = dir.file("report.json");

  const CliResult r = run_cli("compress \"" + input + "\" --bixel 16x16 --out \"" +
                                  out + "\" --report \"" + report + "\"",
                              dir);
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("Loaded image of size 64x64x3.") != std::string::npos);
  CHECK(r.out.find("embed time:") != std::string::npos);
  CHECK(r.out.find("recon time:") != std::string::npos);
  CHECK(r.out.find("MSE=") != std::string::npos);

  const auto parsed = nlohmann::json::parse(qhic_test::read_text(report));
  CHECK(parsed["config"]["bixel_h"] == 16);
  CHECK(parsed["config"]["backend"] == "sampled");
  CHECK(parsed["quantum"]["generator"] == "mt19937_64");
  CHECK(parsed["image"]["blocks"] == 16);

  const qhic::ImageTensor recon = qhic::load_image(out);
  CHECK(recon.height == 64);
  CHECK(recon.width == 64);
}

TEST_CASE("cli compress default output paths derive from the input") {
  TempDir dir("cli");
  const auto img = qhic_test::make_texture(93, 32, 32, 1);
  const std::string input = dir.file("photo.png");
  qhic::save_image(img, input);

  const CliResult r = run_cli("compress \"" + input + "\" --backend ideal", dir);
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  CHECK(std::filesystem::exists(dir.file("photo.recon.png")));
  CHECK(std::filesystem::exists(dir.file("photo.report.json")));
}

TEST_CASE("cli compress csv report") {
  TempDir dir("cli");
  const auto img = qhic_test::make_texture(95, 32, 32, 1);
  const std::string input = dir.file("t.png");
  qhic::save_image(img, input);
  const std::string report = dir.file("report.csv");

  const CliResult r = run_cli(
      "compress \"" + input + "\" --format csv --report \"" + report + "\"", dir);
  REQUIRE(r.exit_code == 0);
  const std::string csv = qhic_test::read_text(report);
  CHECK(csv.rfind("key,value\n", 0) == 0);
  CHECK(csv.find("config.bins,32") != std::string::npos);
  CHECK(csv.find("metrics.mse,") != std::string::npos);
}

TEST_CASE("cli error reporting") {
  TempDir dir("cli");

  SECTION("missing input file: exit 3, machine-parsable name on stderr") {
    const CliResult r = run_cli("compress \"" + dir.file("nope.png") + "\"", dir);
    CHECK(r.exit_code == 3);
    CHECK(r.err.find("error: file-not-found:") != std::string::npos);
  }

  SECTION("unsupported format: exit 4") {
    const char garbage[] = "BM not really a bitmap";
    qhic_test::write_binary(dir.file("x.bmp"), garbage, sizeof garbage);
    const CliResult r = run_cli("compress \"" + dir.file("x.bmp") + "\"", dir);
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("error: unsupported-format:") != std::string::npos);
  }

  SECTION("bad flag value: exit 2") {
    const CliResult r = run_cli("compress in.png --backend warp", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("error: invalid-argument:") != std::string::npos);
  }

  SECTION("invalid bixel spec: exit 2") {
    const auto img = qhic_test::make_texture(97, 8, 8, 1);
    qhic::save_image(img, dir.file("t.png"));
    const CliResult r =
        run_cli("compress \"" + dir.file("t.png") + "\" --bixel axb", dir);
    CHECK(r.exit_code == 2);
  }

  SECTION("unwritable output: exit 6") {
    const auto img = qhic_test::make_texture(99, 8, 8, 1);
    qhic::save_image(img, dir.file("t.png"));
    const CliResult r = run_cli("compress \"" + dir.file("t.png") +
                                    "\" --out \"" + dir.file("no/dir/out.png") +
                                    "\"",
                                dir);
    CHECK(r.exit_code == 6);
    CHECK(r.err.find("error: io-write-failure:") != std::string::npos);
  }
}

TEST_CASE("cli sweep prints the pinned CSV header") {
  TempDir dir("cli");
  const auto img = qhic_test::make_blob_scene(101, 64, 64, 3);
  const std::string input = dir.file("in.png");
  qhic::save_image(img, input);

  const CliResult r =
      run_cli("sweep \"" + input + "\" --bixel 16x16 --bins 2,4,8", dir);
  INFO(r.err);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.rfind("bins,qubits,mse,psnr_db,tvd,embed_s,recon_s\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);

  const std::string report = dir.file("sweep.csv");
  const CliResult r2 = run_cli("sweep \"" + input +
                                   "\" --bixel 16x16 --bins 2,4 --report \"" +
                                   report + "\"",
                               dir);
  REQUIRE(r2.exit_code == 0);
  const std::string csv = qhic_test::read_text(report);
  CHECK(csv.rfind("bins,qubits,", 0) == 0);
}

TEST_CASE("cli qubits table") {
  TempDir dir("cli");
  const CliResult r =
      run_cli("qubits --size 3403x5266 --bins 32 --bit-depth 24", dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("N (pixels): 17920198") != std::string::npos);
  CHECK(r.out.find("FRQI") != std::string::npos);

  auto qubits_of = [&](const std::string& method) {
    const auto pos = r.out.find(method);
    REQUIRE(pos != std::string::npos);
    return std::stoi(r.out.substr(pos + method.size(), 24));
  };
  CHECK(qubits_of("FRQI") == 26);
  CHECK(qubits_of("NEQR") == 49);
  CHECK(qubits_of("NCQI") == 27);
  CHECK(qubits_of("proposed") == 5);

  SECTION("pixels and size are mutually exclusive") {
    const CliResult bad = run_cli("qubits --pixels 5 --size 2x2", dir);
    CHECK(bad.exit_code == 2);
  }

  SECTION("missing size: exit 2") {
    const CliResult bad = run_cli("qubits", dir);
    CHECK(bad.exit_code == 2);
  }
}
