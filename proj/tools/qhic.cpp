// qhic: compress an image through the bixel-histogram amplitude-embedding
// pipeline on a simulated quantum backend, sweep bin counts, or compare
// qubit budgets against pixel-level encodings.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhic/pipeline.hpp"
#include "qhic/report.hpp"

namespace {

using qhic::errc;

std::pair<std::int64_t, std::int64_t> parse_bixel(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) {
      const std::int64_t side = std::stoll(text);
      return {side, side};
    }
    return {std::stoll(text.substr(0, x)), std::stoll(text.substr(x + 1))};
  } catch (const std::exception&) {
    qhic::fail(errc::invalid_argument, "cannot parse bixel size: " + text);
  }
}

std::string replace_extension(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of("/\\");
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + suffix;
  return path.substr(0, dot) + suffix;
}

struct CommonFlags {
  std::string bixel = "32x32";
  std::string backend = "sampled";
  std::string bin_range = "data";
  std::string recon = "paper";
  std::uint64_t shots = 4096;
  std::uint64_t seed = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--bixel", flags->bixel, "bixel size as HxW")
      ->capture_default_str();
  cmd->add_option("--backend", flags->backend, "quantum backend mode")
      ->check(CLI::IsMember({"ideal", "sampled"}))
      ->capture_default_str();
  cmd->add_option("--shots", flags->shots, "measurement shots per run")
      ->capture_default_str();
  cmd->add_option("--seed", flags->seed, "64-bit sampling seed")
      ->capture_default_str();
  cmd->add_option("--bin-range", flags->bin_range,
                  "histogram span: observed sums or the full [0, M] range")
      ->check(CLI::IsMember({"data", "full"}))
      ->capture_default_str();
  cmd->add_option("--recon", flags->recon,
                  "sum recovery: bin centers, or centers scaled by measured counts")
      ->check(CLI::IsMember({"paper", "measured"}))
      ->capture_default_str();
}

qhic::RunConfig make_config(const CommonFlags& flags) {
  qhic::RunConfig config;
  auto [bh, bw] = parse_bixel(flags.bixel);
  config.bixel_h = bh;
  config.bixel_w = bw;
  config.backend = flags.backend == "ideal" ? qhic::BackendMode::ideal
                                            : qhic::BackendMode::sampled;
  config.shots = flags.shots;
  config.seed = flags.seed;
  config.bin_range = flags.bin_range == "full" ? qhic::BinRangeMode::full
                                               : qhic::BinRangeMode::data;
  config.recon = flags.recon == "measured" ? qhic::ReconMode::measured
                                           : qhic::ReconMode::paper;
  return config;
}

void print_compress_log(const qhic::CompressResult& r) {
  std::printf("Loaded image of size %" PRId64 "x%" PRId64 "x%" PRId64 ".\n",
              r.height, r.width, r.channels);
  std::printf("Histogram bin size %" PRId64 ". Bixel size %" PRId64 "x%" PRId64 ".\n",
              r.config.bins, r.config.bixel_h, r.config.bixel_w);
  if (r.fidelity.embed_seconds)
    std::printf("embed time: %.4fs | qubits=%" PRId64 "\n",
                *r.fidelity.embed_seconds, r.amps.qubit_count);
  if (r.fidelity.recon_seconds)
    std::printf("recon time: %.4fs | qubits=%" PRId64 "\n",
                *r.fidelity.recon_seconds, r.amps.qubit_count);
  if (std::isinf(r.fidelity.psnr_db))
    std::printf("MSE=%e, PSNR=inf\n", r.fidelity.mse);
  else
    std::printf("MSE=%e, PSNR=%.2f dB\n", r.fidelity.mse, r.fidelity.psnr_db);
  std::printf("Backend: %s", to_string(r.config.backend));
  if (r.shot_record)
    std::printf(" (%s, seed=%" PRIu64 ", shots=%" PRIu64 ")",
                qhic::kShotGeneratorName, r.shot_record->seed, r.shot_record->shots);
  std::printf("\nFile sizes:\n");
  std::printf("- original      : %" PRIu64 " bytes\n", r.original_bytes);
  std::printf("- reconstructed : %" PRIu64 " bytes\n", r.reconstructed_bytes);
}

int run_compress_cmd(const CommonFlags& flags, const std::string& input,
                     std::int64_t bins, std::string out, std::string report,
                     const std::string& format, const std::string& sidecar,
                     bool no_timings) {
  qhic::RunConfig config = make_config(flags);
  config.input = input;
  config.bins = bins;
  config.sidecar = sidecar;
  config.include_timings = !no_timings;
  config.report_format = format;
  config.output = out.empty() ? replace_extension(input, ".recon.png") : out;
  if (report.empty())
    report = replace_extension(input, format == "csv" ? ".report.csv"
                                                      : ".report.json");
  config.report_path = report;

  const qhic::CompressResult result = qhic::run_compress(config);
  const std::string rendered = format == "csv"
                                   ? qhic::render_compress_csv(result)
                                   : qhic::render_compress_json(result);
  qhic::write_text_file(report, rendered);
  print_compress_log(result);
  std::printf("Wrote %s and %s\n", config.output.c_str(), report.c_str());
  return 0;
}

int run_sweep_cmd(const CommonFlags& flags, const std::string& input,
                  const std::vector<std::int64_t>& bins_list,
                  const std::string& report) {
  qhic::RunConfig config = make_config(flags);
  config.input = input;
  const std::vector<qhic::SweepRow> rows = qhic::run_sweep(config, bins_list);
  const std::string csv = qhic::render_sweep_csv(rows);
  if (report.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    qhic::write_text_file(report, csv);
    std::printf("Wrote %zu sweep rows to %s\n", rows.size(), report.c_str());
  }
  return 0;
}

int run_qubits_cmd(std::uint64_t pixels, const std::string& size,
                   std::uint64_t bins, std::uint64_t bit_depth) {
  if (!size.empty()) {
    auto [h, w] = parse_bixel(size);
    qhic::require(h >= 1 && w >= 1, errc::invalid_argument,
                  "image size must be positive");
    pixels = static_cast<std::uint64_t>(h) * static_cast<std::uint64_t>(w);
  }
  qhic::require(pixels >= 1, errc::invalid_argument,
                "give --pixels or --size with at least one pixel");

  qhic::QubitParams params;
  params.bit_depth = bit_depth;
  params.bins = bins;
  const auto frqi = qhic::qubit_accounting(pixels, qhic::QubitMethod::frqi);
  const auto neqr = qhic::qubit_accounting(pixels, qhic::QubitMethod::neqr, params);
  const auto ncqi = qhic::qubit_accounting(pixels, qhic::QubitMethod::ncqi);
  const auto prop = qhic::qubit_accounting(pixels, qhic::QubitMethod::proposed, params);

  std::printf("N (pixels): %" PRIu64 "\n", pixels);
  std::printf("%-10s %8s  %s\n", "method", "qubits", "formula");
  std::printf("%-10s %8" PRIu64 "  ceil(log2 N) + 1\n", "FRQI", frqi);
  std::printf("%-10s %8" PRIu64 "  ceil(log2 N) + l, l = %" PRIu64 "\n", "NEQR",
              neqr, bit_depth);
  std::printf("%-10s %8" PRIu64 "  ceil(log2 N) + 2\n", "NCQI", ncqi);
  std::printf("%-10s %8" PRIu64 "  ceil(log2 B), B = %" PRIu64 "\n", "proposed",
              prop, bins);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "qhic: histogram-driven amplitude-embedding image compression on a "
      "simulated quantum backend"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes:\n"
      "  0 success            2 invalid-argument    3 file-not-found\n"
      "  4 unsupported-format 5 corrupt-image-data  6 io-write-failure\n"
      "  7 dimension-mismatch 8 domain-error\n"
      "Errors print one line on stderr: error: <name>: <detail>");

  CommonFlags compress_flags, sweep_flags;
  std::string compress_input, sweep_input;
  std::int64_t compress_bins = 32;
  std::vector<std::int64_t> sweep_bins = {8, 16, 32, 64, 128};
  std::string compress_out, compress_report, compress_sidecar;
  std::string compress_format = "json";
  std::string sweep_report;
  bool no_timings = false;
  std::uint64_t qubits_pixels = 0, qubits_bins = 32, qubits_depth = 24;
  std::string qubits_size;

  CLI::App* compress = app.add_subcommand(
      "compress", "compress one image and reconstruct it");
  compress->add_option("input", compress_input, "input PNG/PPM/PGM image")
      ->required();
  compress->add_option("--bins", compress_bins, "histogram bin count B")
      ->capture_default_str();
  add_common_flags(compress, &compress_flags);
  compress->add_option("--out", compress_out,
                       "reconstructed PNG path (default: INPUT.recon.png)");
  compress->add_option("--report", compress_report,
                       "report path (default: INPUT.report.json|csv)");
  compress->add_option("--format", compress_format, "report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  compress->add_option("--sidecar", compress_sidecar,
                       "write the block decomposition to this path");
  compress->add_flag("--no-timings", no_timings,
                     "omit wall-clock timings from the report");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "rerun the pipeline across bin counts, shared decomposition");
  sweep->add_option("input", sweep_input, "input PNG/PPM/PGM image")->required();
  sweep->add_option("--bins", sweep_bins, "comma-separated bin counts")
      ->delimiter(',')
      ->capture_default_str();
  add_common_flags(sweep, &sweep_flags);
  sweep->add_option("--report", sweep_report,
                    "CSV output path (default: stdout)");

  CLI::App* qubits = app.add_subcommand(
      "qubits", "qubit accounting vs. FRQI/NEQR/NCQI baselines");
  CLI::Option* pixels_opt =
      qubits->add_option("--pixels", qubits_pixels, "total pixel count N");
  qubits->add_option("--size", qubits_size, "image size as HxW")
      ->excludes(pixels_opt);
  qubits->add_option("--bins", qubits_bins, "histogram bin count B")
      ->capture_default_str();
  qubits->add_option("--bit-depth", qubits_depth,
                     "NEQR value-register width l (8 grayscale, 24 RGB)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (compress->parsed())
      return run_compress_cmd(compress_flags, compress_input, compress_bins,
                              compress_out, compress_report, compress_format,
                              compress_sidecar, no_timings);
    if (sweep->parsed())
      return run_sweep_cmd(sweep_flags, sweep_input, sweep_bins, sweep_report);
    if (qubits->parsed())
      return run_qubits_cmd(qubits_pixels, qubits_size, qubits_bins, qubits_depth);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: invalid-argument: " << e.what() << "\n";
    return static_cast<int>(errc::invalid_argument);
  } catch (const qhic::Error& e) {
    std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: internal: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
