#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "qhic/backend.hpp"
#include "qhic/errors.hpp"
#include "qhic/pipeline.hpp"

// Machine-readable run reports. Rendering is hand-rolled so the output is
// byte-stable: fixed key order, no locale dependence, every floating-point
// number printed with 17 significant digits. An infinite PSNR serializes as
// the string "inf" in JSON and the bare token inf in CSV.

namespace qhic {
namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string json_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Minimal insertion-ordered JSON emitter; commas are tracked so values can
// be appended linearly.
class JsonWriter {
 public:
  JsonWriter& begin_object() { return open('{'); }
  JsonWriter& end_object() { return close('}'); }
  JsonWriter& begin_array() { return open('['); }
  JsonWriter& end_array() { return close(']'); }

  JsonWriter& key(std::string_view k) {
    comma();
    out_ += '"';
    out_ += json_escape(k);
    out_ += "\":";
    pending_comma_ = false;
    return *this;
  }

  JsonWriter& value(std::string_view s) {
    comma();
    out_ += '"';
    out_ += json_escape(s);
    out_ += '"';
    pending_comma_ = true;
    return *this;
  }
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(double v) {
    comma();
    out_ += fmt_double(v);
    pending_comma_ = true;
    return *this;
  }
  JsonWriter& value(std::int64_t v) {
    comma();
    out_ += std::to_string(v);
    pending_comma_ = true;
    return *this;
  }
  JsonWriter& value(std::uint64_t v) {
    comma();
    out_ += std::to_string(v);
    pending_comma_ = true;
    return *this;
  }
  JsonWriter& value(bool v) {
    comma();
    out_ += v ? "true" : "false";
    pending_comma_ = true;
    return *this;
  }

  template <typename T>
  JsonWriter& array(const std::vector<T>& values) {
    begin_array();
    for (const T& v : values) value(v);
    return end_array();
  }

  std::string take() { return std::move(out_); }

 private:
  JsonWriter& open(char c) {
    comma();
    out_ += c;
    pending_comma_ = false;
    return *this;
  }
  JsonWriter& close(char c) {
    out_ += c;
    pending_comma_ = true;
    return *this;
  }
  void comma() {
    if (pending_comma_) out_ += ',';
  }

  std::string out_;
  bool pending_comma_ = false;
};

template <typename T>
inline std::string join_semicolon(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ';';
    if constexpr (std::is_same_v<T, double>)
      out += fmt_double(values[i]);
    else
      out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace detail

inline std::string render_compress_json(const CompressResult& r) {
  detail::JsonWriter w;
  w.begin_object();
  w.key("tool").value("qhic");
  w.key("command").value("compress");

  w.key("config").begin_object();
  w.key("input").value(r.config.input);
  w.key("output").value(r.config.output);
  w.key("bixel_h").value(r.config.bixel_h);
  w.key("bixel_w").value(r.config.bixel_w);
  w.key("bins").value(r.config.bins);
  w.key("backend").value(to_string(r.config.backend));
  w.key("shots").value(r.config.shots);
  w.key("seed").value(r.config.seed);
  w.key("bin_range").value(to_string(r.config.bin_range));
  w.key("recon").value(to_string(r.config.recon));
  w.end_object();

  w.key("image").begin_object();
  w.key("height").value(r.height);
  w.key("width").value(r.width);
  w.key("channels").value(r.channels);
  w.key("padded_height").value(r.pad.padded_height);
  w.key("padded_width").value(r.pad.padded_width);
  w.key("grid_rows").value(r.grid_rows);
  w.key("grid_cols").value(r.grid_cols);
  w.key("blocks").value(r.blocks);
  w.key("block_len").value(r.block_len);
  w.end_object();

  w.key("histogram").begin_object();
  w.key("lo").value(r.hist.lo);
  w.key("hi").value(r.hist.hi);
  w.key("edges").array(r.hist.edges);
  w.key("counts").array(r.hist.counts);
  w.key("assignments").array(r.hist.assignments);
  w.end_object();

  w.key("quantum").begin_object();
  w.key("qubits").value(r.amps.qubit_count);
  w.key("amplitudes").array(r.amps.amplitudes);
  w.key("probabilities").array(r.probabilities);
  if (r.shot_record) {
    w.key("generator").value(kShotGeneratorName);
    w.key("shots").value(r.shot_record->shots);
    w.key("seed").value(r.shot_record->seed);
    w.key("counts").array(r.shot_record->counts);
  }
  w.key("estimated_counts").array(r.estimated_counts);
  w.end_object();

  w.key("reconstruction").begin_object();
  w.key("bin_centers").array(r.bin_centers);
  w.key("reconstructed_sums").array(r.reconstructed_sums);
  w.key("clip_count").value(r.fidelity.clip_count);
  w.end_object();

  w.key("metrics").begin_object();
  w.key("mse").value(r.fidelity.mse);
  if (std::isinf(r.fidelity.psnr_db))
    w.key("psnr_db").value("inf");
  else
    w.key("psnr_db").value(r.fidelity.psnr_db);
  w.key("mse_bound").value(r.mse_bound);
  w.key("mse_within_bound").value(r.mse_within_bound);
  if (r.fidelity.tvd) w.key("tvd").value(*r.fidelity.tvd);
  if (r.fidelity.embed_seconds) w.key("embed_s").value(*r.fidelity.embed_seconds);
  if (r.fidelity.recon_seconds) w.key("recon_s").value(*r.fidelity.recon_seconds);
  w.end_object();

  w.key("files").begin_object();
  w.key("original_bytes").value(r.original_bytes);
  w.key("reconstructed_bytes").value(r.reconstructed_bytes);
  w.end_object();

  w.end_object();
  std::string out = w.take();
  out += '\n';
  return out;
}

// Flat key,value rows; list-valued fields join their entries with ';'.
inline std::string render_compress_csv(const CompressResult& r) {
  std::string out = "key,value\n";
  auto row = [&](std::string_view k, const std::string& v) {
    out.append(k);
    out += ',';
    out += v;
    out += '\n';
  };
  auto num = [&](std::string_view k, double v) { row(k, detail::fmt_double(v)); };
  auto i64 = [&](std::string_view k, std::int64_t v) { row(k, std::to_string(v)); };
  auto u64 = [&](std::string_view k, std::uint64_t v) { row(k, std::to_string(v)); };

  row("tool", "qhic");
  row("command", "compress");
  row("config.input", r.config.input);
  row("config.output", r.config.output);
  i64("config.bixel_h", r.config.bixel_h);
  i64("config.bixel_w", r.config.bixel_w);
  i64("config.bins", r.config.bins);
  row("config.backend", to_string(r.config.backend));
  u64("config.shots", r.config.shots);
  u64("config.seed", r.config.seed);
  row("config.bin_range", to_string(r.config.bin_range));
  row("config.recon", to_string(r.config.recon));
  i64("image.height", r.height);
  i64("image.width", r.width);
  i64("image.channels", r.channels);
  i64("image.padded_height", r.pad.padded_height);
  i64("image.padded_width", r.pad.padded_width);
  i64("image.grid_rows", r.grid_rows);
  i64("image.grid_cols", r.grid_cols);
  i64("image.blocks", r.blocks);
  i64("image.block_len", r.block_len);
  num("histogram.lo", r.hist.lo);
  num("histogram.hi", r.hist.hi);
  row("histogram.edges", detail::join_semicolon(r.hist.edges));
  row("histogram.counts", detail::join_semicolon(r.hist.counts));
  row("histogram.assignments", detail::join_semicolon(r.hist.assignments));
  i64("quantum.qubits", r.amps.qubit_count);
  row("quantum.amplitudes", detail::join_semicolon(r.amps.amplitudes));
  row("quantum.probabilities", detail::join_semicolon(r.probabilities));
  if (r.shot_record) {
    row("quantum.generator", kShotGeneratorName);
    u64("quantum.shots", r.shot_record->shots);
    u64("quantum.seed", r.shot_record->seed);
    row("quantum.counts", detail::join_semicolon(r.shot_record->counts));
  }
  row("quantum.estimated_counts", detail::join_semicolon(r.estimated_counts));
  row("reconstruction.bin_centers", detail::join_semicolon(r.bin_centers));
  row("reconstruction.reconstructed_sums",
      detail::join_semicolon(r.reconstructed_sums));
  u64("reconstruction.clip_count", r.fidelity.clip_count);
  num("metrics.mse", r.fidelity.mse);
  row("metrics.psnr_db", std::isinf(r.fidelity.psnr_db)
                             ? "inf"
                             : detail::fmt_double(r.fidelity.psnr_db));
  num("metrics.mse_bound", r.mse_bound);
  row("metrics.mse_within_bound", r.mse_within_bound ? "pass" : "fail");
  if (r.fidelity.tvd) num("metrics.tvd", *r.fidelity.tvd);
  if (r.fidelity.embed_seconds) num("metrics.embed_s", *r.fidelity.embed_seconds);
  if (r.fidelity.recon_seconds) num("metrics.recon_s", *r.fidelity.recon_seconds);
  u64("files.original_bytes", r.original_bytes);
  u64("files.reconstructed_bytes", r.reconstructed_bytes);
  return out;
}

// Plot-ready sweep table. The header is part of the interface contract.
inline std::string render_sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "bins,qubits,mse,psnr_db,tvd,embed_s,recon_s\n";
  for (const SweepRow& row : rows) {
    out += std::to_string(row.bins);
    out += ',';
    out += std::to_string(row.qubits);
    out += ',';
    out += detail::fmt_double(row.mse);
    out += ',';
    out += std::isinf(row.psnr_db) ? "inf" : detail::fmt_double(row.psnr_db);
    out += ',';
    out += row.tvd ? detail::fmt_double(*row.tvd) : "nan";
    out += ',';
    out += detail::fmt_double(row.embed_s);
    out += ',';
    out += detail::fmt_double(row.recon_s);
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) fail(errc::io_write_failure, "cannot open for writing: " + path);
  std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
  int close_err = std::fclose(f);
  if (written != content.size() || close_err != 0)
    fail(errc::io_write_failure, "short write: " + path);
}

}  // namespace qhic
