#pragma once

#include <stdexcept>
#include <string>

namespace qhic {

// Error classes shared by the library and the CLI. Each class has a fixed
// process exit code and a machine-parsable name, so callers can dispatch on
// either without scraping message text.
enum class errc {
  invalid_argument = 2,
  file_not_found = 3,
  unsupported_format = 4,
  corrupt_image_data = 5,
  io_write_failure = 6,
  dimension_mismatch = 7,
  domain_error = 8,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::file_not_found: return "file-not-found";
    case errc::unsupported_format: return "unsupported-format";
    case errc::corrupt_image_data: return "corrupt-image-data";
    case errc::io_write_failure: return "io-write-failure";
    case errc::dimension_mismatch: return "dimension-mismatch";
    case errc::domain_error: return "domain-error";
  }
  return "unknown-error";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }
  const char* name() const noexcept { return errc_name(code_); }
  int exit_code() const noexcept { return static_cast<int>(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
  throw Error(code, msg);
}

inline void require(bool cond, errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

}  // namespace qhic
