#pragma once

#include <stdexcept>
#include <string>

namespace privmia {

// Bad inputs, malformed files, contract violations. The CLI maps this to
// exit code 1; anything else escaping to main exits 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Shortest round-trip decimal form; stable across runs, so byte-identical
// artifacts only require identical doubles.
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace privmia
