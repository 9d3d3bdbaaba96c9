#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "engine.hpp"
#include "model.hpp"

namespace nasch {

// Parameter-file problem, reported with the offending key and 1-based
// line number (0 when no line applies, e.g. a missing required key).
class ParamError : public std::runtime_error {
 public:
  ParamError(int line, std::string key, const std::string& message);
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  int line_;
  std::string key_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Physics parameters plus the execution-only thread count. `threads`
// rides in the same file for convenience but never enters SimParams, so
// one parameter set means one trajectory for any thread count.
struct ParamFile {
  SimParams params;
  unsigned threads = 1;
};

// Parses `key = value` lines; `#` starts a comment and whitespace is
// ignored. Keys: length, ncars, vmax, p, steps, seed, output, stride,
// threads. length, ncars, steps, seed are required; the rest default to
// vmax=5, p=0.13, output=none, stride=1, threads=1. Unknown or duplicate
// keys and invariant violations raise ParamError.
ParamFile read_params(const std::string& text);

// Same, from a file; unreadable paths raise IoError.
ParamFile read_params_file(const std::string& path);

// Echo accepted by read_params; round-trips exactly.
std::string format_params(const SimParams& params, unsigned threads);

// One line per frame: step index then N position:velocity pairs,
// space-separated.
void write_ascii(const std::vector<Frame>& frames, std::ostream& out);
void write_ascii_file(const std::vector<Frame>& frames,
                      const std::string& path);

// Space-time occupancy raster; row r is recorded frame r with the
// earliest frame on top, occupancy[r*cols + x] nonzero iff a car sat in
// cell x at that frame.
struct SpacetimeImage {
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::vector<std::uint8_t> occupancy;
};

SpacetimeImage render_spacetime(const std::vector<Frame>& frames,
                                std::uint64_t road_length);

// Binary PGM, P5, maxval 255: occupied cells black (0), empty white
// (255).
void write_pgm(const SpacetimeImage& image, std::ostream& out);
void write_pgm_file(const SpacetimeImage& image, const std::string& path);

const char* output_mode_name(OutputMode mode);

}  // namespace nasch
