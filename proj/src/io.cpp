#include "io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace nasch {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) {
    ++begin;
  }
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) {
    --end;
  }
  return s.substr(begin, end - begin);
}

std::uint64_t parse_u64(int line, const std::string& key,
                        const std::string& value) {
  std::uint64_t result = 0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, result);
  if (ec != std::errc() || ptr != last || value.empty()) {
    throw ParamError(line, key,
                     "expected a non-negative integer, got '" + value + "'");
  }
  return result;
}

double parse_probability(int line, const std::string& key,
                         const std::string& value) {
  double result = 0.0;
  const char* first = value.data();
  const char* last = first + value.size();
  auto [ptr, ec] = std::from_chars(first, last, result);
  if (ec != std::errc() || ptr != last || value.empty()) {
    throw ParamError(line, key, "expected a number, got '" + value + "'");
  }
  return result;
}

OutputMode parse_output_mode(int line, const std::string& value) {
  if (value == "none") return OutputMode::none;
  if (value == "ascii") return OutputMode::ascii;
  if (value == "pgm") return OutputMode::pgm;
  throw ParamError(line, "output",
                   "expected none, ascii or pgm, got '" + value + "'");
}

}  // namespace

ParamError::ParamError(int line, std::string key, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " +
                                        key + ": " + message
                                  : key + ": " + message),
      line_(line),
      key_(std::move(key)) {}

ParamFile read_params(const std::string& text) {
  ParamFile file;
  std::map<std::string, int> seen;  // key -> first line

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  bool have_vmax = false;
  bool have_p = false;
  while (std::getline(stream, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParamError(line_no, line, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParamError(line_no, value, "missing key before '='");
    }
    if (auto [it, inserted] = seen.emplace(key, line_no); !inserted) {
      throw ParamError(line_no, key,
                       "duplicate key, first set on line " +
                           std::to_string(it->second));
    }

    if (key == "length") {
      file.params.road_length = parse_u64(line_no, key, value);
    } else if (key == "ncars") {
      file.params.car_count = parse_u64(line_no, key, value);
    } else if (key == "vmax") {
      file.params.v_max = parse_u64(line_no, key, value);
      have_vmax = true;
    } else if (key == "p") {
      file.params.p = parse_probability(line_no, key, value);
      have_p = true;
    } else if (key == "steps") {
      file.params.steps = parse_u64(line_no, key, value);
    } else if (key == "seed") {
      file.params.seed = parse_u64(line_no, key, value);
    } else if (key == "output") {
      file.params.output_mode = parse_output_mode(line_no, value);
    } else if (key == "stride") {
      file.params.output_stride = parse_u64(line_no, key, value);
    } else if (key == "threads") {
      const std::uint64_t threads = parse_u64(line_no, key, value);
      if (threads < 1) {
        throw ParamError(line_no, key, "threads must be at least 1");
      }
      file.threads = static_cast<unsigned>(threads);
    } else {
      throw ParamError(line_no, key, "unknown key");
    }
  }

  for (const char* required : {"length", "ncars", "steps", "seed"}) {
    if (!seen.count(required)) {
      throw ParamError(0, required, "required key missing");
    }
  }
  (void)have_vmax;
  (void)have_p;

  try {
    file.params.validate();
  } catch (const std::invalid_argument& err) {
    throw ParamError(0, "params", err.what());
  }
  return file;
}

ParamFile read_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open parameter file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_params(buffer.str());
}

std::string format_params(const SimParams& params, unsigned threads) {
  std::ostringstream out;
  out << "length = " << params.road_length << "\n";
  out << "ncars = " << params.car_count << "\n";
  out << "vmax = " << params.v_max << "\n";
  out << "p = " << params.p << "\n";
  out << "steps = " << params.steps << "\n";
  out << "seed = " << params.seed << "\n";
  out << "output = " << output_mode_name(params.output_mode) << "\n";
  out << "stride = " << params.output_stride << "\n";
  out << "threads = " << threads << "\n";
  return out.str();
}

void write_ascii(const std::vector<Frame>& frames, std::ostream& out) {
  for (const Frame& frame : frames) {
    out << frame.step;
    for (std::size_t i = 0; i < frame.positions.size(); ++i) {
      out << ' ' << frame.positions[i] << ':' << frame.velocities[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed");
}

void write_ascii_file(const std::vector<Frame>& frames,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_ascii(frames, out);
}

SpacetimeImage render_spacetime(const std::vector<Frame>& frames,
                                std::uint64_t road_length) {
  SpacetimeImage image;
  image.rows = frames.size();
  image.cols = road_length;
  image.occupancy.assign(image.rows * image.cols, 0);
  for (std::size_t r = 0; r < frames.size(); ++r) {
    for (std::uint64_t x : frames[r].positions) {
      image.occupancy[r * road_length + x] = 1;
    }
  }
  return image;
}

void write_pgm(const SpacetimeImage& image, std::ostream& out) {
  out << "P5\n" << image.cols << ' ' << image.rows << "\n255\n";
  std::vector<char> row(image.cols);
  for (std::uint64_t r = 0; r < image.rows; ++r) {
    for (std::uint64_t c = 0; c < image.cols; ++c) {
      row[c] = image.occupancy[r * image.cols + c] ? '\0' : '\xff';
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("write failed");
}

void write_pgm_file(const SpacetimeImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_pgm(image, out);
}

const char* output_mode_name(OutputMode mode) {
  switch (mode) {
    case OutputMode::none:
      return "none";
    case OutputMode::ascii:
      return "ascii";
    case OutputMode::pgm:
      return "pgm";
  }
  return "none";
}

}  // namespace nasch
