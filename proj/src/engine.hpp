#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lcg.hpp"
#include "model.hpp"

namespace nasch {

inline constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ull;
inline constexpr std::uint64_t kFnvPrime = 1099511628211ull;

inline std::uint64_t fnv1a64_value(std::uint64_t hash, std::uint64_t value) {
  // Folding a zero byte is just a multiply by the prime, so the four
  // high bytes of a value below 2^32 collapse into one multiply by
  // prime^4 (mod 2^64). Positions and velocities always take this path.
  constexpr std::uint64_t kPrime4 =
      kFnvPrime * kFnvPrime * kFnvPrime * kFnvPrime;
  if (value < (1ull << 32)) {
    hash = (hash ^ (value & 0xffu)) * kFnvPrime;
    value >>= 8;
    hash = (hash ^ (value & 0xffu)) * kFnvPrime;
    value >>= 8;
    hash = (hash ^ (value & 0xffu)) * kFnvPrime;
    value >>= 8;
    hash = (hash ^ value) * kFnvPrime;
    return hash * kPrime4;
  }
  for (int byte = 0; byte < 8; ++byte) {
    hash = (hash ^ (value & 0xffu)) * kFnvPrime;
    value >>= 8;
  }
  return hash;
}

// Folds one step's positions-then-velocities into the digest, each value
// as a 64-bit little-endian unsigned.
std::uint64_t hash_row(std::uint64_t hash,
                       const std::vector<std::uint64_t>& positions,
                       const std::vector<std::uint64_t>& velocities);

struct TrajectoryRow {
  std::vector<std::uint64_t> positions;
  std::vector<std::uint64_t> velocities;
};

// FNV-1a 64 over the rows in order; the empty sequence digests to the
// offset basis.
std::uint64_t checksum_trajectory(const std::vector<TrajectoryRow>& rows);

// Contiguous car-index blocks, one per worker. Block b covers
// [floor(b*N/W), floor((b+1)*N/W)); sizes differ by at most one and a
// worker count above N leaves the excess workers with empty blocks.
struct Partition {
  struct Block {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
  };
  std::vector<Block> blocks;
};

Partition make_partition(std::uint64_t car_count, unsigned workers);

struct Frame {
  std::uint64_t step = 0;
  std::vector<std::uint64_t> positions;
  std::vector<std::uint64_t> velocities;
};

enum class EngineKind {
  // Block-parallel agent update over one shared random sequence;
  // bit-identical to the serial path for every worker count.
  agent,
  // Serial reference on the grid representation; workers must be 1.
  grid_reference,
};

// Stateful stepper. Every worker owns a private generator clone that is
// fast-forwarded once to its block's first global draw index and then
// repositioned once per step with precomputed jump coefficients, so the
// fast-forward cost per step stays O(log N) however long the run gets.
class Engine {
 public:
  Engine(const SimParams& params, unsigned workers,
         EngineKind kind = EngineKind::agent);

  // Advances at most `steps` further steps, stopping at params.steps.
  void advance(std::uint64_t steps);
  void run() { advance(params_.steps); }

  const SimParams& params() const { return params_; }
  std::uint64_t steps_done() const { return steps_done_; }
  std::uint64_t checksum() const { return hash_; }
  std::uint64_t draws_consumed() const { return draws_; }
  const std::vector<Frame>& frames() const { return frames_; }

  AgentState snapshot() const;
  Observables observables() const { return measure(snapshot()); }

 private:
  void advance_agent(std::uint64_t count);
  void advance_grid(std::uint64_t count);
  void record_frame_if_due();

  SimParams params_;
  unsigned workers_ = 1;
  EngineKind kind_ = EngineKind::agent;
  bool record_ = false;

  AgentState agent_;
  std::vector<std::uint64_t> next_positions_;
  std::vector<std::uint64_t> next_velocities_;
  GridState grid_;

  Partition partition_;
  std::vector<Lcg> worker_rng_;
  std::vector<JumpCoefficients> step_jump_;
  std::vector<std::uint64_t> wrap_counts_;

  std::uint64_t hash_ = kFnvOffsetBasis;
  std::uint64_t steps_done_ = 0;
  std::uint64_t draws_ = 0;
  std::vector<Frame> frames_;
};

struct RunResult {
  AgentState final_state;
  std::vector<Frame> frames;
  std::uint64_t checksum = 0;
  std::uint64_t draws_consumed = 0;
};

// init_state followed by params.steps parallel steps. Frames follow the
// output policy; the checksum always covers every step so verification
// works with output switched off.
RunResult run(const SimParams& params, unsigned workers);

}  // namespace nasch
