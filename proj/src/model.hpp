#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lcg.hpp"

namespace nasch {

enum class OutputMode { none, ascii, pgm };

// Full experiment description. Physics only; the worker count lives
// outside so that identical parameters mean identical trajectories no
// matter how they are executed.
struct SimParams {
  std::uint64_t road_length = 0;  // L, cells on the ring
  std::uint64_t car_count = 0;    // N
  std::uint64_t v_max = 5;        // top speed, cells per step
  double p = 0.13;                // random deceleration probability
  std::uint64_t steps = 0;        // T
  std::uint64_t seed = 0;
  OutputMode output_mode = OutputMode::none;
  std::uint64_t output_stride = 1;  // steps between recorded frames

  // Throws std::invalid_argument naming the violated constraint.
  void validate() const;
};

// Per-car view of the ring: position and velocity vectors of length N.
//
// Positions are strictly ascending at all times. After each move the
// cars that crossed the origin form a suffix of the arrays and are
// rotated to the front, so array index always equals position rank.
// This keeps the per-step draw order (ascending index) identical to the
// grid path's ascending-cell scan even after wraparound.
struct AgentState {
  std::vector<std::uint64_t> positions;
  std::vector<std::uint64_t> velocities;
  std::uint64_t road_length = 0;
};

// Per-cell view: velocity of the occupant, or kEmpty.
struct GridState {
  static constexpr std::int64_t kEmpty = -1;
  std::vector<std::int64_t> cells;
};

struct Observables {
  double mean_velocity = 0.0;  // cells per step, sampled after the move
  double density = 0.0;        // N / L
  double flow = 0.0;           // density * mean_velocity
};

// Cars equally spaced at floor(i*L/N), all velocities zero.
AgentState init_state(const SimParams& params);

// Empty cells between car `car` and the next car ahead on the ring;
// L - 1 for a lone car.
inline std::uint64_t gap_ahead(const AgentState& state, std::size_t car) {
  const std::size_t n = state.positions.size();
  const std::uint64_t ahead = state.positions[car + 1 == n ? 0 : car + 1];
  return (ahead + state.road_length - state.positions[car] - 1) %
         state.road_length;
}

// One synchronous update: accelerate, brake to gap, randomly decelerate
// with probability p, move. Consumes exactly N draws in ascending car
// order, one per car, whatever the state.
void step_serial(AgentState& state, Lcg& rng, const SimParams& params);

GridState agent_to_grid(const AgentState& state);
AgentState grid_to_agent(const GridState& state);

// Same physical update on the grid representation; draws consumed in
// ascending cell order. Matches step_serial through the conversions.
void step_grid_serial(GridState& state, Lcg& rng, const SimParams& params);

Observables measure(const AgentState& state);

}  // namespace nasch
