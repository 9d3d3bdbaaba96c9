#include "model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nasch {

void SimParams::validate() const {
  if (road_length < 1) {
    throw std::invalid_argument("road_length must be at least 1");
  }
  if (car_count < 1 || car_count > road_length) {
    throw std::invalid_argument("car_count must be in [1, road_length] (got " +
                                std::to_string(car_count) + " cars on " +
                                std::to_string(road_length) + " cells)");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("p must be in [0, 1]");
  }
  if (v_max < 1) {
    throw std::invalid_argument("v_max must be at least 1");
  }
  if (output_stride < 1) {
    throw std::invalid_argument("output_stride must be at least 1");
  }
}

AgentState init_state(const SimParams& params) {
  params.validate();
  AgentState state;
  state.road_length = params.road_length;
  state.positions.resize(params.car_count);
  state.velocities.assign(params.car_count, 0);
  for (std::uint64_t i = 0; i < params.car_count; ++i) {
    state.positions[i] = i * params.road_length / params.car_count;
  }
  return state;
}

void step_serial(AgentState& state, Lcg& rng, const SimParams& params) {
  const std::size_t n = state.positions.size();
  const std::uint64_t road = state.road_length;

  // Velocities first; positions stay untouched until every velocity is
  // final, so gap_ahead always sees this step's starting configuration.
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t v = std::min(state.velocities[i] + 1, params.v_max);
    v = std::min(v, gap_ahead(state, i));
    if (rng.uniform01() < params.p && v > 0) {
      --v;
    }
    state.velocities[i] = v;
  }

  // Braking guarantees x_i + v_i < x_{i+1} + v_{i+1} before the modulo,
  // so the cars that cross the origin are a suffix; rotating them to the
  // front restores strictly ascending positions.
  std::size_t wrapped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t x = state.positions[i] + state.velocities[i];
    if (x >= road) {
      x -= road;
      ++wrapped;
    }
    state.positions[i] = x;
  }
  if (wrapped > 0) {
    std::rotate(state.positions.begin(), state.positions.end() - wrapped,
                state.positions.end());
    std::rotate(state.velocities.begin(), state.velocities.end() - wrapped,
                state.velocities.end());
  }
}

GridState agent_to_grid(const AgentState& state) {
  GridState grid;
  grid.cells.assign(state.road_length, GridState::kEmpty);
  for (std::size_t i = 0; i < state.positions.size(); ++i) {
    grid.cells[state.positions[i]] =
        static_cast<std::int64_t>(state.velocities[i]);
  }
  return grid;
}

AgentState grid_to_agent(const GridState& state) {
  AgentState agent;
  agent.road_length = state.cells.size();
  for (std::size_t x = 0; x < state.cells.size(); ++x) {
    if (state.cells[x] != GridState::kEmpty) {
      agent.positions.push_back(x);
      agent.velocities.push_back(static_cast<std::uint64_t>(state.cells[x]));
    }
  }
  return agent;
}

void step_grid_serial(GridState& state, Lcg& rng, const SimParams& params) {
  const std::uint64_t road = state.cells.size();

  std::vector<std::uint64_t> occupied;
  for (std::uint64_t x = 0; x < road; ++x) {
    if (state.cells[x] != GridState::kEmpty) {
      occupied.push_back(x);
    }
  }
  const std::size_t n = occupied.size();

  std::vector<std::uint64_t> velocities(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t x = occupied[i];
    const std::uint64_t ahead = occupied[i + 1 == n ? 0 : i + 1];
    const std::uint64_t gap = (ahead + road - x - 1) % road;
    std::uint64_t v =
        std::min(static_cast<std::uint64_t>(state.cells[x]) + 1, params.v_max);
    v = std::min(v, gap);
    if (rng.uniform01() < params.p && v > 0) {
      --v;
    }
    velocities[i] = v;
  }

  std::fill(state.cells.begin(), state.cells.end(), GridState::kEmpty);
  for (std::size_t i = 0; i < n; ++i) {
    state.cells[(occupied[i] + velocities[i]) % road] =
        static_cast<std::int64_t>(velocities[i]);
  }
}

Observables measure(const AgentState& state) {
  std::uint64_t total = 0;
  for (const std::uint64_t v : state.velocities) {
    total += v;
  }
  Observables obs;
  const double n = static_cast<double>(state.velocities.size());
  obs.mean_velocity = static_cast<double>(total) / n;
  obs.density = n / static_cast<double>(state.road_length);
  obs.flow = obs.density * obs.mean_velocity;
  return obs;
}

}  // namespace nasch
