#include "engine.hpp"

#include <omp.h>

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace nasch {

std::uint64_t hash_row(std::uint64_t hash,
                       const std::vector<std::uint64_t>& positions,
                       const std::vector<std::uint64_t>& velocities) {
  for (const std::uint64_t x : positions) {
    hash = fnv1a64_value(hash, x);
  }
  for (const std::uint64_t v : velocities) {
    hash = fnv1a64_value(hash, v);
  }
  return hash;
}

std::uint64_t checksum_trajectory(const std::vector<TrajectoryRow>& rows) {
  std::uint64_t hash = kFnvOffsetBasis;
  for (const TrajectoryRow& row : rows) {
    hash = hash_row(hash, row.positions, row.velocities);
  }
  return hash;
}

Partition make_partition(std::uint64_t car_count, unsigned workers) {
  if (workers < 1) {
    throw std::invalid_argument("worker count must be at least 1");
  }
  Partition part;
  part.blocks.resize(workers);
  for (unsigned b = 0; b < workers; ++b) {
    part.blocks[b].lo = b * car_count / workers;
    part.blocks[b].hi = (b + 1) * car_count / workers;
  }
  return part;
}

Engine::Engine(const SimParams& params, unsigned workers, EngineKind kind)
    : params_(params), workers_(workers), kind_(kind) {
  if (workers < 1) {
    throw std::invalid_argument("worker count must be at least 1");
  }
  if (kind == EngineKind::grid_reference && workers != 1) {
    throw std::invalid_argument("grid reference engine is serial only");
  }
  agent_ = init_state(params_);
  record_ = params_.output_mode != OutputMode::none;

  const std::uint64_t n = params_.car_count;
  if (kind_ == EngineKind::agent) {
    next_positions_.resize(n);
    next_velocities_.resize(n);
    partition_ = make_partition(n, workers_);
    wrap_counts_.assign(workers_, 0);

    // Worker w starts at global draw index lo_w; after drawing its block
    // at step t it sits at t*N + hi_w, and one constant-span jump of
    // N - (hi_w - lo_w) lands on (t+1)*N + lo_w.
    const Lcg seed_state = Lcg::seeded(params_.seed);
    worker_rng_.assign(workers_, seed_state);
    step_jump_.resize(workers_);
    for (unsigned w = 0; w < workers_; ++w) {
      const auto& block = partition_.blocks[w];
      worker_rng_[w].jump(block.lo);
      step_jump_[w] = jump_coefficients(seed_state, n - (block.hi - block.lo));
    }
  } else {
    grid_ = agent_to_grid(agent_);
    worker_rng_.assign(1, Lcg::seeded(params_.seed));
  }

  record_frame_if_due();
}

void Engine::record_frame_if_due() {
  if (record_ && steps_done_ < params_.steps &&
      steps_done_ % params_.output_stride == 0) {
    frames_.push_back({steps_done_, agent_.positions, agent_.velocities});
  }
}

void Engine::advance(std::uint64_t steps) {
  const std::uint64_t remaining = params_.steps - steps_done_;
  const std::uint64_t count = std::min(steps, remaining);
  if (count == 0) {
    return;
  }
  if (kind_ == EngineKind::agent) {
    advance_agent(count);
  } else {
    advance_grid(count);
  }
}

void Engine::advance_agent(std::uint64_t count) {
  const std::uint64_t n = params_.car_count;
  const std::uint64_t road = params_.road_length;
  const std::uint64_t v_max = params_.v_max;
  const double p = params_.p;
  const unsigned workers = workers_;

#pragma omp parallel num_threads(static_cast<int>(workers))
  {
    // Blocks are strided over the team so the result does not depend on
    // how many threads the runtime actually granted.
    const unsigned team = static_cast<unsigned>(omp_get_num_threads());
    const unsigned tid = static_cast<unsigned>(omp_get_thread_num());

    for (std::uint64_t s = 0; s < count; ++s) {
      const std::uint64_t* x = agent_.positions.data();
      std::uint64_t* v = agent_.velocities.data();

      // Accelerate, brake, randomize. Positions are read-only here, so
      // reading the first position of the next block is safe.
      for (unsigned w = tid; w < workers; w += team) {
        const auto [lo, hi] = partition_.blocks[w];
        Lcg rng = worker_rng_[w];
        std::uint64_t wrapped = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
          std::uint64_t vi = std::min(v[i] + 1, v_max);
          const std::uint64_t ahead = x[i + 1 == n ? 0 : i + 1];
          // positions are sorted, so only the last car wraps its gap
          const std::uint64_t gap =
              ahead > x[i] ? ahead - x[i] - 1 : ahead + road - x[i] - 1;
          vi = std::min(vi, gap);
          if (rng.uniform01() < p && vi > 0) {
            --vi;
          }
          v[i] = vi;
          if (x[i] + vi >= road) {
            ++wrapped;
          }
        }
        if (hi > lo) {
          rng.apply(step_jump_[w]);
        }
        worker_rng_[w] = rng;
        wrap_counts_[w] = wrapped;
      }
#pragma omp barrier

      // Every velocity is final; move into the back buffer, shifted so
      // the wrapped suffix lands at the front and positions stay sorted.
      std::uint64_t shift = 0;
      for (unsigned w = 0; w < workers; ++w) {
        shift += wrap_counts_[w];
      }
      std::uint64_t* nx = next_positions_.data();
      std::uint64_t* nv = next_velocities_.data();
      for (unsigned w = tid; w < workers; w += team) {
        const auto [lo, hi] = partition_.blocks[w];
        for (std::uint64_t i = lo; i < hi; ++i) {
          std::uint64_t dst = i + shift;
          if (dst >= n) {
            dst -= n;
          }
          std::uint64_t xi = x[i] + v[i];
          if (xi >= road) {
            xi -= road;
          }
          nx[dst] = xi;
          nv[dst] = v[i];
        }
      }
#pragma omp barrier

#pragma omp single
      {
        agent_.positions.swap(next_positions_);
        agent_.velocities.swap(next_velocities_);
        ++steps_done_;
        draws_ += n;
        hash_ = hash_row(hash_, agent_.positions, agent_.velocities);
        record_frame_if_due();
      }  // implicit barrier
    }
  }
}

void Engine::advance_grid(std::uint64_t count) {
  Lcg& rng = worker_rng_[0];
  for (std::uint64_t s = 0; s < count; ++s) {
    step_grid_serial(grid_, rng, params_);
    agent_ = grid_to_agent(grid_);
    ++steps_done_;
    draws_ += params_.car_count;
    hash_ = hash_row(hash_, agent_.positions, agent_.velocities);
    record_frame_if_due();
  }
}

AgentState Engine::snapshot() const {
  return agent_;
}

RunResult run(const SimParams& params, unsigned workers) {
  Engine engine(params, workers);
  engine.run();
  RunResult result;
  result.final_state = engine.snapshot();
  result.frames = engine.frames();
  result.checksum = engine.checksum();
  result.draws_consumed = engine.draws_consumed();
  return result;
}

}  // namespace nasch
