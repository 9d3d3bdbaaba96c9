#include "nasch/nasch.h"

#include <cstring>
#include <new>
#include <string>

#include "engine.hpp"
#include "io.hpp"
#include "model.hpp"
#include "sysinfo.hpp"

struct nasch_params {
  nasch::SimParams params;
};

struct nasch_sim {
  nasch::Engine engine;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

// Runs `fn` and folds any exception into a status + last-error message.
template <typename Fn>
nasch_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const nasch::ParamError& err) {
    set_error(err.what());
    return NASCH_ERR_PARSE;
  } catch (const nasch::IoError& err) {
    set_error(err.what());
    return NASCH_ERR_IO;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return NASCH_ERR_INVALID;
  } catch (const std::exception& err) {
    set_error(err.what());
    return NASCH_ERR_INVALID;
  }
}

nasch_status require(bool ok, const char* message) {
  if (ok) return NASCH_OK;
  set_error(message);
  return NASCH_ERR_INVALID;
}

nasch::OutputMode to_mode(nasch_output_mode mode) {
  switch (mode) {
    case NASCH_OUTPUT_ASCII:
      return nasch::OutputMode::ascii;
    case NASCH_OUTPUT_PGM:
      return nasch::OutputMode::pgm;
    case NASCH_OUTPUT_NONE:
      break;
  }
  return nasch::OutputMode::none;
}

nasch_output_mode from_mode(nasch::OutputMode mode) {
  switch (mode) {
    case nasch::OutputMode::ascii:
      return NASCH_OUTPUT_ASCII;
    case nasch::OutputMode::pgm:
      return NASCH_OUTPUT_PGM;
    case nasch::OutputMode::none:
      break;
  }
  return NASCH_OUTPUT_NONE;
}

}  // namespace

extern "C" {

const char* nasch_last_error(void) { return g_last_error.c_str(); }

nasch_status nasch_params_new(nasch_params** out) {
  if (auto status = require(out != nullptr, "out pointer is null")) {
    return status;
  }
  return guarded([&] {
    *out = new nasch_params{};
    return NASCH_OK;
  });
}

nasch_status nasch_params_parse(const char* text, nasch_params** out,
                                unsigned* out_threads) {
  if (auto status = require(text != nullptr && out != nullptr,
                            "text and out must be non-null")) {
    return status;
  }
  return guarded([&] {
    nasch::ParamFile file = nasch::read_params(text);
    *out = new nasch_params{file.params};
    if (out_threads) *out_threads = file.threads;
    return NASCH_OK;
  });
}

nasch_status nasch_params_load(const char* path, nasch_params** out,
                               unsigned* out_threads) {
  if (auto status = require(path != nullptr && out != nullptr,
                            "path and out must be non-null")) {
    return status;
  }
  return guarded([&] {
    nasch::ParamFile file = nasch::read_params_file(path);
    *out = new nasch_params{file.params};
    if (out_threads) *out_threads = file.threads;
    return NASCH_OK;
  });
}

void nasch_params_free(nasch_params* params) { delete params; }

#define NASCH_SETTER(name, field, type)                                  \
  nasch_status nasch_params_set_##name(nasch_params* params, type v) {   \
    if (auto status = require(params != nullptr, "params is null")) {    \
      return status;                                                     \
    }                                                                    \
    params->params.field = v;                                            \
    return NASCH_OK;                                                     \
  }

NASCH_SETTER(length, road_length, uint64_t)
NASCH_SETTER(ncars, car_count, uint64_t)
NASCH_SETTER(vmax, v_max, uint64_t)
NASCH_SETTER(p, p, double)
NASCH_SETTER(steps, steps, uint64_t)
NASCH_SETTER(seed, seed, uint64_t)
NASCH_SETTER(stride, output_stride, uint64_t)

#undef NASCH_SETTER

nasch_status nasch_params_set_output(nasch_params* params,
                                     nasch_output_mode mode) {
  if (auto status = require(params != nullptr, "params is null")) {
    return status;
  }
  params->params.output_mode = to_mode(mode);
  return NASCH_OK;
}

uint64_t nasch_params_length(const nasch_params* params) {
  return params ? params->params.road_length : 0;
}

uint64_t nasch_params_ncars(const nasch_params* params) {
  return params ? params->params.car_count : 0;
}

uint64_t nasch_params_vmax(const nasch_params* params) {
  return params ? params->params.v_max : 0;
}

double nasch_params_p(const nasch_params* params) {
  return params ? params->params.p : 0.0;
}

uint64_t nasch_params_steps(const nasch_params* params) {
  return params ? params->params.steps : 0;
}

uint64_t nasch_params_seed(const nasch_params* params) {
  return params ? params->params.seed : 0;
}

nasch_output_mode nasch_params_output(const nasch_params* params) {
  return params ? from_mode(params->params.output_mode) : NASCH_OUTPUT_NONE;
}

uint64_t nasch_params_stride(const nasch_params* params) {
  return params ? params->params.output_stride : 0;
}

nasch_status nasch_params_validate(const nasch_params* params) {
  if (auto status = require(params != nullptr, "params is null")) {
    return status;
  }
  return guarded([&] {
    params->params.validate();
    return NASCH_OK;
  });
}

nasch_status nasch_sim_new(const nasch_params* params, unsigned workers,
                           nasch_sim** out) {
  return nasch_sim_new_kind(params, workers, NASCH_ENGINE_AGENT, out);
}

nasch_status nasch_sim_new_kind(const nasch_params* params, unsigned workers,
                                nasch_engine_kind kind, nasch_sim** out) {
  if (auto status = require(params != nullptr && out != nullptr,
                            "params and out must be non-null")) {
    return status;
  }
  if (auto status = require(kind == NASCH_ENGINE_AGENT ||
                                kind == NASCH_ENGINE_GRID_REFERENCE,
                            "unknown engine kind")) {
    return status;
  }
  return guarded([&] {
    const nasch::EngineKind engine_kind = kind == NASCH_ENGINE_AGENT
                                              ? nasch::EngineKind::agent
                                              : nasch::EngineKind::grid_reference;
    *out = new nasch_sim{nasch::Engine(params->params, workers, engine_kind)};
    return NASCH_OK;
  });
}

void nasch_sim_free(nasch_sim* sim) { delete sim; }

nasch_status nasch_sim_advance(nasch_sim* sim, uint64_t steps) {
  if (auto status = require(sim != nullptr, "sim is null")) {
    return status;
  }
  return guarded([&] {
    sim->engine.advance(steps);
    return NASCH_OK;
  });
}

nasch_status nasch_sim_run(nasch_sim* sim) {
  if (auto status = require(sim != nullptr, "sim is null")) {
    return status;
  }
  return guarded([&] {
    sim->engine.run();
    return NASCH_OK;
  });
}

uint64_t nasch_sim_steps_done(const nasch_sim* sim) {
  return sim ? sim->engine.steps_done() : 0;
}

uint64_t nasch_sim_checksum(const nasch_sim* sim) {
  return sim ? sim->engine.checksum() : 0;
}

uint64_t nasch_sim_draws(const nasch_sim* sim) {
  return sim ? sim->engine.draws_consumed() : 0;
}

uint64_t nasch_sim_frame_count(const nasch_sim* sim) {
  return sim ? sim->engine.frames().size() : 0;
}

nasch_status nasch_sim_observables(const nasch_sim* sim, double* out_density,
                                   double* out_mean_velocity,
                                   double* out_flow) {
  if (auto status = require(sim != nullptr, "sim is null")) {
    return status;
  }
  return guarded([&] {
    const nasch::Observables obs = sim->engine.observables();
    if (out_density) *out_density = obs.density;
    if (out_mean_velocity) *out_mean_velocity = obs.mean_velocity;
    if (out_flow) *out_flow = obs.flow;
    return NASCH_OK;
  });
}

nasch_status nasch_sim_state(const nasch_sim* sim, uint64_t* positions,
                             uint64_t* velocities, size_t capacity) {
  if (auto status = require(sim != nullptr, "sim is null")) {
    return status;
  }
  return guarded([&] {
    const nasch::AgentState state = sim->engine.snapshot();
    const std::size_t n = state.positions.size();
    if (auto status = require(capacity >= n, "capacity below car count")) {
      return status;
    }
    if (positions) {
      std::memcpy(positions, state.positions.data(), n * sizeof(uint64_t));
    }
    if (velocities) {
      std::memcpy(velocities, state.velocities.data(), n * sizeof(uint64_t));
    }
    return NASCH_OK;
  });
}

nasch_status nasch_sim_write_ascii(const nasch_sim* sim, const char* path) {
  if (auto status = require(sim != nullptr && path != nullptr,
                            "sim and path must be non-null")) {
    return status;
  }
  if (auto status =
          require(sim->engine.params().output_mode == nasch::OutputMode::ascii,
                  "simulation was not configured with output = ascii")) {
    return status;
  }
  return guarded([&] {
    nasch::write_ascii_file(sim->engine.frames(), path);
    return NASCH_OK;
  });
}

nasch_status nasch_sim_write_pgm(const nasch_sim* sim, const char* path) {
  if (auto status = require(sim != nullptr && path != nullptr,
                            "sim and path must be non-null")) {
    return status;
  }
  if (auto status =
          require(sim->engine.params().output_mode == nasch::OutputMode::pgm,
                  "simulation was not configured with output = pgm")) {
    return status;
  }
  return guarded([&] {
    const nasch::SpacetimeImage image = nasch::render_spacetime(
        sim->engine.frames(), sim->engine.params().road_length);
    nasch::write_pgm_file(image, path);
    return NASCH_OK;
  });
}

unsigned nasch_physical_cores(void) { return nasch::detect_physical_cores(); }

}  // extern "C"
