// Acceptance suite: one line per criterion, PASS or FAIL with detail.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "io.hpp"
#include "lcg.hpp"
#include "model.hpp"
#include "sysinfo.hpp"

using namespace nasch;

namespace {

int g_failures = 0;

void report(const char* name, bool ok, const std::string& note = "") {
  std::printf("%-34s %s%s%s\n", name, ok ? "PASS" : "FAIL",
              note.empty() ? "" : " ", note.c_str());
  if (!ok) ++g_failures;
}

SimParams jam_scenario() {
  SimParams params;
  params.road_length = 1000;
  params.car_count = 200;
  params.v_max = 5;
  params.p = 0.13;
  params.steps = 1000;
  params.seed = 13;
  return params;
}

// 1. One trajectory for every worker count, bit-exact.
void check_thread_invariance() {
  const SimParams params = jam_scenario();
  const std::uint64_t reference = run(params, 1).checksum;
  bool ok = true;
  std::string note;
  for (unsigned workers : {2u, 3u, 4u, 5u, 8u}) {
    const std::uint64_t checksum = run(params, workers).checksum;
    if (checksum != reference) {
      ok = false;
      note = "(workers " + std::to_string(workers) + " diverges)";
      break;
    }
  }
  report("1 thread-count invariance", ok, note);
}

// 2. Jump-ahead against a plain sequential loop written from scratch.
void check_jump_oracle() {
  bool ok = true;
  std::string note;
  const std::uint64_t seeds[] = {1, 42, 1ull << 30};
  const std::uint64_t spans[] = {0, 1, 2, 7, 100, 12345, 1000000};
  for (const std::uint64_t seed : seeds) {
    for (const std::uint64_t span : spans) {
      std::uint64_t expected = seed % 2147483647ull;
      if (expected == 0) expected = 1;
      for (std::uint64_t i = 0; i < span; ++i) {
        expected = (48271 * expected) % 2147483647ull;
      }
      Lcg gen = Lcg::seeded(seed);
      gen.jump(span);
      if (gen.state != expected) {
        ok = false;
        note = "(seed " + std::to_string(seed) + ", span " +
               std::to_string(span) + ")";
      }
    }
  }
  report("2 generator jump oracle", ok, note);
}

// 3 + 4. Randomized sweep: the two serial representations must agree
// cell for cell, and the agent states must satisfy every structural
// invariant after every step.
void check_equivalence_and_invariants() {
  std::mt19937_64 rd(20260823);
  bool paths_agree = true;
  bool invariants_hold = true;
  std::string eq_note;
  std::string inv_note;

  for (int trial = 0; trial < 100; ++trial) {
    SimParams params;
    params.road_length = 1 + rd() % 200;
    params.car_count = 1 + rd() % params.road_length;
    params.v_max = 1 + rd() % 7;
    params.p = static_cast<double>(rd() % 10001) / 10000.0;
    params.steps = 1 + rd() % 200;
    params.seed = rd();

    Engine agent(params, 1);
    Engine grid(params, 1, EngineKind::grid_reference);
    for (std::uint64_t t = 0; t < params.steps; ++t) {
      agent.advance(1);
      grid.advance(1);
      const AgentState a = agent.snapshot();
      const AgentState g = grid.snapshot();
      if (paths_agree &&
          (a.positions != g.positions || a.velocities != g.velocities)) {
        paths_agree = false;
        eq_note = "(trial " + std::to_string(trial) + ", step " +
                  std::to_string(t + 1) + ")";
      }
      bool step_ok = a.positions.size() == params.car_count;
      for (std::size_t i = 0; step_ok && i < a.positions.size(); ++i) {
        if (a.positions[i] >= params.road_length) step_ok = false;
        if (i > 0 && a.positions[i - 1] >= a.positions[i]) step_ok = false;
        if (a.velocities[i] > params.v_max) step_ok = false;
      }
      if (invariants_hold && !step_ok) {
        invariants_hold = false;
        inv_note = "(trial " + std::to_string(trial) + ", step " +
                   std::to_string(t + 1) + ")";
      }
    }
    if (agent.draws_consumed() != params.steps * params.car_count) {
      invariants_hold = false;
      inv_note = "(trial " + std::to_string(trial) + ": draw count)";
    }
  }
  report("3 agent/grid path equivalence", paths_agree, eq_note);
  report("4 per-step physics invariants", invariants_hold, inv_note);
}

// 5. Low density: mean velocity settles at v_max - p.
void check_free_flow_law() {
  SimParams params;
  params.road_length = 4000;
  params.car_count = 200;  // density 0.05
  params.v_max = 5;
  params.p = 0.13;
  params.steps = 10000;
  params.seed = 13;

  Engine engine(params, 1);
  double sum = 0.0;
  for (std::uint64_t t = 1; t <= params.steps; ++t) {
    engine.advance(1);
    if (t > 5000) sum += engine.observables().mean_velocity;
  }
  const double mean = sum / 5000.0;
  const double target = 4.87;
  const double tolerance = 0.02;
  const bool ok = std::abs(mean - target) <= tolerance;
  char note[64];
  std::snprintf(note, sizeof(note), "(mean %.4f, target %.2f +- %.2f)", mean,
                target, tolerance);
  report("5 free-flow mean velocity", ok, note);
}

// 6. Dense ring: congestion pulls the mean velocity down and the jam
// pattern drifts opposite to the driving direction.
void check_jam_drift() {
  SimParams params = jam_scenario();
  params.output_mode = OutputMode::ascii;
  params.output_stride = 1;

  Engine engine(params, 1);
  double sum = 0.0;
  for (std::uint64_t t = 1; t <= params.steps; ++t) {
    engine.advance(1);
    if (t > params.steps - 500) sum += engine.observables().mean_velocity;
  }
  const double mean = sum / 500.0;
  const bool congested = mean < 4.5;

  // Mean-centered circular cross-correlation between occupancy rows 50
  // steps apart, averaged over a band of settled times. A jam moving
  // backward puts the peak at a negative displacement.
  const std::int64_t L = static_cast<std::int64_t>(params.road_length);
  const double density = static_cast<double>(params.car_count) /
                         static_cast<double>(params.road_length);
  const auto& frames = engine.frames();
  auto centered_row = [&](std::size_t index) {
    std::vector<double> row(params.road_length, -density);
    for (const std::uint64_t x : frames[index].positions) {
      row[x] += 1.0;
    }
    return row;
  };

  const std::int64_t lag = 50;
  std::vector<double> correlation(params.road_length, 0.0);
  for (std::size_t t = 600; t + lag < frames.size(); t += 10) {
    const std::vector<double> early = centered_row(t);
    const std::vector<double> late = centered_row(t + lag);
    for (std::int64_t d = 0; d < L; ++d) {
      double c = 0.0;
      for (std::int64_t x = 0; x < L; ++x) {
        std::int64_t shifted = x + d;
        if (shifted >= L) shifted -= L;
        c += early[x] * late[shifted];
      }
      correlation[d] += c;
    }
  }
  std::int64_t best_d = 0;
  double best_c = correlation[0];
  for (std::int64_t d = 1; d < L; ++d) {
    if (correlation[d] > best_c) {
      best_c = correlation[d];
      best_d = d;
    }
  }
  if (best_d > L / 2) best_d -= L;  // displacements live on the ring
  const bool drifts_backward = best_d < 0;

  char note[96];
  std::snprintf(note, sizeof(note),
                "(mean velocity %.4f, correlation peak at %+" PRId64 ")", mean,
                best_d);
  report("6 jam emergence and backward drift", congested && drifts_backward,
         note);
}

// 7. Degenerate configurations with closed-form behavior.
void check_fixed_points() {
  bool ok = true;
  std::string note;

  for (const double p : {0.0, 0.5, 1.0}) {
    SimParams params;
    params.road_length = 50;
    params.car_count = 50;
    params.v_max = 5;
    params.p = p;
    params.steps = 100;
    params.seed = 4;
    AgentState state = init_state(params);
    const AgentState start = state;
    Lcg rng = Lcg::seeded(params.seed);
    for (int t = 0; t < 100; ++t) step_serial(state, rng, params);
    if (state.positions != start.positions ||
        state.velocities != start.velocities) {
      ok = false;
      note = "(full ring moved at p " + std::to_string(p) + ")";
    }
  }

  SimParams single;
  single.road_length = 100;
  single.car_count = 1;
  single.v_max = 5;
  single.p = 1.0;
  single.steps = 100;
  single.seed = 8;
  AgentState stuck = init_state(single);
  Lcg rng = Lcg::seeded(single.seed);
  for (int t = 0; t < 100; ++t) {
    step_serial(stuck, rng, single);
    if (stuck.positions[0] != 0 || stuck.velocities[0] != 0) {
      ok = false;
      note = "(car moved at p=1)";
      break;
    }
  }

  single.p = 0.0;
  AgentState cruiser = init_state(single);
  Lcg rng2 = Lcg::seeded(single.seed);
  for (int t = 0; t < 100; ++t) {
    step_serial(cruiser, rng2, single);
    if (t >= 50 && cruiser.velocities[0] != single.v_max) {
      ok = false;
      note = "(car below top speed at p=0)";
      break;
    }
  }

  report("7 degenerate fixed points", ok, note);
}

// 8. Large problem: workers must not change the checksum; with enough
// physical cores, four workers must beat one on wall time.
void check_scaling_smoke() {
  SimParams params;
  params.road_length = 1000000;
  params.car_count = 200000;
  params.v_max = 5;
  params.p = 0.13;
  params.steps = 100;
  params.seed = 99;

  auto timed_run = [&](unsigned workers) {
    Engine engine(params, workers);
    const auto begin = std::chrono::steady_clock::now();
    engine.run();
    const auto end = std::chrono::steady_clock::now();
    return std::pair<double, std::uint64_t>(
        std::chrono::duration<double>(end - begin).count(),
        engine.checksum());
  };

  const auto [t1, c1] = timed_run(1);
  const auto [t4, c4] = timed_run(4);
  const bool checksums_equal = c1 == c4;

  const unsigned cores = detect_physical_cores();
  char note[128];
  if (cores >= 4) {
    const bool faster = t4 < t1;
    std::snprintf(note, sizeof(note),
                  "(1 worker %.3fs, 4 workers %.3fs, speedup %.2f)", t1, t4,
                  t1 / t4);
    report("8 scaling smoke test", checksums_equal && faster, note);
  } else {
    std::snprintf(note, sizeof(note),
                  "(checksums equal; speedup clause skipped: %u physical "
                  "core%s, needs 4)",
                  cores, cores == 1 ? "" : "s");
    report("8 scaling smoke test", checksums_equal, note);
  }
}

// 9. Output paths must not feed back into the trajectory, and the byte
// formats are pinned.
void check_output_contract() {
  SimParams params;
  params.road_length = 50;
  params.car_count = 10;
  params.v_max = 3;
  params.p = 0.5;
  params.steps = 20;
  params.seed = 1;

  bool ok = true;
  std::string note;

  params.output_mode = OutputMode::none;
  const std::uint64_t silent = run(params, 1).checksum;
  params.output_mode = OutputMode::ascii;
  const RunResult ascii_serial = run(params, 1);
  const RunResult ascii_wide = run(params, 8);
  params.output_mode = OutputMode::pgm;
  const std::uint64_t pgm = run(params, 1).checksum;
  if (silent != ascii_serial.checksum || silent != pgm) {
    ok = false;
    note = "(output mode changed the checksum)";
  }

  std::ostringstream serial_bytes;
  write_ascii(ascii_serial.frames, serial_bytes);
  std::ostringstream wide_bytes;
  write_ascii(ascii_wide.frames, wide_bytes);
  if (serial_bytes.str() != wide_bytes.str()) {
    ok = false;
    note = "(ascii bytes differ between 1 and 8 workers)";
  }

  SpacetimeImage image;
  image.rows = 1;
  image.cols = 3;
  image.occupancy = {0, 1, 0};
  std::ostringstream pgm_bytes(std::ios::binary);
  write_pgm(image, pgm_bytes);
  const std::string expected =
      std::string("P5\n3 1\n255\n") + '\xff' + '\x00' + '\xff';
  if (pgm_bytes.str() != expected) {
    ok = false;
    note = "(pgm bytes off the pinned layout)";
  }

  report("9 output contract", ok, note);
}

}  // namespace

int main() {
  check_thread_invariance();
  check_jump_oracle();
  check_equivalence_and_invariants();
  check_free_flow_law();
  check_jam_drift();
  check_fixed_points();
  check_scaling_smoke();
  check_output_contract();
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria failed\n", g_failures);
  }
  return g_failures;
}
