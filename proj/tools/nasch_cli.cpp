// Command-line front end: run, verify, bench. Talks to the simulator
// exclusively through the public C interface.

#include <algorithm>
#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nasch/nasch.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitIo = 3;

int exit_code_for(nasch_status status) {
  switch (status) {
    case NASCH_OK:
      return kExitOk;
    case NASCH_ERR_IO:
      return kExitIo;
    case NASCH_ERR_PARSE:
    case NASCH_ERR_INVALID:
      break;
  }
  return kExitUsage;
}

// Prints the library diagnostic and maps the status to an exit code.
int fail(const char* context, nasch_status status) {
  std::fprintf(stderr, "error: %s: %s\n", context, nasch_last_error());
  return exit_code_for(status);
}

std::string hex_checksum(uint64_t checksum) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, checksum);
  return buf;
}

struct ParamsHandle {
  nasch_params* ptr = nullptr;
  ~ParamsHandle() { nasch_params_free(ptr); }
};

struct SimHandle {
  nasch_sim* ptr = nullptr;
  ~SimHandle() { nasch_sim_free(ptr); }
};

// Worker-count precedence: --threads flag, then NASCH_THREADS, then the
// parameter file, then 1.
int resolve_threads(std::optional<unsigned> flag, unsigned file_threads,
                    unsigned* out) {
  unsigned threads = file_threads;
  if (const char* env = std::getenv("NASCH_THREADS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || value < 1) {
      std::fprintf(stderr, "error: NASCH_THREADS must be a positive integer, got '%s'\n",
                   env);
      return kExitUsage;
    }
    threads = static_cast<unsigned>(value);
  }
  if (flag) threads = *flag;
  if (threads < 1) {
    std::fprintf(stderr, "error: --threads must be at least 1\n");
    return kExitUsage;
  }
  *out = threads;
  return kExitOk;
}

void warn_if_oversubscribed(unsigned threads) {
  const unsigned cores = nasch_physical_cores();
  if (cores > 0 && threads > cores) {
    std::fprintf(stderr,
                 "warning: %u threads on %u physical core%s; expect no "
                 "further speedup beyond the core count\n",
                 threads, cores, cores == 1 ? "" : "s");
  }
}

void print_params_line(const nasch_params* params, unsigned threads) {
  std::printf("length=%" PRIu64 " ncars=%" PRIu64 " vmax=%" PRIu64
              " p=%g steps=%" PRIu64 " seed=%" PRIu64 " threads=%u\n",
              nasch_params_length(params), nasch_params_ncars(params),
              nasch_params_vmax(params), nasch_params_p(params),
              nasch_params_steps(params), nasch_params_seed(params), threads);
}

// ---- run ---------------------------------------------------------------

struct RunArgs {
  std::string params_path;
  std::optional<unsigned> threads;
  std::optional<std::string> output;
  std::optional<std::string> out_path;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> steps;
};

int cmd_run(const RunArgs& args) {
  ParamsHandle params;
  unsigned file_threads = 1;
  if (nasch_status status =
          nasch_params_load(args.params_path.c_str(), &params.ptr, &file_threads)) {
    return fail(args.params_path.c_str(), status);
  }
  if (args.seed) nasch_params_set_seed(params.ptr, *args.seed);
  if (args.steps) nasch_params_set_steps(params.ptr, *args.steps);
  if (args.output) {
    const nasch_output_mode mode = *args.output == "ascii" ? NASCH_OUTPUT_ASCII
                                   : *args.output == "pgm" ? NASCH_OUTPUT_PGM
                                                           : NASCH_OUTPUT_NONE;
    nasch_params_set_output(params.ptr, mode);
  }
  if (nasch_status status = nasch_params_validate(params.ptr)) {
    return fail("parameters", status);
  }

  unsigned threads = 1;
  if (int code = resolve_threads(args.threads, file_threads, &threads)) {
    return code;
  }
  warn_if_oversubscribed(threads);

  SimHandle sim;
  if (nasch_status status = nasch_sim_new(params.ptr, threads, &sim.ptr)) {
    return fail("simulation", status);
  }
  if (nasch_status status = nasch_sim_run(sim.ptr)) {
    return fail("simulation", status);
  }

  const nasch_output_mode mode = nasch_params_output(params.ptr);
  if (mode == NASCH_OUTPUT_ASCII) {
    const std::string path = args.out_path.value_or("traffic.txt");
    if (nasch_status status = nasch_sim_write_ascii(sim.ptr, path.c_str())) {
      return fail(path.c_str(), status);
    }
    std::printf("wrote %s (%" PRIu64 " frames)\n", path.c_str(),
                nasch_sim_frame_count(sim.ptr));
  } else if (mode == NASCH_OUTPUT_PGM) {
    const std::string path = args.out_path.value_or("traffic.pgm");
    if (nasch_status status = nasch_sim_write_pgm(sim.ptr, path.c_str())) {
      return fail(path.c_str(), status);
    }
    std::printf("wrote %s (%" PRIu64 " frames)\n", path.c_str(),
                nasch_sim_frame_count(sim.ptr));
  }

  double density = 0.0, mean_velocity = 0.0, flow = 0.0;
  nasch_sim_observables(sim.ptr, &density, &mean_velocity, &flow);
  print_params_line(params.ptr, threads);
  std::printf("density = %.6f\n", density);
  std::printf("mean_velocity = %.6f\n", mean_velocity);
  std::printf("flow = %.6f\n", flow);
  std::printf("checksum = %s\n", hex_checksum(nasch_sim_checksum(sim.ptr)).c_str());
  return kExitOk;
}

// ---- verify ------------------------------------------------------------

// Checksum after `steps` steps with a fresh simulation.
int checksum_at(const nasch_params* params, unsigned workers,
                nasch_engine_kind kind, uint64_t steps, uint64_t* out) {
  SimHandle sim;
  if (nasch_status status =
          nasch_sim_new_kind(params, workers, kind, &sim.ptr)) {
    return fail("simulation", status);
  }
  if (nasch_status status = nasch_sim_advance(sim.ptr, steps)) {
    return fail("simulation", status);
  }
  *out = nasch_sim_checksum(sim.ptr);
  return kExitOk;
}

// First step at which `workers`/`kind` diverges from the 1-worker agent
// run, found by bisection over fresh prefix runs. Divergence never heals
// (the checksum folds every step), so the predicate is monotone.
int first_divergent_step(const nasch_params* params, unsigned workers,
                         nasch_engine_kind kind, uint64_t total_steps,
                         uint64_t* out) {
  uint64_t lo = 1;
  uint64_t hi = total_steps;
  while (lo < hi) {
    const uint64_t mid = lo + (hi - lo) / 2;
    uint64_t reference = 0;
    uint64_t candidate = 0;
    if (int code = checksum_at(params, 1, NASCH_ENGINE_AGENT, mid, &reference)) {
      return code;
    }
    if (int code = checksum_at(params, workers, kind, mid, &candidate)) {
      return code;
    }
    if (reference != candidate) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  *out = lo;
  return kExitOk;
}

struct VerifyArgs {
  std::string params_path;
  unsigned max_threads = 1;
};

int cmd_verify(const VerifyArgs& args) {
  if (args.max_threads < 1) {
    std::fprintf(stderr, "error: --max-threads must be at least 1\n");
    return kExitUsage;
  }
  ParamsHandle params;
  if (nasch_status status =
          nasch_params_load(args.params_path.c_str(), &params.ptr, nullptr)) {
    return fail(args.params_path.c_str(), status);
  }
  const uint64_t total_steps = nasch_params_steps(params.ptr);

  uint64_t reference = 0;
  std::optional<unsigned> bad_workers;
  bool grid_bad = false;
  for (unsigned w = 1; w <= args.max_threads; ++w) {
    uint64_t checksum = 0;
    if (int code =
            checksum_at(params.ptr, w, NASCH_ENGINE_AGENT, total_steps, &checksum)) {
      return code;
    }
    if (w == 1) reference = checksum;
    const bool match = checksum == reference;
    std::printf("workers %u: checksum %s%s\n", w,
                hex_checksum(checksum).c_str(), match ? "" : "  MISMATCH");
    if (!match && !bad_workers) bad_workers = w;
  }
  uint64_t grid_checksum = 0;
  if (int code = checksum_at(params.ptr, 1, NASCH_ENGINE_GRID_REFERENCE,
                             total_steps, &grid_checksum)) {
    return code;
  }
  const bool grid_match = grid_checksum == reference;
  std::printf("grid reference: checksum %s%s\n",
              hex_checksum(grid_checksum).c_str(),
              grid_match ? "" : "  MISMATCH");
  if (!grid_match) grid_bad = true;

  if (!bad_workers && !grid_bad) {
    std::printf("OK: all checksums identical\n");
    return kExitOk;
  }
  if (bad_workers) {
    uint64_t step = 0;
    if (int code = first_divergent_step(params.ptr, *bad_workers,
                                        NASCH_ENGINE_AGENT, total_steps, &step)) {
      return code;
    }
    std::printf("FAILED: workers %u diverges from workers 1 at step %" PRIu64
                "\n",
                *bad_workers, step);
  }
  if (grid_bad) {
    uint64_t step = 0;
    if (int code = first_divergent_step(params.ptr, 1,
                                        NASCH_ENGINE_GRID_REFERENCE,
                                        total_steps, &step)) {
      return code;
    }
    std::printf("FAILED: grid reference diverges from workers 1 at step %" PRIu64
                "\n",
                step);
  }
  return kExitVerify;
}

// ---- bench -------------------------------------------------------------

struct BenchArgs {
  std::string params_path;
  std::vector<unsigned> threads_list;
  unsigned repeats = 3;
  bool no_output = false;
};

struct BenchRow {
  unsigned workers = 0;
  double wall_time = 0.0;
  uint64_t checksum = 0;
  std::string wall_str;
  std::string speedup_str;
  std::string efficiency_str;
};

int cmd_bench(const BenchArgs& args) {
  if (args.repeats < 1) {
    std::fprintf(stderr, "error: --repeats must be at least 1\n");
    return kExitUsage;
  }
  for (unsigned w : args.threads_list) {
    if (w < 1) {
      std::fprintf(stderr, "error: --threads-list entries must be at least 1\n");
      return kExitUsage;
    }
  }
  ParamsHandle params;
  if (nasch_status status =
          nasch_params_load(args.params_path.c_str(), &params.ptr, nullptr)) {
    return fail(args.params_path.c_str(), status);
  }
  if (args.no_output) {
    nasch_params_set_output(params.ptr, NASCH_OUTPUT_NONE);
  }
  const uint64_t total_steps = nasch_params_steps(params.ptr);

  // Speedup is measured against the 1-worker row, so make sure one exists.
  std::vector<unsigned> workers_list = args.threads_list;
  if (std::find(workers_list.begin(), workers_list.end(), 1u) ==
      workers_list.end()) {
    workers_list.insert(workers_list.begin(), 1u);
  }

  std::vector<BenchRow> rows;
  for (unsigned w : workers_list) {
    warn_if_oversubscribed(w);
    BenchRow row;
    row.workers = w;
    row.wall_time = 0.0;
    for (unsigned r = 0; r < args.repeats; ++r) {
      SimHandle sim;
      if (nasch_status status =
              nasch_sim_new(params.ptr, w, &sim.ptr)) {
        return fail("simulation", status);
      }
      const auto begin = std::chrono::steady_clock::now();
      if (nasch_status status = nasch_sim_advance(sim.ptr, total_steps)) {
        return fail("simulation", status);
      }
      const auto end = std::chrono::steady_clock::now();
      const double seconds = std::chrono::duration<double>(end - begin).count();
      if (r == 0 || seconds < row.wall_time) row.wall_time = seconds;
      row.checksum = nasch_sim_checksum(sim.ptr);
    }
    rows.push_back(row);
  }

  // Numbers are formatted once and reused, so the table and the CSV can
  // never disagree.
  const double base = rows.front().wall_time;
  bool checksums_agree = true;
  for (BenchRow& row : rows) {
    const double speedup = row.wall_time > 0.0 ? base / row.wall_time : 1.0;
    const double efficiency = speedup / static_cast<double>(row.workers);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", row.wall_time);
    row.wall_str = buf;
    std::snprintf(buf, sizeof(buf), "%.4f",
                  row.workers == 1 ? 1.0 : speedup);
    row.speedup_str = buf;
    std::snprintf(buf, sizeof(buf), "%.4f",
                  row.workers == 1 ? 1.0 : efficiency);
    row.efficiency_str = buf;
    if (row.checksum != rows.front().checksum) checksums_agree = false;
  }

  std::printf("%8s  %12s  %8s  %10s  %-16s\n", "workers", "wall_time_s",
              "speedup", "efficiency", "checksum");
  for (const BenchRow& row : rows) {
    std::printf("%8u  %12s  %8s  %10s  %s\n", row.workers,
                row.wall_str.c_str(), row.speedup_str.c_str(),
                row.efficiency_str.c_str(), hex_checksum(row.checksum).c_str());
  }
  std::printf("\nworkers,wall_time_s,speedup,efficiency,checksum\n");
  for (const BenchRow& row : rows) {
    std::printf("%u,%s,%s,%s,%s\n", row.workers, row.wall_str.c_str(),
                row.speedup_str.c_str(), row.efficiency_str.c_str(),
                hex_checksum(row.checksum).c_str());
  }
  if (!checksums_agree) {
    std::printf("FAILED: checksums differ across worker counts\n");
    return kExitVerify;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic single-lane traffic simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Run a simulation and print observables and the checksum");
  run->add_option("--params", run_args.params_path, "Parameter file")
      ->required();
  unsigned run_threads = 0;
  CLI::Option* run_threads_opt =
      run->add_option("--threads", run_threads,
                      "Worker count (overrides NASCH_THREADS and the file)");
  std::string run_output;
  CLI::Option* run_output_opt =
      run->add_option("--output", run_output, "Output mode")
          ->check(CLI::IsMember({"none", "ascii", "pgm"}));
  std::string run_out_path;
  CLI::Option* run_out_opt = run->add_option(
      "--out", run_out_path, "Output path (default traffic.txt / traffic.pgm)");
  uint64_t run_seed = 0;
  CLI::Option* run_seed_opt =
      run->add_option("--seed", run_seed, "Seed (overrides the file)");
  uint64_t run_steps = 0;
  CLI::Option* run_steps_opt =
      run->add_option("--steps", run_steps, "Step count (overrides the file)");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check that every worker count reproduces the same trajectory");
  verify->add_option("--params", verify_args.params_path, "Parameter file")
      ->required();
  verify->add_option("--max-threads", verify_args.max_threads,
                     "Verify worker counts 1..W")
      ->required();

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand(
      "bench", "Time the stepping loop across worker counts");
  bench->add_option("--params", bench_args.params_path, "Parameter file")
      ->required();
  bench
      ->add_option("--threads-list", bench_args.threads_list,
                   "Comma-separated worker counts (a 1-worker baseline is "
                   "added when absent)")
      ->required()
      ->delimiter(',');
  bench->add_option("--repeats", bench_args.repeats,
                    "Timed repeats per worker count; the minimum is reported");
  bench->add_flag("--no-output", bench_args.no_output,
                  "Disable frame recording (checksum is unaffected)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (run->parsed()) {
    if (*run_threads_opt) run_args.threads = run_threads;
    if (*run_output_opt) run_args.output = run_output;
    if (*run_out_opt) run_args.out_path = run_out_path;
    if (*run_seed_opt) run_args.seed = run_seed;
    if (*run_steps_opt) run_args.steps = run_steps;
    return cmd_run(run_args);
  }
  if (verify->parsed()) {
    return cmd_verify(verify_args);
  }
  if (bench->parsed()) {
    return cmd_bench(bench_args);
  }
  return kExitUsage;
}
