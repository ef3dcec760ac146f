// Wall-time comparison of the serial reference trial loop against the
// OpenMP-parallel one, plus a bit-identity check between the two.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "semcom/experiment.hpp"

using namespace semcom;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  ScenarioConfig config;
  config.trials = argc > 1 ? std::atoi(argv[1]) : 40;
  config.seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 1;

  const std::vector<Scheme> schemes{Scheme::kProposed, Scheme::kFopg,
                                    Scheme::kFodpg, Scheme::kSuo};

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("trials: %d, schemes: 4, N=%d K=%d\n", config.trials,
              config.n_pairs, config.n_servers);

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = run_trials(config, schemes, ExecutionMode::kSerial);
  const double serial_s = seconds_since(t0);
  std::printf("serial:   %.3f s (%.1f ms/trial)\n", serial_s,
              1e3 * serial_s / config.trials);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = run_trials(config, schemes, ExecutionMode::kParallel);
  const double parallel_s = seconds_since(t0);
  std::printf("parallel: %.3f s (%.1f ms/trial), speedup %.2fx\n", parallel_s,
              1e3 * parallel_s / config.trials, serial_s / parallel_s);

  for (Scheme scheme : schemes) {
    const auto& a = serial.aggregates.at(scheme);
    const auto& b = parallel.aggregates.at(scheme);
    if (a.mean_max_ccq != b.mean_max_ccq ||
        a.pair_ccq_variance != b.pair_ccq_variance) {
      std::printf("MISMATCH in %s aggregates\n", scheme_name(scheme).c_str());
      return 1;
    }
  }
  std::printf("serial and parallel aggregates are bit-identical\n");
  return 0;
}
