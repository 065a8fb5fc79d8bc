#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bdris/gradcheck.hpp"
#include "bdris/scenario.hpp"

namespace bdris::cli {

/// Common overrides shared by the subcommands. An empty `out` writes CSV to
/// stdout.
struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::string out;
  std::string save_config;
};

struct SweepOptions {
  std::string config;
  std::string param = "p_dbm";  // p_dbm | M | N | Q
  std::vector<double> values;
  std::vector<std::string> schemes;
  int seeds = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
  int workers = 1;
};

struct ProfileOptions {
  std::string config;
  int seeds = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::string out;
};

struct GradcheckCliOptions {
  std::string config;  // empty: built-in small fixture
  int seeds = 5;
  std::optional<std::uint64_t> seed;
  double threshold = 1e-4;
  std::string out;
  std::string corrupt;  // family name; harness self-test hook
};

/// The Q=2, N=2, M=4, K=2 fixture the gradient checks default to.
Scenario gradcheck_fixture();

int cmd_run(const RunOptions& opt);
int cmd_sweep(const SweepOptions& opt);
int cmd_profile(const ProfileOptions& opt);
int cmd_gradcheck(const GradcheckCliOptions& opt);

}  // namespace bdris::cli
