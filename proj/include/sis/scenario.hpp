#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sis/bits.hpp"
#include "sis/network.hpp"

namespace sis {

inline constexpr double kDefaultBeta = 0.3;
inline constexpr double kDefaultCost = 200.0;
inline constexpr std::size_t kDefaultHorizon = 10;

/// Initial condition: a known configuration or independent per-node
/// infection probabilities.
using InitialCondition = std::variant<Configuration, std::vector<double>>;

/// Everything a run needs besides solver knobs and seeds.
struct Scenario {
  TemporalNetwork network;
  double beta = kDefaultBeta;
  double cost = kDefaultCost;  // c: cost per infected node per step
  InitialCondition initial;

  std::size_t size() const { return network.size(); }
  std::size_t horizon() const { return network.horizon(); }
  ControlEffect effect() const { return ControlEffect(beta); }

  bool deterministic_start() const { return std::holds_alternative<Configuration>(initial); }
  /// Throws ArgumentError when the start is probabilistic.
  const Configuration& initial_configuration() const;
  /// Pr(X_i(0) = 1) for every node.
  std::vector<double> initial_probabilities() const;
};

/// Parses the JSON scenario format. `source` names the input in diagnostics.
Scenario parse_scenario(std::string_view text, std::string_view source = "<scenario>");
Scenario load_scenario(const std::filesystem::path& path);

/// Serializes with shortest round-trip doubles: parse(dump(s)) reproduces every weight bit-exactly.
std::string dump_scenario(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

struct RandomScenarioSpec {
  RandomNetworkSpec network;
  double beta = kDefaultBeta;
  double cost = kDefaultCost;
  double infected_fraction = 0.4;  // at least one node always starts infected
};

Scenario random_scenario(const RandomScenarioSpec& spec, std::uint64_t seed);

}  // namespace sis
