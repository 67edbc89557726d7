#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "irs/ao.hpp"
#include "irs/channel.hpp"

namespace irs {

/// Raised for malformed or out-of-range experiment configurations.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when reading or writing result/config files fails.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

enum class Experiment { kPower, kElements };

std::string axis_name(Experiment e);
Experiment parse_experiment(const std::string& s);

struct PowerSweep {
  int elements = 40;
  std::vector<double> power_dbm{0, 5, 10, 15, 20, 25, 30};
  std::vector<SchemeKind> schemes{SchemeKind::robust(), SchemeKind::non_robust()};
};

struct ElementSweep {
  double power_dbm = 10.0;
  std::vector<int> elements{10, 20, 30, 40, 50, 60};
  std::vector<SchemeKind> schemes{SchemeKind::robust(),      SchemeKind::non_robust(),
                                  SchemeKind::discrete(1),   SchemeKind::discrete(2),
                                  SchemeKind::discrete(3),   SchemeKind::no_irs()};
};

struct ExperimentConfig {
  int antennas = 4;
  Geometry geometry;
  FadingParams fading;
  double noise_dbm = -110.0;
  // p0 and sigma_n2 inside are overwritten per sweep point.
  AoConfig solver;
  std::vector<double> sigma2{0.01, 0.05};  // relative CSI error powers
  PowerSweep power;
  ElementSweep elements;
  int trials = 200;
  std::uint64_t seed = 1;
  std::string rng = kRngName;
  std::string output = "results.csv";
  bool share_initial_phases = true;
  bool record_timing = false;
  int threads = 0;  // 0: hardware concurrency

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct SweepRecord {
  std::string scheme;
  std::string axis_name;
  double axis_value = 0.0;
  double sigma2 = 0.0;
  int trial = 0;
  double mse = 0.0;
  int iters = 0;
  bool converged = false;
  double millis = 0.0;

  bool operator==(const SweepRecord&) const = default;
};

std::vector<SweepRecord> run_power_sweep(const ExperimentConfig& cfg);
std::vector<SweepRecord> run_element_sweep(const ExperimentConfig& cfg);
std::vector<SweepRecord> run_experiment(const ExperimentConfig& cfg, Experiment experiment);

inline constexpr const char* kResultsHeader =
    "scheme,axis_name,axis_value,sigma2,trial,mse,iters,converged,millis";

std::string format_results(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_results(const std::string& csv);
void write_results(const std::vector<SweepRecord>& records, const std::filesystem::path& path);
std::vector<SweepRecord> read_results(const std::filesystem::path& path);

}  // namespace irs
