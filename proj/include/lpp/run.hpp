#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "lpp/config.hpp"

namespace lpp {

inline constexpr const char* kCodeVersion = "0.1.0";

// Record of one CLI run: canonical-config hash, checksums of every file
// written, and a few experiment-specific scalar metrics. Serialized to
// manifest.json in the output directory. Reruns of the same config produce
// identical checksums.
struct RunManifest {
  std::string experiment;
  std::string config_hash;
  std::string code_version = kCodeVersion;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::string note;
  std::map<std::string, std::string> output_checksums;  // file name -> fnv1a64 hex
  std::map<std::string, double> metrics;

  std::string to_json() const;
};

// FNV-1a 64-bit hash of a byte string, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

// Output directory: config.out_dir if set, else $LPP_SIM_OUT_ROOT/<experiment>,
// else ./lpp-out/<experiment>.
std::string resolve_out_dir(const ExperimentConfig& config);

// Execute the configured experiment, write its CSV outputs plus manifest.json
// under the output directory, and return the manifest.
RunManifest run(const ExperimentConfig& config, const std::string& out_dir_override = "");

}  // namespace lpp
