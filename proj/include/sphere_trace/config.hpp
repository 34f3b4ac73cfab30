#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sphere_trace/montecarlo.hpp"

namespace sphere_trace {

// Flat key=value run configuration.  The canonical key order below is also
// the echo order, so a manifest echo reparses to the identical configuration.
class RunConfig {
 public:
  RunConfig();

  // Throws std::invalid_argument naming the key on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;

  void load_file(const std::string& path);
  std::string echo() const;  // canonical key=value lines

  ExperimentConfig experiment() const;  // validated, ready to run
  std::string out_dir() const { return get("out_dir"); }
  int snapshot_n_theta() const;
  int snapshot_n_phi() const;

  static const std::vector<std::string>& keys();

 private:
  std::vector<std::string> values_;  // parallel to keys()
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<std::pair<std::string, std::string>> overrides;
  int paper_samples = 0;  // M restored by --paper-scale; 0 = no paper-scale run
};

const std::vector<Preset>& presets();
RunConfig preset_config(const std::string& name, bool paper_scale);

// FNV-1a over the canonical echo; identifies a configuration in the manifest.
std::uint64_t config_hash(const std::string& echo);

}  // namespace sphere_trace
