#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lilab/coefficient_system.hpp"
#include "lilab/control.hpp"
#include "lilab/geometric_grid.hpp"
#include "lilab/hypothesis_checks.hpp"
#include "lilab/initial_condition.hpp"
#include "lilab/rate.hpp"
#include "lilab/sample_path.hpp"

namespace lilab {

// Parsed INI-style configuration: [section] headers, key = value lines,
// '#' or ';' comments.  Duplicate keys are configuration errors, as are
// keys or sections that no subcommand schema knows about.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_text(const std::string& text, const std::string& name);

  // section.key=value; creates or replaces.
  void apply_override(const std::string& assignment);

  bool has(const std::string& section, const std::string& key) const;
  std::vector<std::string> keys(const std::string& section) const;
  std::vector<std::string> sections() const;

  std::string raw(const std::string& section, const std::string& key) const;
  std::string raw_or(const std::string& section, const std::string& key,
                     const std::string& fallback) const;

  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<std::uint64_t> get_u64s(const std::string& section,
                                      const std::string& key) const;

  // Rejects sections and keys outside the schema of the given subcommand.
  void validate_for(const std::string& subcommand) const;

  const std::string& name() const { return name_; }
  const std::string& text() const { return text_; }

  // Nested view used by the manifest echo.
  const std::map<std::string, std::map<std::string, std::string>>& tree()
      const {
    return values_;
  }

 private:
  std::string name_;
  std::string text_;
  std::map<std::string, std::map<std::string, std::string>> values_;
};

// Builders shared by the CLI commands.  All throw ConfigError on malformed
// values and DomainError on mathematically inadmissible ones.

// [system] (+ optional [limit]) sections.
CoefficientSystem build_system(const Config& cfg);
// The [limit] fields when present, otherwise the [system] fields.
FieldSystem build_limit_or_system(const Config& cfg);
int config_dim(const Config& cfg);

// [initial] section; defaults to the origin point mass.
InitialConditionSpec build_initial(const Config& cfg, int dim);

// [grid] section.
GeometricGrid build_grid_from_config(const Config& cfg);

// Control specs: "zero", "constant v1..vk", "random energy seed",
// "csv PATH" (control CSV).
Control build_control(const std::string& spec, int cells, int noise_dim);

// Target specs: "zero", "line v1..vd", "csv PATH" (flow CSV).
SamplePath build_target(const std::string& spec, int cells, int dim);

// [rate] or [dist] section into optimizer options.
RateOptions build_rate_options(const Config& cfg, const std::string& section,
                               int dim);

std::uint64_t fnv1a(const std::string& bytes);

}  // namespace lilab
