#pragma once

// Config-driven experiment runner. A run produces ordered ReportRows; the
// serialized report body depends only on config and seed, while wall times
// and timestamps live in a separate metadata document.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qct/circuit_io.hpp"
#include "qct/errors.hpp"

namespace qct::harness {

/// Invalid configuration; `field()` is a path such as "params.delta".
class UsageError : public Error {
 public:
  UsageError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

enum class Format { Json, Csv };

struct ExperimentConfig {
  std::string experiment;  // norms | reduction | applications | di-protocol | full-suite
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  Format format = Format::Json;
};

/// Overrides for values the config file leaves out.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<Format> format;
};

/// Config file values win over flags; flags fill the gaps. Throws UsageError.
ExperimentConfig parse_config(const Json& doc, const CliOverrides& flags = {});
ExperimentConfig load_config(const std::string& path, const CliOverrides& flags = {});

enum class Relation { AtMost, AtLeast, Within };

struct ReportRow {
  std::string experiment;
  std::string claim;
  double measured = 0.0;
  double bound = 0.0;
  Relation relation = Relation::AtMost;
  double tolerance = 0.0;  // Within only
  bool pass = false;
  double ms = 0.0;         // metadata, not part of the report body
};

ReportRow at_most(std::string experiment, std::string claim, double measured, double bound);
ReportRow at_least(std::string experiment, std::string claim, double measured, double bound);
ReportRow within(std::string experiment, std::string claim, double measured, double expected, double tolerance);
/// pass from a boolean outcome, measured/bound 1 or 0.
ReportRow holds(std::string experiment, std::string claim, bool outcome);

std::vector<std::string> experiment_names();
/// Runs the configured experiment; params are validated first (UsageError).
std::vector<ReportRow> run_experiment(const ExperimentConfig& config);

std::string format_csv(const std::vector<ReportRow>& rows);
std::string format_json(const ExperimentConfig& config, const std::vector<ReportRow>& rows);
std::string format_report(const ExperimentConfig& config, const std::vector<ReportRow>& rows);
/// {"started_utc", "finished_utc", "total_ms", "rows": [{claim, ms}, ...]}
std::string format_metadata(const std::vector<ReportRow>& rows, const std::string& started_utc,
                            const std::string& finished_utc, double total_ms);

/// Registry of verifiers, families and instance kinds with their JSON shapes.
OrderedJson fixture_catalog();

struct BundledFile {
  std::string name;
  std::string content;
};
/// The circuits, verifiers and instances shipped under data/circuits.
std::vector<BundledFile> bundled_files();

}  // namespace qct::harness
