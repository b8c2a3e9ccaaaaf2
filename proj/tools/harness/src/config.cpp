#include <algorithm>
#include <fstream>
#include <sstream>

#include "qct/harness.hpp"

namespace qct::harness {

ExperimentConfig parse_config(const Json& doc, const CliOverrides& flags) {
  if (!doc.is_object()) throw UsageError("config", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    static const char* known[] = {"experiment", "params", "seed", "out", "format"};
    if (std::none_of(std::begin(known), std::end(known), [&](const char* k) { return key == k; })) {
      throw UsageError(key, "unknown config field");
    }
  }
  ExperimentConfig cfg;
  auto exp = doc.find("experiment");
  if (exp == doc.end() || !exp->is_string()) throw UsageError("experiment", "expected one of the experiment names");
  cfg.experiment = exp->get<std::string>();
  const auto names = experiment_names();
  if (std::find(names.begin(), names.end(), cfg.experiment) == names.end()) {
    throw UsageError("experiment", "unknown experiment '" + cfg.experiment + "'");
  }

  if (auto it = doc.find("params"); it != doc.end()) {
    if (!it->is_object()) throw UsageError("params", "expected an object");
    cfg.params = *it;
  }

  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) throw UsageError("seed", "expected a non-negative integer");
    cfg.seed = it->get<std::uint64_t>();
  } else if (flags.seed) {
    cfg.seed = *flags.seed;
  } else {
    throw UsageError("seed", "missing; give it in the config or with --seed");
  }

  if (auto it = doc.find("out"); it != doc.end()) {
    if (!it->is_string()) throw UsageError("out", "expected a path string");
    cfg.out = it->get<std::string>();
  } else {
    cfg.out = flags.out;
  }

  if (auto it = doc.find("format"); it != doc.end()) {
    const std::string f = it->is_string() ? it->get<std::string>() : "";
    if (f == "json") {
      cfg.format = Format::Json;
    } else if (f == "csv") {
      cfg.format = Format::Csv;
    } else {
      throw UsageError("format", "expected \"json\" or \"csv\"");
    }
  } else if (flags.format) {
    cfg.format = *flags.format;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const CliOverrides& flags) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json doc;
  try {
    doc = parse_json_text(buf.str());
  } catch (const ParseError& e) {
    throw UsageError(path, e.what());
  }
  return parse_config(doc, flags);
}

}  // namespace qct::harness
