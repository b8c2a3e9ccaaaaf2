#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qct/circuit_io.hpp"
#include "qct/config.hpp"
#include "qct/harness.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
  return static_cast<bool>(out);
}

int run_command(const std::string& config_path, const qct::harness::CliOverrides& flags) {
  using namespace qct::harness;
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path, flags);
  } catch (const UsageError& e) {
    std::cerr << "qct run: invalid config: " << e.what() << "\n";
    return kExitUsage;
  }
  if (flags.seed && cfg.seed != *flags.seed) std::cerr << "qct run: config seed overrides --seed\n";

  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ReportRow> rows;
  try {
    rows = run_experiment(cfg);
  } catch (const UsageError& e) {
    std::cerr << "qct run: invalid config: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qct::CapacityError& e) {
    std::cerr << "qct run: " << e.what() << " (raise QCT_MAX_QUBITS to allow it)\n";
    return kExitRuntime;
  } catch (const qct::Error& e) {
    std::cerr << "qct run: " << e.what() << "\n";
    return kExitRuntime;
  }
  const double total = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const std::string body = format_report(cfg, rows);
  const std::string meta = format_metadata(rows, started, utc_now(), total);
  if (cfg.out) {
    if (!write_file(*cfg.out, body) || !write_file(*cfg.out + ".meta.json", meta)) {
      std::cerr << "qct run: cannot write '" << *cfg.out << "'\n";
      return kExitRuntime;
    }
  } else {
    std::cout << body;
  }

  std::size_t passed = 0;
  for (const auto& r : rows) {
    if (r.pass) {
      ++passed;
    } else {
      std::cerr << "FAIL " << r.experiment << " " << r.claim << " measured=" << r.measured << " bound=" << r.bound << "\n";
    }
  }
  std::cerr << passed << "/" << rows.size() << " rows pass in " << static_cast<long long>(total) << " ms\n";
  return passed == rows.size() ? 0 : kExitFail;
}

int validate_command(const std::string& file) {
  std::ifstream in(file);
  if (!in) {
    std::cerr << "qct circuit validate: cannot open '" << file << "'\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const auto c = qct::parse_circuit(buf.str());
    std::cout << "ok: input_qubits=" << c.input_qubits() << " output_qubits=" << c.output_qubits()
              << " ancilla_qubits=" << c.ancilla_qubits() << " peak_qubits=" << c.peak_qubits()
              << " ops=" << c.ops().size() << (c.has_placeholders() ? " keyed" : "") << "\n";
    return 0;
  } catch (const qct::ParseError& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const qct::Error& e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qct: circuit-testing and encryption-detection experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string format;
  run->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "Seed used when the config has none");
  auto* out_opt = run->add_option("--out", out, "Report path; metadata goes to <path>.meta.json");
  auto* fmt_opt = run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  auto* fixtures = app.add_subcommand("fixtures", "List built-in verifiers, families and instances");
  std::string write_dir;
  fixtures->add_option("--write", write_dir, "Also write the bundled fixture files into this directory")
      ->check(CLI::ExistingDirectory);

  auto* circuit = app.add_subcommand("circuit", "Circuit file utilities");
  circuit->require_subcommand(1);
  auto* validate = circuit->add_subcommand("validate", "Parse and check a circuit file");
  std::string circuit_file;
  validate->add_option("file", circuit_file, "Circuit JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    (void)qct::max_qubits();
  } catch (const qct::Error& e) {
    std::cerr << "qct: QCT_MAX_QUBITS: " << e.what() << "\n";
    return kExitUsage;
  }

  if (*run) {
    qct::harness::CliOverrides flags;
    if (*seed_opt) flags.seed = seed;
    if (*out_opt) flags.out = out;
    if (*fmt_opt) flags.format = format == "csv" ? qct::harness::Format::Csv : qct::harness::Format::Json;
    return run_command(config_path, flags);
  }
  if (*fixtures) {
    std::cout << qct::harness::fixture_catalog().dump(2) << "\n";
    if (!write_dir.empty()) {
      for (const auto& f : qct::harness::bundled_files()) {
        if (!write_file(write_dir + "/" + f.name, f.content)) {
          std::cerr << "qct fixtures: cannot write " << f.name << "\n";
          return kExitRuntime;
        }
      }
    }
    return 0;
  }
  if (*validate) return validate_command(circuit_file);
  return kExitUsage;
}
