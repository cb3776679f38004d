#include "formation/cli.hpp"

#include <fstream>

#include "formation/checks.hpp"
#include "formation/config.hpp"
#include "formation/log_io.hpp"
#include "formation/metrics.hpp"
#include "formation/scenario.hpp"
#include "formation/simulation.hpp"

namespace formation {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
}

}  // namespace

int cmd_run(const RunRequest& req, std::ostream& out, std::ostream& err) {
  if (req.decimate < 1) {
    err << "error: --decimate must be at least 1\n";
    return kExitValidation;
  }
  Scenario sc;
  try {
    Config cfg = Config::load(req.scenario);
    for (const auto& o : req.overrides) cfg.apply_override(o);
    sc = scenario_from_config(cfg);
    if (req.seed) sc.seed = *req.seed;
    for (const auto& w : sc.validate()) err << "warning: " << w << '\n';
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    std::filesystem::create_directories(req.out_dir);
    write_file(req.out_dir / "scenario.cfg", scenario_to_config(sc));
    const SimLog log = run(sc);
    {
      std::ofstream csv(req.out_dir / "log.csv", std::ios::binary);
      write_csv(csv, log, req.decimate);
      if (!csv) throw std::runtime_error("cannot write log.csv");
    }
    const Metrics m = compute_metrics(log, sc);
    write_file(req.out_dir / "metrics.json", to_json(m).dump(2) + "\n");
    out << "ran '" << sc.name << "': " << log.steps.size() << " steps, outputs in " << req.out_dir.string() << '\n';
  } catch (const MetricsError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_check(const std::string& suite, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  std::vector<SuiteReport> reports;
  try {
    reports = run_suite(suite, seed);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "; expected one of";
    for (const auto& s : suite_names()) err << ' ' << s;
    err << " all\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  bool ok = true;
  for (const auto& r : reports) {
    for (const auto& p : r.results) {
      out << (p.passed ? "PASS " : "FAIL ") << r.suite << ": " << p.name << " (" << p.detail << ")\n";
    }
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitPropertyFailure;
}

}  // namespace formation
