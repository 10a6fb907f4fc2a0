#include "thermogeo/acceptance.hpp"
#include "thermogeo/scenario.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <set>
#include <thread>
#include <unistd.h>

namespace fs = std::filesystem;
using namespace thermogeo;

namespace {

struct Job {
  fs::path file;
  std::optional<Scenario> scenario;
  fs::path dir;
  int code = 0;
  std::string message;
};

void execute(Job& job, const RunOptions& options) {
  try {
    const RunReport r = run_scenario(*job.scenario, job.dir, options);
    job.message = job.file.stem().string() + ": ok (" + std::string(to_string(r.scenario.kind)) + ", " +
                  std::to_string(r.artifact_paths.size()) + " files in " + job.dir.string() + ", " +
                  std::to_string(r.wall_time_ms) + " ms)";
  } catch (const Error& e) {
    job.code = exit_code(e.kind());
    job.message = job.file.string() + ": " + e.what();
  } catch (const std::exception& e) {
    job.code = 1;
    job.message = job.file.string() + ": " + e.what();
  }
}

int run_command(const std::vector<std::string>& files, const std::string& out, int jobs, std::optional<double> tol) {
  std::vector<Job> work(files.size());
  std::set<std::string> stems;
  int code = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    Job& job = work[i];
    job.file = files[i];
    const std::string stem = job.file.stem().string();
    if (!stems.insert(stem).second) {
      std::cerr << job.file.string() << ": another scenario already writes to '" << stem << "'\n";
      return 1;
    }
    try {
      job.scenario = parse_scenario(job.file);
      const fs::path root = !out.empty() ? fs::path(out) : fs::path(job.scenario->output_dir.value_or("out"));
      job.dir = root / stem;
    } catch (const Error& e) {
      job.code = exit_code(e.kind());
      job.message = e.what();
    }
  }

  const RunOptions options{tol};
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++)
      if (work[i].scenario) execute(work[i], options);
  };
  std::vector<std::thread> pool;
  const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const Job& job : work) {
    (job.code == 0 ? std::cout : std::cerr) << job.message << "\n";
    code = std::max(code, job.code);
  }
  return code;
}

int verify_command(std::string scratch) {
  bool owned = false;
  if (scratch.empty()) {
    std::string pattern = (fs::temp_directory_path() / "thermogeo-verify-XXXXXX").string();
    if (!mkdtemp(pattern.data())) {
      std::cerr << "cannot create a scratch directory\n";
      return 1;
    }
    scratch = pattern;
    owned = true;
  }
  const auto results = run_acceptance(scratch);
  std::cout << format_acceptance(results);
  if (owned) fs::remove_all(scratch);
  for (const auto& r : results)
    if (!r.passed) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal expansion as material geometry: scenario runner"};
  app.require_subcommand(1);

  std::vector<std::string> files;
  std::string out;
  int jobs = 1;
  double tol = 0.0;
  CLI::App* run = app.add_subcommand("run", "Run scenario files; outputs go to <out>/<file stem>/");
  run->add_option("scenarios", files, "Scenario JSON files")->required();
  run->add_option("--out", out, "Output root (default: the scenario's output_dir, else ./out)");
  run->add_option("--jobs", jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);
  CLI::Option* tol_opt = run->add_option("--tol", tol, "Flatness tolerance override")->check(CLI::PositiveNumber);

  std::string scratch;
  CLI::App* verify = app.add_subcommand("verify", "Run the built-in acceptance suite");
  verify->add_option("--scratch", scratch, "Directory for the determinism runs (default: a fresh temp dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  if (*run) return run_command(files, out, jobs, tol_opt->count() ? std::optional<double>(tol) : std::nullopt);
  return verify_command(scratch);
}
