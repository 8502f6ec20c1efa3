// phasecon: run bundled or user scenarios, apply property checkers.
//
//   phasecon list-scenarios
//   phasecon run <file|name>... [--out PATH] [--format csv|json] [--step H] [--tau-max T] [--jobs N]
//   phasecon check <file|name> --checker NAME [--format csv|json] [--step H] [--tau-max T]
//
// Exit codes: 0 ok, 1 invalid input, 2 integration failure, 3 checker bound exceeded.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "phasecon/report.hpp"

namespace {

enum Exit : int { kOk = 0, kInvalid = 1, kIntegration = 2, kCheckFailed = 3 };

struct Overrides {
  std::optional<double> step;
  std::optional<double> tau_max;
};

phasecon::Scenario load(const std::string& what, const Overrides& o) {
  phasecon::Scenario sc = phasecon::resolve_scenario(what);
  if (o.step) sc.integrator.step = *o.step;
  if (o.tau_max) sc.integrator.tau_max = *o.tau_max;
  try {
    sc.integrator.validate();
  } catch (const phasecon::InvalidConfig& e) {
    throw phasecon::ValidationError(std::string("override: ") + e.what());
  }
  return sc;
}

std::string summary_line(const phasecon::RunReport& r) {
  std::ostringstream s;
  s << r.scenario.name << ": " << to_string(r.status);
  if (!r.message.empty()) s << " (" << r.message << ")";
  char buf[64];
  for (const auto& [k, v] : r.summary) {
    std::snprintf(buf, sizeof buf, "%.6g", v);
    s << ' ' << k << '=' << buf;
  }
  return s.str();
}

struct Job {
  std::string input;
  std::string output;  // rendered document
  std::string summary;
  std::string error;
  int code = kOk;
};

void execute(Job& job, const Overrides& o, phasecon::Format format) {
  try {
    const phasecon::RunReport r = phasecon::run(load(job.input, o));
    std::ostringstream out;
    phasecon::emit(r, format, out);
    job.output = out.str();
    job.summary = summary_line(r);
    if (r.integration_failed()) job.code = kIntegration;
  } catch (const phasecon::ParseError& e) {
    job.error = e.what();
    job.code = kInvalid;
  } catch (const phasecon::ValidationError& e) {
    job.error = e.what();
    job.code = kInvalid;
  } catch (const phasecon::StepRejected& e) {
    job.error = e.what();
    job.code = kIntegration;
  } catch (const phasecon::Error& e) {
    job.error = e.what();
    job.code = kIntegration;
  }
}

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

int cmd_run(const std::vector<std::string>& inputs, const std::string& out_path,
            phasecon::Format format, const Overrides& o, unsigned jobs) {
  std::vector<Job> work(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) work[i].input = inputs[i];

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < work.size();) execute(work[i], o, format);
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
    for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  }

  const bool to_dir = work.size() > 1 && !out_path.empty();
  if (to_dir) std::filesystem::create_directories(out_path);
  const char* ext = format == phasecon::Format::Csv ? ".csv" : ".json";

  int code = kOk;
  for (const auto& j : work) {
    if (!j.error.empty()) {
      std::cerr << "error: " << j.input << ": " << j.error << '\n';
    } else {
      std::cerr << j.summary << '\n';
      if (out_path.empty()) {
        std::cout << j.output;
      } else {
        std::filesystem::path p = out_path;
        if (to_dir) p /= std::filesystem::path(j.input).stem().string() + ext;
        if (!write_file(p, j.output)) {
          std::cerr << "error: cannot write " << p.string() << '\n';
          code = std::max(code, static_cast<int>(kInvalid));
        }
      }
    }
    code = std::max(code, j.code);
  }
  return code;
}

int cmd_check(const std::string& input, const std::string& checker_name,
              const std::string& out_path, std::optional<phasecon::Format> format,
              const Overrides& o) {
  const phasecon::Checker checker = phasecon::parse_checker(checker_name);
  const phasecon::RunReport r = phasecon::check(load(input, o), checker);
  const bool passed = r.summary.at("passed") == 1.0;
  std::printf("%s %s residual=%.17g bound=%.3g %s\n", r.scenario.name.c_str(),
              phasecon::to_string(checker), r.summary.at("residual"), r.summary.at("bound"),
              passed ? "PASS" : "FAIL");
  if (format) {
    std::ostringstream out;
    phasecon::emit(r, *format, out);
    if (out_path.empty()) {
      std::cout << out.str();
    } else if (!write_file(out_path, out.str())) {
      std::cerr << "error: cannot write " << out_path << '\n';
      return kInvalid;
    }
  }
  if (r.integration_failed()) return kIntegration;
  return passed ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-linear connection transport: gravity and electromagnetism from one law"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-scenarios", "Print the bundled scenario names");

  Overrides o;
  std::vector<std::string> inputs;
  std::string out_path, format_name = "csv";
  unsigned jobs = 1;
  auto* run = app.add_subcommand("run", "Integrate scenarios and emit their trajectories");
  run->add_option("scenario", inputs, "Config file or bundled scenario name")->required();
  run->add_option("--out", out_path, "Output file (directory when several scenarios are given)");
  run->add_option("--format", format_name, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--step", o.step, "Override the integrator step");
  run->add_option("--tau-max", o.tau_max, "Override the proper-time span");
  run->add_option("--jobs", jobs, "Run independent scenarios in parallel")
      ->check(CLI::Range(1u, 1024u));

  std::string check_input, checker_name, check_format;
  auto* check = app.add_subcommand("check", "Evaluate a property checker on a scenario");
  check->add_option("scenario", check_input, "Config file or bundled scenario name")->required();
  check->add_option("--checker", checker_name,
                    "bianchi | closure | norm | mass-invariance | minimal-substitution")
      ->required();
  check->add_option("--out", out_path, "Write the full report here");
  check->add_option("--format", check_format, "Also emit the report as csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  check->add_option("--step", o.step, "Override the integrator step");
  check->add_option("--tau-max", o.tau_max, "Override the proper-time span");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  try {
    if (list->parsed()) {
      for (const auto& n : phasecon::builtin_scenario_names()) std::cout << n << '\n';
      return kOk;
    }
    if (run->parsed()) return cmd_run(inputs, out_path, phasecon::parse_format(format_name), o, jobs);
    if (check->parsed()) {
      std::optional<phasecon::Format> f;
      if (!check_format.empty()) f = phasecon::parse_format(check_format);
      return cmd_check(check_input, checker_name, out_path, f, o);
    }
  } catch (const phasecon::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const phasecon::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const phasecon::IncompatibleChecker& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const phasecon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIntegration;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
