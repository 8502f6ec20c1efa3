#pragma once

// Running scenarios, property checkers and trajectory serialisation.
//
// CSV columns are fixed: tau,t,x,y,z,u0,u1,u2,u3,norm_residual. The columns
// t,x,y,z carry x^0..x^3 whatever the chart (for Schwarzschild they are
// t, r, theta, phi). Numbers are written with 17 significant digits.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "phasecon/scenario.hpp"
#include "phasecon/transport.hpp"

namespace phasecon {

inline constexpr std::string_view kCsvHeader = "tau,t,x,y,z,u0,u1,u2,u3,norm_residual";

struct RunReport {
  Scenario scenario;
  std::vector<TrajectorySample> samples;
  TerminalStatus status = TerminalStatus::Completed;
  std::string message;
  std::map<std::string, double> summary;
  std::map<std::string, std::string> labels;

  /// True when the run stopped for a reason other than reaching tau_max or a stop predicate.
  bool integration_failed() const {
    return status == TerminalStatus::MaxSteps || status == TerminalStatus::DomainExit;
  }
};

/// Integrates the scenario and fills the summary: max_norm_residual, samples,
/// final_tau, plus the oracle keys of the selected oracle. StepRejected propagates.
RunReport run(const Scenario& scenario);

/// Appends the oracle comparison for scenario.oracle to report.summary.
void apply_oracle(RunReport& report);

enum class Format { Csv, Json };

/// "csv" or "json"; ValidationError otherwise.
Format parse_format(std::string_view name);

void write_csv(const std::vector<TrajectorySample>& samples, std::ostream& out);
void write_json(const RunReport& report, std::ostream& out);
void emit(const RunReport& report, Format format, std::ostream& out);

/// Inverse of write_csv (state and norm_residual; diagnostics are not serialised).
/// Throws ParseError on a malformed header or row.
std::vector<TrajectorySample> read_csv(std::istream& in);
/// Samples of a document produced by write_json.
std::vector<TrajectorySample> read_json(std::istream& in);

enum class Checker { Bianchi, Closure, Norm, MassInvariance, MinimalSubstitution };

const char* to_string(Checker c);
/// bianchi | closure | norm | mass-invariance | minimal-substitution; ValidationError otherwise.
Checker parse_checker(std::string_view name);

/// Bound each checker's residual is compared against.
double checker_bound(Checker c, const Scenario& scenario);

/// Runs the checker on the scenario. The summary holds "residual", "bound" and
/// "passed" (1 or 0); labels["checker"] names the checker. Throws
/// IncompatibleChecker when the scenario cannot support it.
RunReport check(const Scenario& scenario, Checker checker);

/// Up to `count` events spread evenly over the scenario's trajectory, the
/// initial event first. These are where pointwise checkers are evaluated.
std::vector<SpacetimeEvent> probe_events(const Scenario& scenario, std::size_t count = 8);

}  // namespace phasecon
