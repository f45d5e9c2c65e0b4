#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fblnoma/experiments.hpp"

namespace fblnoma::cli {

// Everything the command line (or a flat key = value config file) can set.
// Exactly one of snr_db / p_avg must be given; snr_db converts to average
// power as noise1 * 10^(snr_db/10).
struct RunConfig {
  std::string scheme = "both";  // noma | oma | both
  double h1 = 0.0;
  double h2 = 0.0;
  double noise1 = 1.0;
  double noise2 = 1.0;
  std::optional<double> snr_db;
  std::optional<double> p_avg;
  std::optional<int> n;
  double t2_floor = 0.0;
  std::optional<std::string> sweep;   // r1 | t2 | n
  std::optional<std::string> range;   // lo:hi:step
  std::optional<double> target_t1;
  std::string out;          // CSV path; empty writes to stdout
  std::string verify_grid;  // "r_step,p_step"; empty uses defaults
  int n_cap = 10000;

  bool operator==(const RunConfig&) const = default;
};

struct ParsedArgs {
  std::string command;  // solve | sweep | min-n | verify | help
  RunConfig config;
  bool dump_config = false;
  std::string help_text;
};

// Parse argv-style arguments (program name excluded). Flags override config
// file values. Throws std::invalid_argument on usage errors, naming the
// offending option.
ParsedArgs parse_config(const std::vector<std::string>& args);

// Effective configuration as flat `key = value` text; feeding it back through
// --config reproduces the same RunConfig.
std::string dump_config(const RunConfig& cfg);

// Resolved physical quantities.
double resolved_p_avg(const RunConfig& cfg);
ChannelPair channel_of(const RunConfig& cfg);

// Swept values from a "lo:hi:step" range expression.
std::vector<double> parse_range(const std::string& range);

// CSV with a fixed column set per sweep kind; reals carry 9 significant
// digits and infeasible cells stay empty.
void emit_csv(const experiments::SweepSpec& spec, const std::vector<experiments::SweepRow>& rows,
              std::ostream& os);
void emit_csv(const experiments::SweepSpec& spec, const std::vector<experiments::SweepRow>& rows,
              const std::string& path);

// Full command-line entry point.
int run(int argc, const char* const* argv);

}  // namespace fblnoma::cli
