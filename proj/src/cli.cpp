#include "fblnoma/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "fblnoma/oracle.hpp"

namespace fblnoma::cli {

namespace {

std::string fmt_real(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// All CLI wiring, shared by parse_config and run.
struct Binder {
  CLI::App app{"Finite-blocklength two-user downlink throughput optimizer"};
  RunConfig cfg;
  bool dump = false;
  CLI::App* sub_solve;
  CLI::App* sub_sweep;
  CLI::App* sub_min_n;
  CLI::App* sub_verify;
  CLI::Option* o_h1;
  CLI::Option* o_h2;
  CLI::Option* o_snr;
  CLI::Option* o_pav;
  CLI::Option* o_n;
  CLI::Option* o_sweep;
  CLI::Option* o_range;
  CLI::Option* o_target;

  Binder() {
    app.set_config("--config", "", "read options from a flat key = value file");
    o_h1 = app.add_option("--h1", cfg.h1, "user-1 amplitude gain |h1|")
               ->check(CLI::PositiveNumber);
    o_h2 = app.add_option("--h2", cfg.h2, "user-2 amplitude gain |h2| (requires |h2| <= |h1|)")
               ->check(CLI::PositiveNumber);
    app.add_option("--noise1", cfg.noise1, "user-1 noise power, linear")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--noise2", cfg.noise2, "user-2 noise power, linear")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    o_snr = app.add_option("--snr-db", cfg.snr_db,
                           "average SNR in dB; p_avg = noise1 * 10^(snr_db/10)");
    o_pav = app.add_option("--p-avg", cfg.p_avg, "average transmit power, linear")
                ->check(CLI::PositiveNumber);
    o_snr->excludes(o_pav);
    o_pav->excludes(o_snr);
    o_n = app.add_option("--n", cfg.n, "total blocklength in channel uses")
              ->check(CLI::Range(2, 1000000000));
    app.add_option("--t2-floor", cfg.t2_floor, "effective-throughput floor for user 2")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--scheme", cfg.scheme, "scheme to run: noma, oma, or both")
        ->check(CLI::IsMember({"noma", "oma", "both"}))
        ->capture_default_str();
    o_sweep = app.add_option("--sweep", cfg.sweep, "swept variable: r1, t2, or n")
                  ->check(CLI::IsMember({"r1", "t2", "n"}));
    o_range = app.add_option("--range", cfg.range, "sweep range as lo:hi:step");
    o_target = app.add_option("--target-t1", cfg.target_t1,
                              "user-1 effective-throughput target for min-n")
                   ->check(CLI::NonNegativeNumber);
    app.add_option("--out", cfg.out, "CSV output path (default: stdout)");
    app.add_option("--verify-grid", cfg.verify_grid,
                   "oracle grid resolution as r_step,p_step (default 0.001,p_avg/2000)");
    app.add_option("--n-cap", cfg.n_cap, "largest blocklength min-n will try")
        ->check(CLI::Range(2, 1000000000))
        ->capture_default_str();
    app.add_flag("--dump-config", dump, "print the effective configuration and exit");

    sub_solve = app.add_subcommand("solve", "solve a single configuration and print the solution");
    sub_sweep = app.add_subcommand("sweep", "run a parameter sweep and emit CSV");
    sub_min_n = app.add_subcommand("min-n", "smallest blocklength reaching --target-t1");
    sub_verify = app.add_subcommand("verify", "compare the solvers against the grid oracle");
    for (CLI::App* sub : {sub_solve, sub_sweep, sub_min_n, sub_verify}) {
      sub->fallthrough();
    }
    app.require_subcommand(0, 1);
  }

  std::string active_command() const {
    for (const CLI::App* sub : {sub_solve, sub_sweep, sub_min_n, sub_verify}) {
      if (sub->parsed()) return sub->get_name();
    }
    return "";
  }

  void check_semantics(const std::string& cmd) const {
    if (!o_snr->count() && !o_pav->count()) {
      throw std::invalid_argument("one of --snr-db or --p-avg is required");
    }
    if (!o_h1->count()) throw std::invalid_argument("--h1 is required");
    if (!o_h2->count()) throw std::invalid_argument("--h2 is required");
    if (cfg.h2 > cfg.h1) {
      throw std::invalid_argument("--h2 must not exceed --h1 (user 1 is the stronger user)");
    }
    const bool needs_n =
        cmd == "solve" || cmd == "verify" ||
        (cmd == "sweep" && cfg.sweep && *cfg.sweep != "n");
    if (needs_n && !o_n->count()) throw std::invalid_argument("--n is required");
    if (cmd == "sweep") {
      if (!o_sweep->count()) throw std::invalid_argument("--sweep is required: one of r1, t2, n");
      if (!o_range->count()) throw std::invalid_argument("--range is required: lo:hi:step");
    }
    if (cmd == "min-n" && !o_target->count()) {
      throw std::invalid_argument("--target-t1 is required");
    }
  }
};

using experiments::Scheme;
using experiments::SweepKind;
using experiments::SweepRow;
using experiments::SweepSpec;

struct Column {
  std::string name;
  std::function<std::string(const SweepRow&)> cell;
};

bool noma_ok(const SweepRow& r) { return r.noma.has_value() && r.noma->feasible; }
bool oma_ok(const SweepRow& r) { return r.oma.has_value() && r.oma->feasible; }

std::vector<Column> csv_columns(const SweepSpec& spec) {
  std::vector<Column> cols;
  const bool wn = spec.run_noma;
  const bool wo = spec.run_oma;
  auto noma_real = [](double noma::NomaSolution::* field) {
    return [field](const SweepRow& r) {
      return noma_ok(r) ? fmt_real(r.noma.value().*field) : std::string();
    };
  };
  auto oma_real = [](double oma::OmaSolution::* field) {
    return [field](const SweepRow& r) {
      return oma_ok(r) ? fmt_real(r.oma.value().*field) : std::string();
    };
  };
  auto oma_int = [](int oma::OmaSolution::* field) {
    return [field](const SweepRow& r) {
      return oma_ok(r) ? std::to_string(r.oma.value().*field) : std::string();
    };
  };
  auto gap_cell = [](const SweepRow& r) {
    return (noma_ok(r) && oma_ok(r)) ? fmt_real(r.noma->t1 - r.oma->t1) : std::string();
  };
  auto value_real = [](const SweepRow& r) { return fmt_real(r.value); };
  auto value_int = [](const SweepRow& r) {
    return std::to_string(static_cast<long long>(std::llround(r.value)));
  };

  switch (spec.kind) {
    case SweepKind::rate_sweep:
      cols.push_back({"r1", value_real});
      if (wn) cols.push_back({"t1_noma", noma_real(&noma::NomaSolution::t1)});
      if (wo) cols.push_back({"t1_oma", oma_real(&oma::OmaSolution::t1)});
      break;
    case SweepKind::t2_sweep:
    case SweepKind::blocklength_sweep: {
      if (spec.kind == SweepKind::t2_sweep) {
        cols.push_back({"t2_floor", value_real});
      } else {
        cols.push_back({"n", value_int});
      }
      if (wn) cols.push_back({"t1_noma", noma_real(&noma::NomaSolution::t1)});
      if (wo) cols.push_back({"t1_oma", oma_real(&oma::OmaSolution::t1)});
      if (wn && wo) cols.push_back({"gap", gap_cell});
      if (wn) {
        cols.push_back({"r1_noma", noma_real(&noma::NomaSolution::r1)});
        cols.push_back({"r2_noma", noma_real(&noma::NomaSolution::r2)});
        cols.push_back({"p1_noma", noma_real(&noma::NomaSolution::p1)});
        cols.push_back({"p2_noma", noma_real(&noma::NomaSolution::p2)});
      }
      if (wo) {
        cols.push_back({"r1_oma", oma_real(&oma::OmaSolution::r1)});
        cols.push_back({"r2_oma", oma_real(&oma::OmaSolution::r2)});
        cols.push_back({"p1_oma", oma_real(&oma::OmaSolution::p1)});
        cols.push_back({"p2_oma", oma_real(&oma::OmaSolution::p2)});
        cols.push_back({"n1_oma", oma_int(&oma::OmaSolution::n1)});
        cols.push_back({"n2_oma", oma_int(&oma::OmaSolution::n2)});
      }
      break;
    }
    case SweepKind::min_blocklength:
      cols.push_back({"target_t1", value_real});
      if (wn) {
        cols.push_back({"n_noma", [](const SweepRow& r) {
                          return r.noma_min_n ? std::to_string(*r.noma_min_n) : std::string();
                        }});
        cols.push_back({"t1_noma", noma_real(&noma::NomaSolution::t1)});
      }
      if (wo) {
        cols.push_back({"n_oma", [](const SweepRow& r) {
                          return r.oma_min_n ? std::to_string(*r.oma_min_n) : std::string();
                        }});
        cols.push_back({"t1_oma", oma_real(&oma::OmaSolution::t1)});
      }
      break;
  }
  return cols;
}

std::pair<double, double> parse_verify_grid(const RunConfig& cfg, double p_avg) {
  double r_step = 1e-3;
  double p_step = p_avg / 2000.0;
  if (!cfg.verify_grid.empty()) {
    double a = 0.0, b = 0.0;
    char trailing = 0;
    if (std::sscanf(cfg.verify_grid.c_str(), "%lf,%lf%c", &a, &b, &trailing) != 2 ||
        !(a > 0.0) || !(b > 0.0)) {
      throw std::invalid_argument("--verify-grid must be r_step,p_step with positive steps");
    }
    r_step = a;
    p_step = b;
  }
  return {r_step, p_step};
}

SweepSpec make_sweep_spec(const RunConfig& cfg) {
  const double p = resolved_p_avg(cfg);
  const auto values = parse_range(*cfg.range);
  SweepKind kind;
  int base_n;
  if (*cfg.sweep == "r1") {
    kind = SweepKind::rate_sweep;
    base_n = *cfg.n;
  } else if (*cfg.sweep == "t2") {
    kind = SweepKind::t2_sweep;
    base_n = *cfg.n;
  } else {
    kind = SweepKind::blocklength_sweep;
    const double first = values.front();
    if (std::abs(first - std::round(first)) > 1e-9 || first < 2.0) {
      throw std::invalid_argument("--range for --sweep n must produce integers >= 2");
    }
    base_n = static_cast<int>(std::llround(first));
  }
  SweepSpec spec{kind, channel_of(cfg), SystemBudget(base_n, p, cfg.t2_floor), values,
                 cfg.scheme != "oma", cfg.scheme != "noma", cfg.n_cap};
  return spec;
}

void emit_rows(const RunConfig& cfg, const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  if (cfg.out.empty()) {
    emit_csv(spec, rows, std::cout);
  } else {
    emit_csv(spec, rows, cfg.out);
  }
}

int cmd_solve(const RunConfig& cfg) {
  const ChannelPair ch = channel_of(cfg);
  const SystemBudget budget(*cfg.n, resolved_p_avg(cfg), cfg.t2_floor);
  bool all_feasible = true;
  std::printf("%-7s %-9s %12s %12s %12s %12s %6s %6s %12s %12s\n", "scheme", "feasible", "r1",
              "r2", "p1", "p2", "n1", "n2", "t1", "t2");
  if (cfg.scheme != "oma") {
    const auto s = noma::maximize_t1_noma(ch, budget);
    all_feasible = all_feasible && s.feasible;
    std::printf("%-7s %-9s %12s %12s %12s %12s %6d %6d %12s %12s%s\n", "noma",
                s.feasible ? "yes" : "no", fmt_real(s.r1).c_str(), fmt_real(s.r2).c_str(),
                fmt_real(s.p1).c_str(), fmt_real(s.p2).c_str(), budget.n_total, budget.n_total,
                fmt_real(s.t1).c_str(), fmt_real(s.t2).c_str(),
                s.near_boundary ? "  (floor at feasibility boundary)" : "");
  }
  if (cfg.scheme != "noma") {
    const auto s = oma::maximize_t1_oma(ch, budget);
    all_feasible = all_feasible && s.feasible;
    std::printf("%-7s %-9s %12s %12s %12s %12s %6d %6d %12s %12s%s\n", "oma",
                s.feasible ? "yes" : "no", fmt_real(s.r1).c_str(), fmt_real(s.r2).c_str(),
                fmt_real(s.p1).c_str(), fmt_real(s.p2).c_str(), s.n1, s.n2,
                fmt_real(s.t1).c_str(), fmt_real(s.t2).c_str(),
                s.near_boundary ? "  (floor at feasibility boundary)" : "");
  }
  return all_feasible ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg) {
  const SweepSpec spec = make_sweep_spec(cfg);
  const auto rows = experiments::run_sweep(spec);
  emit_rows(cfg, spec, rows);
  return 0;
}

int cmd_min_n(const RunConfig& cfg) {
  const double p = resolved_p_avg(cfg);
  SweepSpec spec{SweepKind::min_blocklength, channel_of(cfg), SystemBudget(2, p, cfg.t2_floor),
                 {*cfg.target_t1},          cfg.scheme != "oma",
                 cfg.scheme != "noma",      cfg.n_cap};
  const auto rows = experiments::run_sweep(spec);
  const SweepRow& row = rows.front();
  if (spec.run_noma) {
    if (row.noma_min_n) {
      std::printf("noma: N = %d  (t1 = %s)\n", *row.noma_min_n, fmt_real(row.noma->t1).c_str());
    } else {
      std::printf("noma: unattainable up to --n-cap %d\n", cfg.n_cap);
    }
  }
  if (spec.run_oma) {
    if (row.oma_min_n) {
      std::printf("oma:  N = %d  (t1 = %s)\n", *row.oma_min_n, fmt_real(row.oma->t1).c_str());
    } else {
      std::printf("oma:  unattainable up to --n-cap %d\n", cfg.n_cap);
    }
  }
  if (!cfg.out.empty()) emit_csv(spec, rows, cfg.out);
  const bool ok = (!spec.run_noma || row.noma_min_n.has_value()) &&
                  (!spec.run_oma || row.oma_min_n.has_value());
  return ok ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg) {
  const ChannelPair ch = channel_of(cfg);
  const double p = resolved_p_avg(cfg);
  const int n = *cfg.n;
  const SystemBudget budget(n, p, cfg.t2_floor);
  const auto [r_step, p_step] = parse_verify_grid(cfg, p);
  const double rate_hi = capacity(oma::oma_snr(p, ch.h1_gain, ch.noise1)) + 2.0;
  std::printf("oracle grid: r_step=%s p_step=%s\n", fmt_real(r_step).c_str(),
              fmt_real(p_step).c_str());
  bool all_feasible = true;
  double worst_dt1 = 0.0, worst_dr1 = 0.0;

  if (cfg.scheme != "oma") {
    const auto fast = noma::maximize_t1_noma(ch, budget);
    oracle::GridSpec grid;
    grid.r1 = {0.0, rate_hi, r_step};
    grid.r2 = {0.0, rate_hi, r_step};
    grid.p2 = {0.0, p, p_step};
    const auto slow = oracle::brute_force_noma(ch, budget, grid);
    if (fast.feasible != slow.feasible) {
      std::printf("noma: feasibility disagrees (solver %s, oracle %s)\n",
                  fast.feasible ? "yes" : "no", slow.feasible ? "yes" : "no");
      all_feasible = all_feasible && fast.feasible;
    } else if (!fast.feasible) {
      std::printf("noma: infeasible (solver and oracle agree)\n");
      all_feasible = false;
    } else {
      const double dt1 = std::abs(fast.t1 - slow.t1);
      const double dr1 = std::abs(fast.r1 - slow.r1);
      worst_dt1 = std::max(worst_dt1, dt1);
      worst_dr1 = std::max(worst_dr1, dr1);
      std::printf("noma: solver t1=%s r1=%s | oracle t1=%s r1=%s | dt1=%.3g dr1=%.3g\n",
                  fmt_real(fast.t1).c_str(), fmt_real(fast.r1).c_str(),
                  fmt_real(slow.t1).c_str(), fmt_real(slow.r1).c_str(), dt1, dr1);
    }
  }
  if (cfg.scheme != "noma") {
    const auto fast = oma::maximize_t1_oma(ch, budget);
    oracle::GridSpec grid;
    grid.r1 = {0.0, rate_hi, r_step};
    grid.r2 = {0.0, rate_hi, r_step};
    grid.p2 = {0.0, static_cast<double>(n) * p, p_step};  // slot power may exceed p_avg
    grid.n1_values.resize(n - 1);
    std::iota(grid.n1_values.begin(), grid.n1_values.end(), 1);
    const auto slow = oracle::brute_force_oma(ch, budget, grid);
    if (cfg.t2_floor == 0.0) {
      std::printf("oma: note: the oracle scans n1 <= n-1; the solver's t2_floor=0 case uses the "
                  "whole block\n");
    }
    if (fast.feasible != slow.feasible && cfg.t2_floor != 0.0) {
      std::printf("oma:  feasibility disagrees (solver %s, oracle %s)\n",
                  fast.feasible ? "yes" : "no", slow.feasible ? "yes" : "no");
      all_feasible = all_feasible && fast.feasible;
    } else if (!fast.feasible) {
      std::printf("oma:  infeasible (solver and oracle agree)\n");
      all_feasible = false;
    } else {
      const double dt1 = std::abs(fast.t1 - slow.t1);
      const double dr1 = std::abs(fast.r1 - slow.r1);
      worst_dt1 = std::max(worst_dt1, dt1);
      worst_dr1 = std::max(worst_dr1, dr1);
      std::printf("oma:  solver t1=%s r1=%s n1=%d | oracle t1=%s r1=%s n1=%d | dt1=%.3g dr1=%.3g\n",
                  fmt_real(fast.t1).c_str(), fmt_real(fast.r1).c_str(), fast.n1,
                  fmt_real(slow.t1).c_str(), fmt_real(slow.r1).c_str(), slow.n1, dt1, dr1);
    }
  }
  std::printf("max deviation: dt1=%.3g dr1=%.3g\n", worst_dt1, worst_dr1);
  return all_feasible ? 0 : 1;
}

}  // namespace

ParsedArgs parse_config(const std::vector<std::string>& args) {
  Binder b;
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fblnoma");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    b.app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    return ParsedArgs{"help", RunConfig{}, false, b.app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return ParsedArgs{"help", RunConfig{}, false, b.app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }
  ParsedArgs out;
  out.command = b.active_command();
  out.dump_config = b.dump;
  if (out.command.empty() && !b.dump) {
    if (args.empty()) return ParsedArgs{"help", RunConfig{}, false, b.app.help()};
    throw std::invalid_argument("a subcommand is required: solve, sweep, min-n, or verify");
  }
  if (!b.dump) b.check_semantics(out.command);
  out.config = b.cfg;
  return out;
}

std::string dump_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "# effective configuration\n";
  os << "scheme = " << cfg.scheme << "\n";
  os << "h1 = " << fmt_exact(cfg.h1) << "\n";
  os << "h2 = " << fmt_exact(cfg.h2) << "\n";
  os << "noise1 = " << fmt_exact(cfg.noise1) << "\n";
  os << "noise2 = " << fmt_exact(cfg.noise2) << "\n";
  if (cfg.snr_db) os << "snr-db = " << fmt_exact(*cfg.snr_db) << "\n";
  if (cfg.p_avg) os << "p-avg = " << fmt_exact(*cfg.p_avg) << "\n";
  if (cfg.n) os << "n = " << *cfg.n << "\n";
  os << "t2-floor = " << fmt_exact(cfg.t2_floor) << "\n";
  if (cfg.sweep) os << "sweep = " << *cfg.sweep << "\n";
  if (cfg.range) os << "range = " << *cfg.range << "\n";
  if (cfg.target_t1) os << "target-t1 = " << fmt_exact(*cfg.target_t1) << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
  if (!cfg.verify_grid.empty()) os << "verify-grid = " << cfg.verify_grid << "\n";
  os << "n-cap = " << cfg.n_cap << "\n";
  return os.str();
}

double resolved_p_avg(const RunConfig& cfg) {
  if (cfg.p_avg) return *cfg.p_avg;
  if (cfg.snr_db) return cfg.noise1 * std::pow(10.0, *cfg.snr_db / 10.0);
  throw std::invalid_argument("one of --snr-db or --p-avg is required");
}

ChannelPair channel_of(const RunConfig& cfg) {
  return ChannelPair(cfg.h1, cfg.h2, cfg.noise1, cfg.noise2);
}

std::vector<double> parse_range(const std::string& range) {
  double lo = 0.0, hi = 0.0, step = 0.0;
  char trailing = 0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%lf%c", &lo, &hi, &step, &trailing) != 3) {
    throw std::invalid_argument("--range must be lo:hi:step");
  }
  if (!(step > 0.0) || !(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw std::invalid_argument("--range requires lo <= hi and step > 0");
  }
  std::vector<double> values;
  const double limit = hi + 1e-9 * step;
  for (long long k = 0;; ++k) {
    const double v = lo + static_cast<double>(k) * step;
    if (v > limit) break;
    values.push_back(v);
  }
  return values;
}

void emit_csv(const experiments::SweepSpec& spec, const std::vector<SweepRow>& rows,
              std::ostream& os) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: rows must be nonempty");
  const auto cols = csv_columns(spec);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (c) os << ',';
    os << cols[c].name;
  }
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c) os << ',';
      os << cols[c].cell(row);
    }
    os << '\n';
  }
}

void emit_csv(const experiments::SweepSpec& spec, const std::vector<SweepRow>& rows,
              const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open " + path + " for writing");
  emit_csv(spec, rows, f);
  f.flush();
  if (!f) throw std::runtime_error("emit_csv: failed writing " + path);
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  ParsedArgs parsed;
  try {
    parsed = parse_config(args);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "run 'fblnoma --help' for usage\n";
    return 2;
  }
  if (parsed.command == "help") {
    std::cout << parsed.help_text;
    return 0;
  }
  if (parsed.dump_config) {
    std::cout << dump_config(parsed.config);
    return 0;
  }
  try {
    if (parsed.command == "solve") return cmd_solve(parsed.config);
    if (parsed.command == "sweep") return cmd_sweep(parsed.config);
    if (parsed.command == "min-n") return cmd_min_n(parsed.config);
    if (parsed.command == "verify") return cmd_verify(parsed.config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: unknown command\n";
  return 2;
}

}  // namespace fblnoma::cli
