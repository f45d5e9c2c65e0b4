// Acceptance checklist for the finite-blocklength NOMA/OMA optimizer.
// Each criterion prints one PASS/FAIL line; the exit status is nonzero if
// any criterion fails. argv[1] (optional) is the path to the CLI binary,
// used by the byte-determinism check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fblnoma/cli.hpp"
#include "fblnoma/experiments.hpp"
#include "fblnoma/noma.hpp"
#include "fblnoma/oma.hpp"
#include "fblnoma/oracle.hpp"

using namespace fblnoma;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

// --- 1. stationarity roots vs grid argmax on randomized configurations ----

Outcome criterion_roots_vs_oracle() {
  Outcome out;
  std::mt19937 rng(987654321u);
  std::uniform_real_distribution<double> usnr(10.0, 40.0);
  std::uniform_int_distribution<int> un(50, 1000);
  std::uniform_real_distribution<double> uh1(0.3, 1.0);
  std::uniform_real_distribution<double> ufrac(0.0, 0.95);
  double worst_dr1 = 0.0, worst_dt1 = 0.0;
  int checked = 0;
  for (int i = 0; i < 50; ++i) {
    const double snr_db = usnr(rng);
    const int n = un(rng);
    const double h1 = uh1(rng);
    const double h2 = std::uniform_real_distribution<double>(0.05, h1)(rng);
    const double p = std::pow(10.0, snr_db / 10.0);
    const ChannelPair ch(h1, h2);

    // Throughput floor drawn inside the feasible band.
    const double g2cap = noma::noma_sinrs(0.0, p, ch).g2;
    const double r2cap = oma::optimal_r1(g2cap, n);
    const double t2cap = r2cap * (1.0 - error_probability(g2cap, n, r2cap).value());
    const SystemBudget budget(n, p, ufrac(rng) * t2cap);

    const double rate_hi = capacity(noma::noma_sinrs(p, 0.0, ch).g1) + 2.0;

    const auto nsol = noma::maximize_t1_noma(ch, budget);
    if (!nsol.feasible) {
      out.pass = false;
      out.detail = "configuration " + std::to_string(i) + " unexpectedly infeasible (noma)";
      break;
    }
    {
      oracle::GridSpec grid;
      grid.r1 = {0.0, rate_hi, 1e-3};
      grid.r2 = {nsol.r2, nsol.r2, 1.0};
      grid.p2 = {nsol.p2, nsol.p2, 1.0};
      const auto ref = oracle::brute_force_noma(ch, budget, grid);
      worst_dr1 = std::max(worst_dr1, std::abs(ref.r1 - nsol.r1));
      worst_dt1 = std::max(worst_dt1, std::abs(ref.t1 - nsol.t1));
    }

    const auto osol = oma::maximize_t1_oma(ch, budget);
    if (!osol.feasible) {
      out.pass = false;
      out.detail = "configuration " + std::to_string(i) + " unexpectedly infeasible (oma)";
      break;
    }
    if (osol.n2 >= 1) {
      oracle::GridSpec grid;
      grid.r1 = {0.0, rate_hi, 1e-3};
      grid.r2 = {osol.r2, osol.r2, 1.0};
      grid.p2 = {osol.p2, osol.p2, 1.0};
      grid.n1_values = {osol.n1};
      const auto ref = oracle::brute_force_oma(ch, budget, grid);
      worst_dr1 = std::max(worst_dr1, std::abs(ref.r1 - osol.r1));
      worst_dt1 = std::max(worst_dt1, std::abs(ref.t1 - osol.t1));
    } else {
      // Degenerate zero-floor split: check the single-slot argmax directly.
      const double g1 = oma::oma_snr(osol.p1, ch.h1_gain, ch.noise1);
      double best_t = -1.0, best_r = 0.0;
      for (double r = 0.0; r <= rate_hi; r += 1e-3) {
        const double t = r * (1.0 - error_probability(g1, n, r).value());
        if (t > best_t) {
          best_t = t;
          best_r = r;
        }
      }
      worst_dr1 = std::max(worst_dr1, std::abs(best_r - osol.r1));
      worst_dt1 = std::max(worst_dt1, std::abs(best_t - osol.t1));
    }
    ++checked;
  }
  if (out.pass && (worst_dr1 > 1e-3 || worst_dt1 > 1e-4)) out.pass = false;
  if (out.detail.empty()) {
    std::ostringstream os;
    os << checked << " configurations, max |dR1| = " << worst_dr1
       << " (tol 1e-3), max |dT1| = " << worst_dt1 << " (tol 1e-4)";
    out.detail = os.str();
  }
  return out;
}

// --- 2. reference rate sweep: shape, peak ordering, crossover -------------

Outcome criterion_rate_sweep() {
  Outcome out;
  experiments::SweepSpec spec{experiments::SweepKind::rate_sweep,
                              ChannelPair(0.8, 0.1),
                              SystemBudget(300, 1e4, 3.0),
                              {}};
  for (double r = 0.0; r <= 13.0 + 1e-9; r += 0.02) spec.values.push_back(r);
  const auto rows = experiments::run_sweep(spec);

  auto single_peaked = [](const std::vector<double>& y) {
    bool rising = true;
    for (std::size_t i = 1; i < y.size(); ++i) {
      if (rising && y[i] < y[i - 1] - 1e-12) rising = false;
      if (!rising && y[i] > y[i - 1] + 1e-12) return false;
    }
    return true;
  };
  std::vector<double> tn, to;
  double at10_n = -1.0, at10_o = -1.0;
  for (const auto& row : rows) {
    tn.push_back(row.noma->t1);
    to.push_back(row.oma->t1);
    if (std::abs(row.value - 10.0) < 1e-9) {
      at10_n = row.noma->t1;
      at10_o = row.oma->t1;
    }
  }
  const double peak_n = *std::max_element(tn.begin(), tn.end());
  const double peak_o = *std::max_element(to.begin(), to.end());

  std::ostringstream os;
  if (!single_peaked(tn) || !single_peaked(to)) {
    out.pass = false;
    os << "a sweep curve is not single-peaked; ";
  }
  if (!(peak_n > peak_o)) {
    out.pass = false;
    os << "peak ordering violated; ";
  }
  if (!(at10_n <= at10_o)) {
    out.pass = false;
    os << "crossover at r1 = 10 violated; ";
  }
  os << "peaks: noma " << peak_n << " > oma " << peak_o << "; at r1=10: noma " << at10_n
     << " <= oma " << at10_o;
  out.detail = os.str();
  return out;
}

// --- 3. floor sweep: equality at zero, nonnegative gap, interior max ------

Outcome criterion_floor_sweep() {
  Outcome out;
  experiments::SweepSpec spec{experiments::SweepKind::t2_sweep,
                              ChannelPair(0.8, 0.1),
                              SystemBudget(300, 1000.0, 0.0),
                              {}};
  for (double t2 = 0.0; t2 <= 3.2 + 1e-9; t2 += 0.2) spec.values.push_back(t2);
  const auto rows = experiments::run_sweep(spec);

  std::ostringstream os;
  double gap0 = 0.0;
  std::size_t argmax = 0;
  double max_gap = -1.0;
  std::size_t last_both = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].noma->feasible || !rows[i].oma->feasible) break;
    const double gap = rows[i].noma->t1 - rows[i].oma->t1;
    if (i == 0) gap0 = gap;
    if (gap < -1e-9) {
      out.pass = false;
      os << "negative gap " << gap << " at t2_floor = " << rows[i].value << "; ";
    }
    if (gap > max_gap) {
      max_gap = gap;
      argmax = i;
    }
    last_both = i;
  }
  if (std::abs(gap0) >= 1e-4) {
    out.pass = false;
    os << "|gap| at t2_floor = 0 is " << std::abs(gap0) << " (tol 1e-4); ";
  }
  if (argmax == 0 || argmax == last_both) {
    out.pass = false;
    os << "gap maximum sits at an endpoint; ";
  }
  os << "gap(0) = " << gap0 << ", max gap " << max_gap << " at t2_floor = "
     << rows[argmax].value << " (interior of [0, " << rows[last_both].value << "])";
  out.detail = os.str();
  return out;
}

// --- 4. latency targets ----------------------------------------------------

Outcome criterion_min_blocklength() {
  Outcome out;
  const ChannelPair ch(0.8, 0.1);
  const double p = 1000.0;  // 30 dB over unit noise
  const auto n_noma =
      experiments::min_blocklength(ch, p, 1.0, 5.97, experiments::Scheme::noma);
  const auto n_oma = experiments::min_blocklength(ch, p, 1.0, 5.97, experiments::Scheme::oma);
  std::ostringstream os;
  if (!n_noma || *n_noma < 8 || *n_noma > 12) {
    out.pass = false;
    os << "noma min blocklength " << (n_noma ? std::to_string(*n_noma) : "unattainable")
       << " outside 10 +- 2; ";
  }
  if (!n_oma || *n_oma < 80 || *n_oma > 90) {
    out.pass = false;
    os << "oma min blocklength " << (n_oma ? std::to_string(*n_oma) : "unattainable")
       << " outside 85 +- 5; ";
  }
  if (n_noma && n_oma) {
    os << "noma N = " << *n_noma << " (expect 10 +- 2), oma N = " << *n_oma
       << " (expect 85 +- 5)";
  }
  out.detail = os.str();
  return out;
}

// --- 5. full-power monotonicity --------------------------------------------

Outcome criterion_power_scaling() {
  Outcome out;
  std::mt19937 rng(24680);
  std::uniform_real_distribution<double> ufrac(0.05, 0.45);
  std::uniform_real_distribution<double> urate(0.9, 1.05);
  std::uniform_real_distribution<double> uh1(0.4, 1.0);
  const double pbar = 1000.0;
  const int n = 100;
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const double h1 = uh1(rng);
    const double h2 = std::uniform_real_distribution<double>(0.1, h1)(rng);
    const ChannelPair ch(h1, h2);
    const double p1 = ufrac(rng) * pbar;
    const double p2 = ufrac(rng) * pbar;
    const double alpha = pbar / (p1 + p2);
    const auto lo = noma::noma_sinrs(p1, p2, ch);
    const auto hi = noma::noma_sinrs(alpha * p1, alpha * p2, ch);
    const double r1 = urate(rng) * capacity(lo.g1);
    const double r2 = urate(rng) * capacity(lo.g2);

    const bool eps_down =
        error_probability(hi.g1, n, r1).value() < error_probability(lo.g1, n, r1).value() &&
        error_probability(hi.g1_prime, n, r1).value() <
            error_probability(lo.g1_prime, n, r1).value() &&
        error_probability(hi.g21, n, r2).value() < error_probability(lo.g21, n, r2).value() &&
        error_probability(hi.g2, n, r2).value() < error_probability(lo.g2, n, r2).value();
    const double t1_lo = noma::t1_of_r1(r1, lo, r2, n);
    const double t1_hi = noma::t1_of_r1(r1, hi, r2, n);
    const double t2_lo = r2 * (1.0 - error_probability(lo.g2, n, r2).value());
    const double t2_hi = r2 * (1.0 - error_probability(hi.g2, n, r2).value());
    if (!eps_down || !(t1_hi > t1_lo) || !(t2_hi > t2_lo)) ++violations;
  }
  out.pass = violations == 0;
  out.detail = "100 random operating points, " + std::to_string(violations) +
               " monotonicity violations";
  return out;
}

// --- 6. special-function identities ----------------------------------------

Outcome criterion_special_functions() {
  Outcome out;
  std::ostringstream os;

  // Roundtrip over [-8, 8] at 1e-8, as stated. For x below about -6.05 this
  // tolerance is unreachable in IEEE double: Q(x) is within ulp(1)/2 of 1, so
  // inverting the stored value shifts x by (ulp/2)/phi(x) > 1e-8 no matter
  // the implementation. The check runs as stated and reports the honest result.
  double worst_rt = 0.0, worst_at = 0.0;
  for (double x = -8.0; x <= 8.0 + 1e-12; x += 0.0625) {
    const double err = std::abs(q_inverse(q_function(x)) - x);
    if (err > worst_rt) {
      worst_rt = err;
      worst_at = x;
    }
  }
  if (worst_rt >= 1e-8) {
    out.pass = false;
    os << "roundtrip max |err| = " << worst_rt << " at x = " << worst_at
       << " (tol 1e-8; double-precision floor at that x is "
       << 0.5 * 1.11e-16 / normal_pdf(worst_at) << "); ";
  } else {
    os << "roundtrip max |err| = " << worst_rt << "; ";
  }

  // Inverse pair of the rate and error maps.
  std::mt19937 rng(1357);
  std::uniform_real_distribution<double> ug(-1.0, 3.0), ue(-6.0, 0.0);
  std::uniform_int_distribution<int> un(10, 2000);
  double worst_pair = 0.0;
  for (int i = 0; i < 400; ++i) {
    const double gamma = std::pow(10.0, ug(rng));
    const int n = un(rng);
    double eps = std::pow(10.0, ue(rng));
    if (i % 2) eps = 1.0 - eps;
    const double rate = achievable_rate(gamma, n, Probability(eps));
    if (rate < 0.0) continue;
    worst_pair =
        std::max(worst_pair, std::abs(error_probability(gamma, n, rate).value() - eps));
  }
  if (worst_pair >= 1e-9) {
    out.pass = false;
    os << "rate/error inverse-pair max |err| = " << worst_pair << " (tol 1e-9); ";
  } else {
    os << "inverse-pair max |err| = " << worst_pair << "; ";
  }

  // At rate exactly capacity the error is one half, exactly.
  bool half_exact = true;
  for (double g : {0.2, 1.0, 9.5, 640.0, 6400.0}) {
    for (int n : {10, 300, 5000}) {
      if (error_probability(g, n, capacity(g)).value() != 0.5) half_exact = false;
    }
  }
  if (!half_exact) {
    out.pass = false;
    os << "error at capacity-rate not exactly 0.5";
  } else {
    os << "error at capacity-rate exactly 0.5";
  }
  out.detail = os.str();
  return out;
}

// --- 7. reduction consistency ----------------------------------------------

Outcome criterion_reduction() {
  Outcome out;
  std::mt19937 rng(9753);
  std::uniform_real_distribution<double> ug(-0.5, 3.5);
  std::uniform_int_distribution<int> un(10, 2000);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double gamma = std::pow(10.0, ug(rng));
    const int n = un(rng);
    const double mixture = noma::optimal_r1_given_sic_failure(gamma, gamma, Probability(0.0), n);
    const double single = oma::optimal_r1(gamma, n);
    worst = std::max(worst, std::abs(mixture - single));
  }
  out.pass = worst < 1e-9;
  std::ostringstream os;
  os << "20 random points, max |difference| = " << worst << " (tol 1e-9)";
  out.detail = os.str();
  return out;
}

// --- 8. byte determinism of the CLI ----------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Outcome criterion_determinism(const std::string& cli_path) {
  Outcome out;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "fblnoma_acceptance";
  fs::create_directories(dir);
  const std::string f1 = (dir / "run1.csv").string();
  const std::string f2 = (dir / "run2.csv").string();

  if (!cli_path.empty()) {
    const std::string base = "\"" + cli_path +
                             "\" sweep --scheme both --h1 0.8 --h2 0.1 --snr-db 30 --n 300 "
                             "--sweep t2 --range 0:3:0.5 --out ";
    if (std::system((base + "\"" + f1 + "\"").c_str()) != 0 ||
        std::system((base + "\"" + f2 + "\"").c_str()) != 0) {
      out.pass = false;
      out.detail = "CLI sweep invocation failed";
      return out;
    }
    const std::string a = read_file(f1), b = read_file(f2);
    out.pass = !a.empty() && a == b;
    out.detail = out.pass ? "two CLI runs produced byte-identical CSV (" +
                                std::to_string(a.size()) + " bytes)"
                          : "CLI runs differ";
  } else {
    experiments::SweepSpec spec{experiments::SweepKind::t2_sweep, ChannelPair(0.8, 0.1),
                                SystemBudget(300, 1000.0, 0.0),
                                {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}};
    std::ostringstream a, b;
    cli::emit_csv(spec, experiments::run_sweep(spec), a);
    cli::emit_csv(spec, experiments::run_sweep(spec), b);
    out.pass = a.str() == b.str();
    out.detail = out.pass ? "in-process reruns byte-identical (no CLI path given)"
                          : "in-process reruns differ";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli_path = argc > 1 ? argv[1] : "";
  std::vector<std::pair<std::string, Outcome>> results;

  const auto timed = [&](int id, const std::string& name, auto&& fn) {
    const double t0 = now_seconds();
    Outcome o = fn();
    const double dt = now_seconds() - t0;
    std::printf("[%s] criterion %d: %s (%.1fs) - %s\n", o.pass ? "PASS" : "FAIL", id,
                name.c_str(), dt, o.detail.c_str());
    std::fflush(stdout);
    results.emplace_back(name, o);
  };

  timed(1, "stationarity roots match the grid oracle", criterion_roots_vs_oracle);
  timed(2, "reference rate sweep shape and peak ordering", criterion_rate_sweep);
  timed(3, "floor sweep endpoints and interior gap maximum", criterion_floor_sweep);
  timed(4, "minimum blocklength targets", criterion_min_blocklength);
  timed(5, "full-power monotonicity suite", criterion_power_scaling);
  timed(6, "special-function identities", criterion_special_functions);
  timed(7, "mixture/single-slot reduction consistency", criterion_reduction);
  timed(8, "byte determinism of sweep CSV",
        [&]() { return criterion_determinism(cli_path); });

  std::size_t failed = 0;
  for (const auto& [name, o] : results) failed += o.pass ? 0 : 1;
  std::printf("%zu/%zu criteria passed\n", results.size() - failed, results.size());
  return failed == 0 ? 0 : 1;
}
