#include "fblnoma/experiments.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "parallel.hpp"

namespace fblnoma::experiments {

namespace {

void check_values(const SweepSpec& spec) {
  if (spec.values.empty()) {
    throw std::invalid_argument("SweepSpec: values must be nonempty");
  }
  for (std::size_t i = 0; i + 1 < spec.values.size(); ++i) {
    if (!(spec.values[i] < spec.values[i + 1])) {
      throw std::invalid_argument("SweepSpec: values must be strictly increasing");
    }
  }
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw std::invalid_argument("SweepSpec: values must be finite");
  }
}

int as_blocklength(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-9 || r < 2.0 || r > 1e9) {
    throw std::invalid_argument("SweepSpec: blocklength values must be integers >= 2");
  }
  return static_cast<int>(r);
}

// Fixed context for the rate sweep: the floor-pinning solve of each scheme,
// evaluated once and reused across every r1 value.
struct RateSweepBase {
  bool noma_ok = false;
  noma::PowerSplit noma_split;
  noma::NomaSinrs sinrs;
  Probability noma_err2{1.0};
  double noma_t2 = 0.0;

  bool oma_ok = false;
  oma::OmaSolution oma_best;
  double oma_g1 = 0.0;
};

RateSweepBase make_rate_base(const SweepSpec& spec) {
  RateSweepBase base;
  if (spec.run_noma) {
    if (auto split = noma::solve_power_and_r2(spec.channel, spec.budget)) {
      base.noma_ok = true;
      base.noma_split = *split;
      base.sinrs = noma::noma_sinrs(split->p1, split->p2, spec.channel);
      base.noma_err2 = error_probability(base.sinrs.g2, spec.budget.n_total, split->r2);
      base.noma_t2 = effective_throughput(spec.budget.n_total, spec.budget.n_total,
                                          split->r2, base.noma_err2);
    }
  }
  if (spec.run_oma) {
    base.oma_best = oma::maximize_t1_oma(spec.channel, spec.budget);
    if (base.oma_best.feasible) {
      base.oma_ok = true;
      base.oma_g1 = oma::oma_snr(base.oma_best.p1, spec.channel.h1_gain, spec.channel.noise1);
    }
  }
  return base;
}

SweepRow rate_row(const SweepSpec& spec, const RateSweepBase& base, double r1) {
  SweepRow row;
  row.value = r1;
  const int n = spec.budget.n_total;
  if (spec.run_noma) {
    noma::NomaSolution cell;
    if (base.noma_ok) {
      cell.feasible = true;
      cell.near_boundary = base.noma_split.near_boundary;
      cell.p1 = base.noma_split.p1;
      cell.p2 = base.noma_split.p2;
      cell.r2 = base.noma_split.r2;
      cell.r1 = r1;
      cell.t1 = noma::t1_of_r1(r1, base.sinrs, cell.r2, n);
      const Probability e21 = error_probability(base.sinrs.g21, n, cell.r2);
      cell.eff_err1 = noma::effective_error_u1(error_probability(base.sinrs.g1, n, r1),
                                               error_probability(base.sinrs.g1_prime, n, r1),
                                               e21);
      cell.err2 = base.noma_err2;
      cell.t2 = base.noma_t2;
    }
    row.noma = cell;
  }
  if (spec.run_oma) {
    oma::OmaSolution cell;
    if (base.oma_ok) {
      cell = base.oma_best;
      cell.r1 = r1;
      cell.t1 = effective_throughput(cell.n1, n, r1,
                                     error_probability(base.oma_g1, cell.n1, r1));
    }
    row.oma = cell;
  }
  return row;
}

SweepRow maximize_row(const SweepSpec& spec, const SystemBudget& budget, double value) {
  SweepRow row;
  row.value = value;
  if (spec.run_noma) row.noma = noma::maximize_t1_noma(spec.channel, budget);
  if (spec.run_oma) row.oma = oma::maximize_t1_oma(spec.channel, budget);
  return row;
}

SweepRow min_n_row(const SweepSpec& spec, double target) {
  SweepRow row;
  row.value = target;
  auto solve_at = [&](Scheme scheme) {
    const auto n = min_blocklength(spec.channel, spec.budget.p_avg, spec.budget.t2_floor,
                                   target, scheme, spec.n_cap);
    if (scheme == Scheme::noma) {
      row.noma_min_n = n;
      if (n) {
        row.noma = noma::maximize_t1_noma(
            spec.channel, SystemBudget(*n, spec.budget.p_avg, spec.budget.t2_floor));
      }
    } else {
      row.oma_min_n = n;
      if (n) {
        row.oma = oma::maximize_t1_oma(
            spec.channel, SystemBudget(*n, spec.budget.p_avg, spec.budget.t2_floor));
      }
    }
  };
  if (spec.run_noma) solve_at(Scheme::noma);
  if (spec.run_oma) solve_at(Scheme::oma);
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  check_values(spec);
  std::vector<SweepRow> rows(spec.values.size());

  switch (spec.kind) {
    case SweepKind::rate_sweep: {
      const RateSweepBase base = make_rate_base(spec);
      detail::parallel_for_index(rows.size(), [&](std::size_t i) {
        rows[i] = rate_row(spec, base, spec.values[i]);
      });
      break;
    }
    case SweepKind::t2_sweep: {
      detail::parallel_for_index(rows.size(), [&](std::size_t i) {
        const SystemBudget b(spec.budget.n_total, spec.budget.p_avg, spec.values[i]);
        rows[i] = maximize_row(spec, b, spec.values[i]);
      });
      break;
    }
    case SweepKind::blocklength_sweep: {
      for (double v : spec.values) as_blocklength(v);  // validate before spawning work
      detail::parallel_for_index(rows.size(), [&](std::size_t i) {
        const SystemBudget b(as_blocklength(spec.values[i]), spec.budget.p_avg,
                             spec.budget.t2_floor);
        rows[i] = maximize_row(spec, b, spec.values[i]);
      });
      break;
    }
    case SweepKind::min_blocklength: {
      detail::parallel_for_index(rows.size(), [&](std::size_t i) {
        rows[i] = min_n_row(spec, spec.values[i]);
      });
      break;
    }
  }
  return rows;
}

std::optional<int> min_blocklength(const ChannelPair& ch, double p_avg, double t2_floor,
                                   double t1_target, Scheme scheme, int n_cap) {
  constexpr int kMinN = 2;
  if (n_cap < kMinN) throw std::invalid_argument("min_blocklength: n_cap must be >= 2");
  if (!(t1_target > 0.0)) return kMinN;

  auto t1_star = [&](int n) {
    const SystemBudget budget(n, p_avg, t2_floor);
    if (scheme == Scheme::noma) {
      const auto s = noma::maximize_t1_noma(ch, budget);
      return s.feasible ? s.t1 : -std::numeric_limits<double>::infinity();
    }
    const auto s = oma::maximize_t1_oma(ch, budget);
    return s.feasible ? s.t1 : -std::numeric_limits<double>::infinity();
  };

  int hi = kMinN;
  if (t1_star(hi) < t1_target) {
    int lo = kMinN;
    bool found = false;
    for (long long probe = 2LL * kMinN; probe <= n_cap; probe *= 2) {
      hi = static_cast<int>(probe);
      if (t1_star(hi) >= t1_target) {
        found = true;
        break;
      }
      lo = hi;
    }
    if (!found) {
      if (lo >= n_cap || t1_star(n_cap) < t1_target) return std::nullopt;
      hi = n_cap;
    }
    while (hi - lo > 1) {
      const int mid = lo + (hi - lo) / 2;
      if (t1_star(mid) >= t1_target) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
  }

  // T1* versus N is not assumed monotone: walk down through any qualifying
  // neighbors and probe a small window below for detached qualifiers.
  int best = hi;
  for (;;) {
    if (best > kMinN && t1_star(best - 1) >= t1_target) {
      --best;
      continue;
    }
    int detached = -1;
    for (int n = std::max(kMinN, best - 17); n <= best - 2; ++n) {
      if (t1_star(n) >= t1_target) {
        detached = n;
        break;
      }
    }
    if (detached > 0) {
      best = detached;
      continue;
    }
    break;
  }
  return best;
}

}  // namespace fblnoma::experiments
