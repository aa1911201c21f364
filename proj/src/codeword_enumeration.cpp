#include "cdmacap/codeword_enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "cdmacap/enumeration_kernel.hpp"
#include "cdmacap/saddle_capacity.hpp"

namespace cdmacap {
namespace {

constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;
constexpr int64_t kMaxDenom = 1000000000000ll;  // 12 fractional digits

using int128 = __int128;

int64_t floor_div(int128 num, int64_t den) {
  int128 q = num / den;
  if (num % den != 0 && num < 0) --q;
  return static_cast<int64_t>(q);
}

void require_workers(int workers) {
  if (workers < 1) throw std::domain_error("workers must be at least 1");
}

void warn_wide(int users) {
  std::cerr << "warning: enumerating 2^" << users
            << " states; this can take minutes\n";
}

uint64_t count_impl(const IntegerCorrelations& c, const NoiseThreshold& kappa,
                    int workers) {
  const int n = c.users;
  const int64_t max_field =
      static_cast<int64_t>(n) * c.chips;  // |x_k F_k| never exceeds this
  if (max_field >= (int64_t(1) << 30)) {
    throw std::length_error("users * chips too large for the 32-bit kernel");
  }
  const int64_t m_full = min_valid_field(c.chips, kappa) + c.chips;
  const uint64_t total = uint64_t(1) << n;

  if (m_full > max_field) return 0;      // margin unreachable
  if (m_full <= -max_field) return total;  // margin trivially met

  const auto threshold = static_cast<int32_t>(m_full);
  const int nw = static_cast<int>(
      std::min<uint64_t>(static_cast<uint64_t>(workers), total));
  if (nw <= 1) {
    return detail::enumerate_gray_range(c.c.data(), n, threshold, 0, total);
  }

  std::vector<uint64_t> part(static_cast<size_t>(nw), 0);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(nw));
  for (int r = 0; r < nw; ++r) {
    const uint64_t begin = total / nw * r + std::min<uint64_t>(r, total % nw);
    const uint64_t end =
        total / nw * (r + 1) + std::min<uint64_t>(r + 1, total % nw);
    pool.emplace_back([&, r, begin, end] {
      part[static_cast<size_t>(r)] =
          detail::enumerate_gray_range(c.c.data(), n, threshold, begin, end);
    });
  }
  for (auto& th : pool) th.join();
  uint64_t count = 0;
  for (uint64_t p : part) count += p;
  return count;
}

}  // namespace

uint64_t trial_seed(uint64_t master_seed, int trial) {
  if (trial < 0) throw std::domain_error("trial must be non-negative");
  // (trial+1)-th SplitMix64 output of the master stream, in closed form.
  SplitMix64 s(master_seed + kGamma * static_cast<uint64_t>(trial));
  return s.next();
}

SpreadingMatrix sample_spreading(int users, int chips, uint64_t seed) {
  if (users < 1) throw std::domain_error("users must be at least 1");
  if (chips < 1) throw std::domain_error("chips must be at least 1");

  SpreadingMatrix m;
  m.users = users;
  m.chips = chips;
  m.seed = seed;
  m.entries.resize(static_cast<size_t>(users) * chips);

  SplitMix64 rng(seed);
  uint64_t word = 0;
  int avail = 0;
  for (auto& e : m.entries) {
    if (avail == 0) {
      word = rng.next();
      avail = 64;
    }
    e = static_cast<int8_t>(2 * static_cast<int>(word & 1u) - 1);
    word >>= 1;
    --avail;
  }
  return m;
}

IntegerCorrelations correlations(const SpreadingMatrix& s) {
  if (s.users < 1 || s.chips < 1 ||
      s.entries.size() != static_cast<size_t>(s.users) * s.chips) {
    throw std::domain_error("spreading matrix has inconsistent dimensions");
  }
  for (int8_t e : s.entries) {
    if (e != 1 && e != -1) {
      throw std::domain_error("spreading matrix entries must be +1 or -1");
    }
  }

  IntegerCorrelations out;
  out.users = s.users;
  out.chips = s.chips;
  out.c.resize(static_cast<size_t>(s.users) * s.users);
  for (int k = 0; k < s.users; ++k) {
    for (int i = k; i < s.users; ++i) {
      int32_t acc = 0;
      const int8_t* rk = s.entries.data() + static_cast<size_t>(k) * s.chips;
      const int8_t* ri = s.entries.data() + static_cast<size_t>(i) * s.chips;
      for (int mu = 0; mu < s.chips; ++mu) {
        acc += static_cast<int32_t>(rk[mu]) * ri[mu];
      }
      out.c[static_cast<size_t>(k) * s.users + i] = acc;
      out.c[static_cast<size_t>(i) * s.users + k] = acc;
    }
  }
  return out;
}

NoiseThreshold::NoiseThreshold(int64_t numer, int64_t denom)
    : numer_(numer), denom_(denom) {
  if (numer < 0) throw std::domain_error("threshold must be non-negative");
  int64_t d = denom;
  if (d < 1 || d > kMaxDenom) {
    throw std::domain_error("threshold denominator must be a power of ten "
                            "with at most 12 zeros");
  }
  while (d % 10 == 0) d /= 10;
  if (d != 1) {
    throw std::domain_error("threshold denominator must be a power of ten");
  }
}

NoiseThreshold NoiseThreshold::parse(const std::string& text) {
  const auto fail = [&]() -> NoiseThreshold {
    throw std::domain_error("'" + text +
                            "' is not a plain decimal threshold "
                            "(use digits with at most 12 decimal places)");
  };

  const size_t dot = text.find('.');
  const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) return fail();
  if (frac.size() > 12 || whole.size() + frac.size() > 18) return fail();

  int64_t numer = 0;
  for (const std::string* part : {&whole, &frac}) {
    for (char ch : *part) {
      if (ch < '0' || ch > '9') return fail();
      numer = numer * 10 + (ch - '0');
    }
  }
  int64_t denom = 1;
  for (size_t i = 0; i < frac.size(); ++i) denom *= 10;
  return NoiseThreshold(numer, denom);
}

int64_t min_valid_field(int chips, const NoiseThreshold& kappa) {
  if (chips < 1) throw std::domain_error("chips must be at least 1");
  // Smallest m with m q > N (p - q): floor(N(p-q)/q) + 1, exactly.
  const int128 scaled =
      static_cast<int128>(chips) * (kappa.numer() - kappa.denom());
  return floor_div(scaled, kappa.denom()) + 1;
}

CodewordState state_at(const IntegerCorrelations& c, uint64_t index) {
  const int n = c.users;
  CodewordState st;
  st.bits.resize(static_cast<size_t>(n));
  st.fields.resize(static_cast<size_t>(n));
  const uint64_t g = index ^ (index >> 1);
  for (int j = 0; j < n; ++j) st.bits[j] = (g >> j) & 1u ? 1 : -1;
  for (int k = 0; k < n; ++k) {
    int64_t acc = 0;
    for (int i = 0; i < n; ++i) {
      if (i != k) acc += static_cast<int64_t>(c.at(k, i)) * st.bits[i];
    }
    st.fields[k] = acc;
  }
  return st;
}

bool is_valid(const CodewordState& state, const IntegerCorrelations& c,
              const NoiseThreshold& kappa) {
  if (state.bits.size() != static_cast<size_t>(c.users) ||
      state.fields.size() != static_cast<size_t>(c.users)) {
    throw std::domain_error("state size does not match correlations");
  }
  const int64_t m = min_valid_field(c.chips, kappa);
  for (int k = 0; k < c.users; ++k) {
    if (static_cast<int64_t>(state.bits[k]) * state.fields[k] < m) {
      return false;
    }
  }
  return true;
}

EnumerationResult count_codewords(const IntegerCorrelations& c,
                                  const NoiseThreshold& kappa, int workers) {
  if (c.users < 1) throw std::domain_error("users must be at least 1");
  if (c.users > kMaxUsers) {
    std::ostringstream os;
    os << "users = " << c.users << " exceeds the enumeration limit of "
       << kMaxUsers;
    throw std::out_of_range(os.str());
  }
  require_workers(workers);
  if (c.users > kWarnUsers) warn_wide(c.users);

  EnumerationResult res;
  res.users = c.users;
  res.kappa = kappa.value();
  const auto t0 = std::chrono::steady_clock::now();
  res.count = count_impl(c, kappa, workers);
  res.seconds = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

DegenerateStatisticsError::DegenerateStatisticsError(EnsembleStats partial)
    : std::runtime_error("all " + std::to_string(partial.trials) +
                         " trials produced zero codewords; capacity "
                         "statistics are undefined"),
      stats(std::move(partial)) {}

EnsembleStats empirical_capacity(int users, double beta,
                                 const NoiseThreshold& kappa, int trials,
                                 uint64_t master_seed, int workers) {
  if (users < 1) throw std::domain_error("users must be at least 1");
  if (users > kMaxUsers) {
    std::ostringstream os;
    os << "users = " << users << " exceeds the enumeration limit of "
       << kMaxUsers;
    throw std::out_of_range(os.str());
  }
  require_beta_supported(beta);
  require_kappa_supported(kappa.value());
  if (trials < 1) throw std::domain_error("trials must be at least 1");
  require_workers(workers);

  const int chips = static_cast<int>(std::floor(users / beta + 0.5));
  if (chips < 1) {
    throw std::domain_error("round(users/beta) gives zero chips");
  }
  if (users > kWarnUsers) warn_wide(users);

  EnsembleStats stats;
  stats.users = users;
  stats.chips = chips;
  stats.requested_beta = beta;
  stats.realized_beta = static_cast<double>(users) / chips;
  stats.kappa = kappa.value();
  stats.trials = trials;
  stats.per_trial.resize(static_cast<size_t>(trials));

  const auto run_trial = [&](int t) {
    TrialRecord rec;
    rec.trial = t;
    rec.seed = trial_seed(master_seed, t);
    const auto corr = correlations(sample_spreading(users, chips, rec.seed));
    rec.count = count_impl(corr, kappa, 1);
    rec.bits = rec.count > 0
                   ? std::log2(static_cast<double>(rec.count)) / users
                   : 0.0;
    stats.per_trial[static_cast<size_t>(t)] = rec;
  };

  const int nw = std::min(workers, trials);
  if (nw <= 1) {
    for (int t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(nw));
    for (int r = 0; r < nw; ++r) {
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
          run_trial(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  int kept = 0;
  double sum = 0.0;
  for (const auto& rec : stats.per_trial) {
    if (rec.count > 0) {
      ++kept;
      sum += rec.bits;
    } else {
      ++stats.zero_trials;
    }
  }
  if (kept == 0) throw DegenerateStatisticsError(std::move(stats));

  stats.mean_bits = sum / kept;
  if (kept >= 2) {
    double ss = 0.0;
    for (const auto& rec : stats.per_trial) {
      if (rec.count > 0) {
        const double d = rec.bits - stats.mean_bits;
        ss += d * d;
      }
    }
    stats.std_bits = std::sqrt(ss / (kept - 1));
  }
  return stats;
}

}  // namespace cdmacap
