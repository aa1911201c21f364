// Tests for exact codeword enumeration: signature sampling, integer
// correlations, decimal margin arithmetic, the Gray-walk counting kernel,
// and ensemble statistics.  The kernel is checked against a from-scratch
// oracle that re-derives every field by direct summation and classifies
// states with 128-bit integer arithmetic, sharing no code with the
// incremental walk.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <cdmacap/codeword_enumeration.hpp>

using cdmacap::CodewordState;
using cdmacap::DegenerateStatisticsError;
using cdmacap::EnsembleStats;
using cdmacap::IntegerCorrelations;
using cdmacap::NoiseThreshold;
using cdmacap::SplitMix64;
using cdmacap::SpreadingMatrix;
using cdmacap::correlations;
using cdmacap::count_codewords;
using cdmacap::empirical_capacity;
using cdmacap::is_valid;
using cdmacap::min_valid_field;
using cdmacap::sample_spreading;
using cdmacap::state_at;
using cdmacap::trial_seed;

namespace {

// Oracle: count codewords by brute force.  For each of the 2^users sign
// vectors, fields are rebuilt by direct summation and the strict margin
// x_k f_k > chips (kappa - 1) is evaluated as the exact integer comparison
// x_k f_k * denom > chips * (numer - denom) in 128-bit arithmetic.
uint64_t naive_count(const IntegerCorrelations& c, const NoiseThreshold& k) {
  const int users = c.users;
  const __int128 rhs =
      static_cast<__int128>(c.chips) * (k.numer() - k.denom());
  uint64_t count = 0;
  for (uint64_t word = 0; word < (uint64_t(1) << users); ++word) {
    std::vector<int> x(users);
    for (int i = 0; i < users; ++i) x[i] = (word >> i) & 1 ? 1 : -1;
    bool ok = true;
    for (int kk = 0; kk < users && ok; ++kk) {
      int64_t f = 0;
      for (int i = 0; i < users; ++i) {
        if (i != kk) f += static_cast<int64_t>(c.at(kk, i)) * x[i];
      }
      ok = static_cast<__int128>(x[kk] * f) * k.denom() > rhs;
    }
    count += ok;
  }
  return count;
}

}  // namespace

TEST_CASE("SplitMix64 produces the published stream") {
  SplitMix64 g(0);
  CHECK(g.next() == 0xE220A8397B1DCDAFull);
  CHECK(g.next() == 0x6E789E6AA1B965F4ull);
  CHECK(g.next() == 0x06C45D188009454Full);

  // Trial seeds are successive outputs of a golden-ratio-offset stream.
  SplitMix64 h(123 + 5 * 0x9E3779B97F4A7C15ull);
  CHECK(trial_seed(123, 5) == h.next());
  CHECK(trial_seed(123, 5) == 12305648938738823696ull);
  SplitMix64 h0(42);
  CHECK(trial_seed(42, 0) == h0.next());
  CHECK(trial_seed(42, 1) == h0.next());
}

TEST_CASE("sample_spreading is deterministic and fair") {
  const auto a = sample_spreading(8, 16, 7);
  const auto b = sample_spreading(8, 16, 7);
  CHECK(a.entries == b.entries);
  CHECK(a.users == 8);
  CHECK(a.chips == 16);
  CHECK(a.seed == 7);
  CHECK(a.entries.size() == 128);
  const auto other = sample_spreading(8, 16, 8);
  CHECK(a.entries != other.entries);

  for (int8_t e : a.entries) CHECK((e == 1 || e == -1));

  // Bits are consumed LSB-first from successive generator words, row-major.
  SplitMix64 g(7);
  uint64_t word = g.next();
  for (int i = 0; i < 128; ++i) {
    if (i > 0 && i % 64 == 0) word = g.next();
    const int bit = (word >> (i % 64)) & 1;
    CHECK(a.entries[i] == (bit ? 1 : -1));
  }

  // Fair coin: the grand mean concentrates like 1/sqrt(K N).
  const auto big = sample_spreading(25, 50, 2024);
  double mean = 0.0;
  for (int8_t e : big.entries) mean += e;
  mean /= big.entries.size();
  CHECK(std::fabs(mean) <= 4.0 / std::sqrt(25.0 * 50.0));

  CHECK(sample_spreading(1, 1, 3).entries.size() == 1);
}

TEST_CASE("correlations match direct summation and carry their invariants") {
  // Hand-built matrices first: equal rows correlate to +chips, opposite
  // rows to -chips.
  SpreadingMatrix s;
  s.users = 2;
  s.chips = 4;
  s.entries = {1, 1, 1, 1, 1, 1, 1, 1};
  CHECK(correlations(s).at(0, 1) == 4);
  s.entries = {1, 1, 1, 1, -1, -1, -1, -1};
  CHECK(correlations(s).at(0, 1) == -4);

  const auto m = sample_spreading(5, 9, 11);
  const auto c = correlations(m);
  CHECK(c.users == 5);
  CHECK(c.chips == 9);
  for (int k = 0; k < 5; ++k) {
    CHECK(c.at(k, k) == 9);
    for (int i = 0; i < 5; ++i) {
      int32_t direct = 0;
      for (int mu = 0; mu < 9; ++mu) direct += m.at(k, mu) * m.at(i, mu);
      CHECK(c.at(k, i) == direct);
      CHECK(c.at(k, i) == c.at(i, k));
      CHECK(std::abs(c.at(k, i)) <= 9);
      CHECK((c.at(k, i) - 9) % 2 == 0);
    }
  }

  SpreadingMatrix bad;
  bad.users = 2;
  bad.chips = 2;
  bad.entries = {1, 1, 1, 2};
  CHECK_THROWS_AS(correlations(bad), std::domain_error);
}

TEST_CASE("NoiseThreshold parses plain decimals exactly") {
  CHECK(NoiseThreshold::parse("0").numer() == 0);
  CHECK(NoiseThreshold::parse("0").denom() == 1);
  CHECK(NoiseThreshold::parse("1").numer() == 1);
  CHECK(NoiseThreshold::parse("1.05").numer() == 105);
  CHECK(NoiseThreshold::parse("1.05").denom() == 100);
  CHECK(NoiseThreshold::parse("0.9").value() == doctest::Approx(0.9));
  CHECK(NoiseThreshold::parse("1.000000000001").denom() == 1000000000000ll);

  CHECK_THROWS_AS(NoiseThreshold::parse(""), std::domain_error);
  CHECK_THROWS_AS(NoiseThreshold::parse("1e-3"), std::domain_error);
  CHECK_THROWS_AS(NoiseThreshold::parse("-1"), std::domain_error);
  CHECK_THROWS_AS(NoiseThreshold::parse("1.0000000000001"),
                  std::domain_error);
  CHECK_THROWS_AS(NoiseThreshold::parse("1..5"), std::domain_error);
  CHECK_THROWS_AS(NoiseThreshold(-1, 10), std::domain_error);
  CHECK_THROWS_AS(NoiseThreshold(1, 3), std::domain_error);
}

TEST_CASE("min_valid_field is the exact strict-margin cutoff") {
  // m is the least integer with m > chips (kappa - 1).
  CHECK(min_valid_field(4, NoiseThreshold::parse("0")) == -3);
  CHECK(min_valid_field(4, NoiseThreshold::parse("1")) == 1);
  CHECK(min_valid_field(4, NoiseThreshold::parse("1.5")) == 3);
  CHECK(min_valid_field(4, NoiseThreshold::parse("1.49")) == 2);
  CHECK(min_valid_field(10, NoiseThreshold::parse("0.7")) == -2);
  CHECK(min_valid_field(3, NoiseThreshold::parse("2")) == 4);
}

TEST_CASE("state_at and is_valid classify boundary states exactly") {
  // Two users, c12 = 2: both margins are x1 x2 * 2, so kappa = 1.5
  // (cutoff 3) rejects everything and kappa = 1.49 (cutoff 2) keeps the
  // two aligned states.
  SpreadingMatrix s;
  s.users = 2;
  s.chips = 4;
  s.entries = {1, 1, 1, 1, 1, 1, 1, -1};
  const auto c = correlations(s);
  REQUIRE(c.at(0, 1) == 2);

  int valid_149 = 0, valid_150 = 0;
  for (uint64_t i = 0; i < 4; ++i) {
    const auto st = state_at(c, i);
    CHECK(st.fields[0] == 2 * st.bits[1]);
    CHECK(st.fields[1] == 2 * st.bits[0]);
    valid_149 += is_valid(st, c, NoiseThreshold::parse("1.49"));
    valid_150 += is_valid(st, c, NoiseThreshold::parse("1.5"));
  }
  CHECK(valid_149 == 2);
  CHECK(valid_150 == 0);
}

TEST_CASE("count_codewords handles the degenerate sizes") {
  // A lone user has zero interference: any sign works at kappa < 1, none
  // at kappa >= 1 (strict margin 0 > 0 fails).
  const auto c1 = correlations(sample_spreading(1, 8, 5));
  CHECK(count_codewords(c1, NoiseThreshold::parse("0")).count == 2);
  CHECK(count_codewords(c1, NoiseThreshold::parse("0.99")).count == 2);
  CHECK(count_codewords(c1, NoiseThreshold::parse("1")).count == 0);

  // Orthogonal pair: all four states stable at kappa = 0.
  SpreadingMatrix s;
  s.users = 2;
  s.chips = 2;
  s.entries = {1, 1, 1, -1};
  CHECK(count_codewords(correlations(s), NoiseThreshold::parse("0")).count ==
        4);

  const auto res = count_codewords(c1, NoiseThreshold::parse("0"));
  CHECK(res.users == 1);
  CHECK(res.kappa == 0.0);
  CHECK(res.seconds >= 0.0);
}

TEST_CASE("count_codewords equals the brute-force oracle") {
  SplitMix64 rng(0xABCDu);
  const char* kappas[] = {"0", "0.3", "0.9", "1.2"};
  for (int inst = 0; inst < 30; ++inst) {
    const int users = 3 + static_cast<int>(rng.next() % 8);   // 3..10
    const int chips = 4 + static_cast<int>(rng.next() % 21);  // 4..24
    const auto c = correlations(sample_spreading(users, chips, rng.next()));
    for (const char* k : kappas) {
      CAPTURE(inst);
      CAPTURE(users);
      CAPTURE(chips);
      CAPTURE(k);
      const auto kappa = NoiseThreshold::parse(k);
      const uint64_t fast = count_codewords(c, kappa).count;
      CHECK(fast == naive_count(c, kappa));
      CHECK(fast % 2 == 0);  // global flip maps codewords to codewords
    }
  }
}

TEST_CASE("count_codewords is monotone in the margin") {
  const auto c = correlations(sample_spreading(12, 24, 99));
  uint64_t prev = UINT64_MAX;
  for (const char* k : {"0", "0.25", "0.5", "0.75", "1", "1.25", "1.5"}) {
    const uint64_t n = count_codewords(c, NoiseThreshold::parse(k)).count;
    CHECK(n <= prev);
    prev = n;
  }
}

TEST_CASE("count_codewords is invariant under worker count") {
  const auto c = correlations(sample_spreading(14, 30, 4242));
  const auto kappa = NoiseThreshold::parse("0.5");
  const uint64_t w1 = count_codewords(c, kappa, 1).count;
  CHECK(count_codewords(c, kappa, 2).count == w1);
  CHECK(count_codewords(c, kappa, 5).count == w1);
  CHECK(count_codewords(c, kappa, 16).count == w1);
}

TEST_CASE("counting sums state_at validity over the whole walk") {
  const auto c = correlations(sample_spreading(12, 18, 31337));
  const auto kappa = NoiseThreshold::parse("0.9");
  uint64_t by_states = 0;
  for (uint64_t i = 0; i < (uint64_t(1) << 12); ++i) {
    by_states += is_valid(state_at(c, i), c, kappa);
  }
  CHECK(by_states == count_codewords(c, kappa).count);
}

TEST_CASE("count_codewords rejects unsupported sizes") {
  CHECK_THROWS_AS(
      count_codewords(correlations(sample_spreading(33, 8, 1)),
                      NoiseThreshold::parse("0")),
      std::out_of_range);
  IntegerCorrelations empty;
  CHECK_THROWS_AS(count_codewords(empty, NoiseThreshold::parse("0")),
                  std::domain_error);
}

TEST_CASE("empirical_capacity reproduces bit-identical ensembles") {
  const auto kappa = NoiseThreshold::parse("0");
  const auto a = empirical_capacity(10, 0.5, kappa, 6, 7, 1);
  const auto b = empirical_capacity(10, 0.5, kappa, 6, 7, 1);
  const auto c = empirical_capacity(10, 0.5, kappa, 6, 7, 3);
  REQUIRE(a.per_trial.size() == 6);
  for (size_t i = 0; i < 6; ++i) {
    CHECK(a.per_trial[i].seed == trial_seed(7, static_cast<int>(i)));
    CHECK(a.per_trial[i].seed == b.per_trial[i].seed);
    CHECK(a.per_trial[i].count == b.per_trial[i].count);
    CHECK(a.per_trial[i].count == c.per_trial[i].count);
    CHECK(a.per_trial[i].bits == c.per_trial[i].bits);
    CHECK(a.per_trial[i].trial == static_cast<int>(i));
  }
  CHECK(a.mean_bits == c.mean_bits);
  CHECK(a.std_bits == c.std_bits);
}

TEST_CASE("empirical_capacity sizes and statistics are coherent") {
  const auto kappa = NoiseThreshold::parse("0");

  // chips = round(users/beta) with ties up: 10/4 = 2.5 -> 3.
  const auto tied = empirical_capacity(10, 4.0, kappa, 2, 1);
  CHECK(tied.chips == 3);
  CHECK(tied.realized_beta == 10.0 / 3.0);
  CHECK(tied.requested_beta == 4.0);

  const auto r = empirical_capacity(12, 0.5, kappa, 5, 3);
  CHECK(r.chips == 24);
  CHECK(r.trials == 5);
  CHECK(r.zero_trials == 0);
  double mean = 0.0;
  for (const auto& t : r.per_trial) {
    CHECK(t.count > 0);
    CHECK(t.bits == std::log2(static_cast<double>(t.count)) / 12.0);
    CHECK(t.bits <= 1.0);
    mean += t.bits;
  }
  mean /= 5.0;
  CHECK(std::fabs(mean - r.mean_bits) <= 1e-15);
  double ss = 0.0;
  for (const auto& t : r.per_trial) ss += (t.bits - mean) * (t.bits - mean);
  CHECK(std::fabs(r.std_bits - std::sqrt(ss / 4.0)) <= 1e-15);

  CHECK_THROWS_AS(empirical_capacity(0, 0.5, kappa, 3, 1),
                  std::domain_error);
  CHECK_THROWS_AS(empirical_capacity(8, 0.5, kappa, 0, 1),
                  std::domain_error);
  CHECK_THROWS_AS(empirical_capacity(8, 0.0005, kappa, 3, 1),
                  std::out_of_range);
}

TEST_CASE("empirical_capacity reports fully degenerate ensembles") {
  // kappa = 2 demands x_k f_k > chips, impossible since |f_k| <= chips
  // with one interferer; every trial counts zero.
  try {
    empirical_capacity(2, 0.5, NoiseThreshold::parse("2"), 3, 9);
    FAIL("expected DegenerateStatisticsError");
  } catch (const DegenerateStatisticsError& e) {
    CHECK(e.stats.zero_trials == 3);
    CHECK(e.stats.trials == 3);
    REQUIRE(e.stats.per_trial.size() == 3);
    for (const auto& t : e.stats.per_trial) {
      CHECK(t.count == 0);
      CHECK(t.bits == 0.0);
    }
    CHECK(e.stats.mean_bits == 0.0);
    CHECK(e.stats.std_bits == 0.0);
  }
}

TEST_CASE("per-user capacity self-averages as systems grow") {
  const auto kappa = NoiseThreshold::parse("0");
  const auto small = empirical_capacity(16, 0.5, kappa, 50, 0);
  const auto large = empirical_capacity(24, 0.5, kappa, 50, 0);
  CHECK(large.std_bits < small.std_bits);
  CHECK(large.std_bits > 0.0);
}
