#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Exact enumeration of stable codewords for finite random-signature
// instances: a sign vector x is a codeword when every user's matched-filter
// output clears the margin, x_k f_k > chips * (kappa - 1), with
// f_k = sum_{i != k} c_ki x_i and integer correlations c.  Thresholds are
// carried as exact decimal fractions so boundary states are classified by
// integer arithmetic, never by floating-point rounding.

namespace cdmacap {

inline constexpr int kMaxUsers = 32;
inline constexpr int kWarnUsers = 26;  // > 2^26 states: minutes, warn

// SplitMix64 (Steele, Lea, Flood).  Fixed as the reproducibility contract:
// equal seeds give bit-identical chips and trial seeds on every platform.
struct SplitMix64 {
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  uint64_t state;
};

// Seed for 0-based trial t: the (t+1)-th output of a SplitMix64 stream
// seeded with master_seed.
uint64_t trial_seed(uint64_t master_seed, int trial);

// users x chips matrix of ±1 entries, row-major.
struct SpreadingMatrix {
  int users = 0;
  int chips = 0;
  uint64_t seed = 0;
  std::vector<int8_t> entries;

  int8_t at(int user, int chip) const {
    return entries[static_cast<size_t>(user) * chips + chip];
  }
};

// Fair ±1 entries drawn from SplitMix64 words, one bit per entry consumed
// LSB-first, entries filled row-major, bit b -> 2b - 1.
SpreadingMatrix sample_spreading(int users, int chips, uint64_t seed);

// c[k][i] = sum_mu s_k^mu s_i^mu; symmetric, |c| <= chips, c[k][k] = chips,
// every entry has the parity of chips.
struct IntegerCorrelations {
  int users = 0;
  int chips = 0;
  std::vector<int32_t> c;

  int32_t at(int k, int i) const {
    return c[static_cast<size_t>(k) * users + i];
  }
};

IntegerCorrelations correlations(const SpreadingMatrix& s);

// Exact decimal margin kappa = numer/denom with denom a power of ten
// (at most 12 fractional digits).
class NoiseThreshold {
 public:
  NoiseThreshold() = default;
  NoiseThreshold(int64_t numer, int64_t denom);

  // Accepts plain decimal literals like "0", "1", "0.9", "1.05".
  static NoiseThreshold parse(const std::string& text);

  int64_t numer() const { return numer_; }
  int64_t denom() const { return denom_; }
  double value() const { return static_cast<double>(numer_) / denom_; }

 private:
  int64_t numer_ = 0;
  int64_t denom_ = 1;
};

// Smallest integer m with m > chips * (kappa - 1); the strict margin
// condition is then the integer comparison x_k f_k >= m.
int64_t min_valid_field(int chips, const NoiseThreshold& kappa);

struct CodewordState {
  std::vector<int8_t> bits;     // ±1 per user
  std::vector<int64_t> fields;  // self-excluded f_k
};

// State at the given Gray-walk index (bit j of gray(index) -> user j),
// fields filled by direct summation.
CodewordState state_at(const IntegerCorrelations& c, uint64_t index);

bool is_valid(const CodewordState& state, const IntegerCorrelations& c,
              const NoiseThreshold& kappa);

struct EnumerationResult {
  uint64_t count = 0;
  int users = 0;
  double kappa = 0.0;
  double seconds = 0.0;
};

// Exact count over all 2^users states.  workers > 1 splits the Gray walk
// into contiguous index ranges; the total is identical for every worker
// count.  users > 32 is rejected; users > 26 prints a runtime warning.
EnumerationResult count_codewords(const IntegerCorrelations& c,
                                  const NoiseThreshold& kappa,
                                  int workers = 1);

struct TrialRecord {
  int trial = 0;
  uint64_t seed = 0;
  uint64_t count = 0;
  double bits = 0.0;  // log2(count)/users, 0 when count == 0
};

struct EnsembleStats {
  int users = 0;
  int chips = 0;
  double requested_beta = 0.0;
  double realized_beta = 0.0;
  double kappa = 0.0;
  int trials = 0;
  int zero_trials = 0;
  double mean_bits = 0.0;  // over trials with count > 0
  double std_bits = 0.0;   // sample std (n-1); 0 with fewer than 2 kept
  std::vector<TrialRecord> per_trial;
};

// Every sampled instance produced zero codewords, so the capacity
// statistics are undefined.  Carries the per-trial table so callers can
// still report what was measured.
class DegenerateStatisticsError : public std::runtime_error {
 public:
  explicit DegenerateStatisticsError(EnsembleStats partial);
  EnsembleStats stats;
};

// Ensemble estimate at chips = round(users/beta), ties rounding up.
// Trial t uses trial_seed(master_seed, t); workers parallelize across
// trials without affecting any per-trial result.
EnsembleStats empirical_capacity(int users, double beta,
                                 const NoiseThreshold& kappa, int trials,
                                 uint64_t master_seed, int workers = 1);

}  // namespace cdmacap
