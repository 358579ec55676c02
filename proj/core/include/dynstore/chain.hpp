#pragma once

#include "dynstore/config.hpp"
#include "dynstore/permutation.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace dynstore {

// --- Exact distribution evolution over all n! states (n <= 8) -------------

template <typename T>
struct ChainDistribution {
  int n = 0;
  std::vector<T> probs; // indexed by lexicographic permutation rank
};

std::uint64_t factorial(int n);
std::uint64_t permutation_rank(const Permutation& pi);
Permutation permutation_unrank(int n, std::uint64_t rank);

template <typename T>
ChainDistribution<T> point_mass_identity(int n);
template <typename T>
ChainDistribution<T> uniform_chain_distribution(int n);

// One application of the failure kernel: node v fails with its model
// probability and moves to the last position.
template <typename T>
ChainDistribution<T> transition_step(const ChainDistribution<T>& dist,
                                     const NetworkConfig& config);
template <typename T>
ChainDistribution<T> evolve(const ChainDistribution<T>& dist, const NetworkConfig& config,
                            long steps);

template <typename T>
T tv_to_uniform(const ChainDistribution<T>& dist);

struct MixingCheck {
  int n = 0;
  int c = 0;
  long t = 0;           // ceil(n ln n + c n)
  Rational tv;          // exact TV distance from uniform after t steps from id
  Rational bound;       // rational lower bound of e^-c (sound direction)
  bool certified = false;
};

// Exact check that the uniform-failure chain started at the identity is
// within e^-c of uniform after ceil(n ln n + c n) steps. 2 <= n <= 8.
MixingCheck mixing_check(int n, int c);
bool mixing_certificate(int n, int c);

// --- Stationary distribution for one high node, two-class failures --------

// Generalized binomial coefficient r(r-1)...(r-k+1)/k!, with value 1 at k=0.
Rational gen_binom(const Rational& r, int k);

// Block i = permutations placing the unique high node at position i.
struct BlockDistribution {
  std::vector<Rational> block_probs; // index i-1 = mass of block i
};

// Stationary block masses: (1-q) * binom(1/p-1, n-2)^-1 * binom(1/p-n-1+i, i-1).
// Requires n1 = 1 and a two-class model. Appends a warning when q > p (the
// stationarity identity holds regardless).
BlockDistribution stationary_blocks(const NetworkConfig& config,
                                    std::vector<std::string>* warnings = nullptr);

// Max block residual |(nu K)_i - nu_i| under the exact block kernel;
// zero iff nu is stationary.
Rational verify_stationary(const BlockDistribution& nu, const NetworkConfig& config);

// --- Sampling --------------------------------------------------------------

// Draws i.i.d. failures with the exact model probabilities (integer
// thresholds over a common denominator; no floating-point rounding).
class FailureSampler {
 public:
  FailureSampler(const NetworkConfig& config, std::uint64_t seed);
  NodeId next();

 private:
  std::mt19937_64 rng_;
  std::uint64_t denominator_;
  std::vector<std::uint64_t> cumulative_; // cumulative numerators, size n
};

std::vector<NodeId> sample_failures(const NetworkConfig& config, long count, std::uint64_t seed);

// First time every node has failed at least once.
long sample_covering_time(const NetworkConfig& config, std::uint64_t seed);
// Same, for an explicit positive probability vector (sums to 1).
long covering_time(const std::vector<Rational>& probs, std::mt19937_64& rng);

// Deterministic per-replica seed derivation.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

// Unbiased uniform draw from [0, bound).
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

} // namespace dynstore
