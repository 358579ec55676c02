#include "dynstore/chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace dynstore {

namespace {

constexpr int kMaxExactN = 8;

void check_exact_n(int n) {
  if (n < 2 || n > kMaxExactN) {
    throw std::invalid_argument("exact chain computations support 2 <= n <= 8");
  }
}

// Successor ranks per (state rank, failed node). Depends only on n.
struct TransitionTable {
  int n = 0;
  std::vector<std::uint32_t> next; // [rank * n + (v-1)]
};

std::shared_ptr<const TransitionTable> transition_table(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const TransitionTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto table = std::make_shared<TransitionTable>();
  table->n = n;
  const std::uint64_t states = factorial(n);
  table->next.resize(states * static_cast<std::uint64_t>(n));
  for (std::uint64_t rank = 0; rank < states; ++rank) {
    const Permutation pi = permutation_unrank(n, rank);
    for (NodeId v = 1; v <= n; ++v) {
      table->next[rank * n + static_cast<std::uint64_t>(v - 1)] =
          static_cast<std::uint32_t>(permutation_rank(apply_failure(pi, v)));
    }
  }
  cache.emplace(n, table);
  return table;
}

template <typename T>
std::vector<T> model_probs(const NetworkConfig& config);

template <>
std::vector<Rational> model_probs<Rational>(const NetworkConfig& config) {
  return config.failure_probs();
}

template <>
std::vector<double> model_probs<double>(const NetworkConfig& config) {
  std::vector<double> probs;
  for (const auto& p : config.failure_probs()) probs.push_back(to_double(p));
  return probs;
}

} // namespace

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t permutation_rank(const Permutation& pi) {
  const int n = pi.size();
  std::uint64_t rank = 0;
  for (int i = 1; i <= n; ++i) {
    int smaller_right = 0;
    for (int j = i + 1; j <= n; ++j) {
      if (pi.at(j) < pi.at(i)) ++smaller_right;
    }
    rank += static_cast<std::uint64_t>(smaller_right) * factorial(n - i);
  }
  return rank;
}

Permutation permutation_unrank(int n, std::uint64_t rank) {
  std::vector<NodeId> pool(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) pool[static_cast<size_t>(i)] = i + 1;
  std::vector<NodeId> order;
  order.reserve(static_cast<size_t>(n));
  for (int i = n; i >= 1; --i) {
    const std::uint64_t f = factorial(i - 1);
    const std::uint64_t digit = rank / f;
    rank %= f;
    order.push_back(pool[static_cast<size_t>(digit)]);
    pool.erase(pool.begin() + static_cast<long>(digit));
  }
  return Permutation(std::move(order));
}

template <typename T>
ChainDistribution<T> point_mass_identity(int n) {
  check_exact_n(n);
  ChainDistribution<T> dist;
  dist.n = n;
  dist.probs.assign(factorial(n), T(0));
  dist.probs[permutation_rank(Permutation::identity(n))] = T(1);
  return dist;
}

template <typename T>
ChainDistribution<T> uniform_chain_distribution(int n) {
  check_exact_n(n);
  ChainDistribution<T> dist;
  dist.n = n;
  const std::uint64_t states = factorial(n);
  if constexpr (std::is_same_v<T, Rational>) {
    dist.probs.assign(states, Rational(1, states));
  } else {
    dist.probs.assign(states, 1.0 / static_cast<double>(states));
  }
  return dist;
}

template <typename T>
ChainDistribution<T> transition_step(const ChainDistribution<T>& dist,
                                     const NetworkConfig& config) {
  check_exact_n(dist.n);
  if (config.n() != dist.n) throw std::invalid_argument("distribution/config size mismatch");
  const auto table = transition_table(dist.n);
  const auto probs = model_probs<T>(config);
  ChainDistribution<T> out;
  out.n = dist.n;
  out.probs.assign(dist.probs.size(), T(0));
  const int n = dist.n;
  for (std::uint64_t rank = 0; rank < dist.probs.size(); ++rank) {
    const T& mass = dist.probs[rank];
    if (mass == T(0)) continue;
    for (int v = 1; v <= n; ++v) {
      out.probs[table->next[rank * static_cast<std::uint64_t>(n) +
                            static_cast<std::uint64_t>(v - 1)]] +=
          mass * probs[static_cast<size_t>(v - 1)];
    }
  }
  return out;
}

template <typename T>
ChainDistribution<T> evolve(const ChainDistribution<T>& dist, const NetworkConfig& config,
                            long steps) {
  ChainDistribution<T> current = dist;
  for (long i = 0; i < steps; ++i) current = transition_step(current, config);
  return current;
}

template <typename T>
T tv_to_uniform(const ChainDistribution<T>& dist) {
  const std::uint64_t states = factorial(dist.n);
  T uniform;
  if constexpr (std::is_same_v<T, Rational>) {
    uniform = Rational(1, states);
  } else {
    uniform = 1.0 / static_cast<double>(states);
  }
  T total(0);
  for (const T& p : dist.probs) {
    T diff = p - uniform;
    if (diff < T(0)) diff = -diff;
    total += diff;
  }
  return total / 2;
}

template struct ChainDistribution<double>;
template struct ChainDistribution<Rational>;
template ChainDistribution<double> point_mass_identity<double>(int);
template ChainDistribution<Rational> point_mass_identity<Rational>(int);
template ChainDistribution<double> uniform_chain_distribution<double>(int);
template ChainDistribution<Rational> uniform_chain_distribution<Rational>(int);
template ChainDistribution<double> transition_step<double>(const ChainDistribution<double>&,
                                                           const NetworkConfig&);
template ChainDistribution<Rational> transition_step<Rational>(const ChainDistribution<Rational>&,
                                                               const NetworkConfig&);
template ChainDistribution<double> evolve<double>(const ChainDistribution<double>&,
                                                  const NetworkConfig&, long);
template ChainDistribution<Rational> evolve<Rational>(const ChainDistribution<Rational>&,
                                                      const NetworkConfig&, long);
template double tv_to_uniform<double>(const ChainDistribution<double>&);
template Rational tv_to_uniform<Rational>(const ChainDistribution<Rational>&);

MixingCheck mixing_check(int n, int c) {
  check_exact_n(n);
  if (c < 0) throw std::invalid_argument("c must be nonnegative");

  MixingCheck check;
  check.n = n;
  check.c = c;
  check.t = static_cast<long>(std::ceil(n * std::log(n) + static_cast<double>(c) * n));

  // Uniform failures over n nodes; the config below is only a carrier for
  // the kernel probabilities.
  NetworkConfig cfg;
  cfg.n1 = 1;
  cfg.n2 = n - 1;
  cfg.beta1 = cfg.beta2 = 1;
  cfg.k_prime = 2;

  auto dist = point_mass_identity<Rational>(n);
  dist = evolve(dist, cfg, check.t);
  check.tv = tv_to_uniform(dist);

  // e^-c >= lb^c for lb a rational lower bound of e^-1, so certifying
  // against lb^c is sound.
  const Rational inv_e_lb(BigInt("367879441171442321"), BigInt("1000000000000000000"));
  Rational bound = 1;
  for (int i = 0; i < c; ++i) bound *= inv_e_lb;
  check.bound = bound;
  check.certified = check.tv <= bound;
  return check;
}

bool mixing_certificate(int n, int c) { return mixing_check(n, c).certified; }

Rational gen_binom(const Rational& r, int k) {
  if (k < 0) throw std::invalid_argument("gen_binom needs k >= 0");
  Rational result = 1;
  for (int j = 0; j < k; ++j) {
    result *= (r - j);
    result /= (j + 1);
  }
  return result;
}

BlockDistribution stationary_blocks(const NetworkConfig& config,
                                    std::vector<std::string>* warnings) {
  config.require_valid();
  if (config.n1 != 1) throw std::invalid_argument("block distribution needs n1 = 1");
  const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model);
  if (!tc) throw std::invalid_argument("block distribution needs a two-class failure model");
  if (warnings && tc->q > tc->p) {
    warnings->push_back("q > p; stationarity holds regardless of the usual q <= p hypothesis");
  }

  const int n = config.n();
  const Rational inv_p = 1 / tc->p;
  const Rational base = (1 - tc->q) / gen_binom(inv_p - 1, n - 2);
  BlockDistribution nu;
  nu.block_probs.reserve(static_cast<size_t>(n));
  for (int i = 1; i <= n; ++i) {
    nu.block_probs.push_back(base * gen_binom(inv_p - n - 1 + i, i - 1));
  }
  return nu;
}

Rational verify_stationary(const BlockDistribution& nu, const NetworkConfig& config) {
  config.require_valid();
  const auto* tc = std::get_if<TwoClassFailure>(&config.failure_model);
  if (config.n1 != 1 || !tc) {
    throw std::invalid_argument("stationarity check needs n1 = 1 and a two-class model");
  }
  const int n = config.n();
  if (static_cast<int>(nu.block_probs.size()) != n) {
    throw std::invalid_argument("block vector size mismatch");
  }

  // Block kernel: from block i the high node moves to block i-1 with
  // probability (i-1)p, stays with probability (n-i)p, and jumps to block n
  // with probability q.
  Rational total_mass = 0;
  for (const auto& m : nu.block_probs) total_mass += m;

  Rational residual = 0;
  for (int i = 1; i <= n; ++i) {
    Rational next_mass = 0;
    if (i < n) {
      next_mass += nu.block_probs[static_cast<size_t>(i)] * Rational(i) * tc->p;
      next_mass += nu.block_probs[static_cast<size_t>(i - 1)] * Rational(n - i) * tc->p;
    } else {
      next_mass = tc->q * total_mass;
    }
    Rational diff = next_mass - nu.block_probs[static_cast<size_t>(i - 1)];
    if (diff < 0) diff = -diff;
    if (diff > residual) residual = diff;
  }
  return residual;
}

FailureSampler::FailureSampler(const NetworkConfig& config, std::uint64_t seed) : rng_(seed) {
  config.require_valid();
  const auto probs = config.failure_probs();
  BigInt denom = 1;
  for (const auto& p : probs) denom = lcm(denom, denominator(p));
  if (denom > BigInt(UINT64_C(1) << 62)) {
    throw std::invalid_argument("failure probabilities have an impractically large denominator");
  }
  denominator_ = denom.convert_to<std::uint64_t>();
  std::uint64_t cumulative = 0;
  for (const auto& p : probs) {
    const BigInt numer = numerator(p) * (denom / denominator(p));
    cumulative += numer.convert_to<std::uint64_t>();
    cumulative_.push_back(cumulative);
  }
  if (cumulative_.back() != denominator_) {
    throw std::invalid_argument("failure probabilities do not sum to 1");
  }
}

NodeId FailureSampler::next() {
  const std::uint64_t draw = uniform_below(rng_, denominator_);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), draw);
  return static_cast<NodeId>(it - cumulative_.begin()) + 1;
}

std::vector<NodeId> sample_failures(const NetworkConfig& config, long count, std::uint64_t seed) {
  FailureSampler sampler(config, seed);
  std::vector<NodeId> failures;
  failures.reserve(static_cast<size_t>(count));
  for (long i = 0; i < count; ++i) failures.push_back(sampler.next());
  return failures;
}

long covering_time(const std::vector<Rational>& probs, std::mt19937_64& rng) {
  BigInt denom = 1;
  for (const auto& p : probs) denom = lcm(denom, denominator(p));
  const std::uint64_t d = denom.convert_to<std::uint64_t>();
  std::vector<std::uint64_t> cumulative;
  std::uint64_t acc = 0;
  for (const auto& p : probs) {
    acc += (numerator(p) * (denom / denominator(p))).convert_to<std::uint64_t>();
    cumulative.push_back(acc);
  }
  std::vector<char> seen(probs.size(), 0);
  size_t missing = probs.size();
  long t = 0;
  while (missing > 0) {
    const std::uint64_t draw = uniform_below(rng, d);
    const size_t idx =
        static_cast<size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), draw) -
                            cumulative.begin());
    ++t;
    if (!seen[idx]) {
      seen[idx] = 1;
      --missing;
    }
  }
  return t;
}

long sample_covering_time(const NetworkConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return covering_time(config.failure_probs(), rng);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
  // splitmix64 step over root + golden-ratio stride.
  std::uint64_t z = root + (index + 1) * UINT64_C(0x9E3779B97F4A7C15);
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below needs a positive bound");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

} // namespace dynstore
