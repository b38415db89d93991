#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <unordered_map>

namespace tnli {

// 64-bit FNV-1a; stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view text);

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of the named stream under `master_seed`. Streams with different names
// are independent, so per-template generation can run in any order.
std::uint64_t stream_seed(std::uint64_t master_seed, std::string_view stream_name);

// Toolkit PRNG: std::mt19937_64 (output sequence fixed by the standard) with
// a portable unbiased bounded draw. std::uniform_int_distribution is avoided
// because its output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

// Lazily materialized Fisher-Yates shuffle of [0, n): the i-th call to next()
// returns the i-th element of the shuffled sequence. Memory grows with the
// number of draws, not with n.
class LazyShuffle {
 public:
  LazyShuffle(std::uint64_t n, std::uint64_t seed) : n_(n), rng_(seed) {}

  bool exhausted() const { return drawn_ >= n_; }
  std::uint64_t drawn() const { return drawn_; }
  std::uint64_t size() const { return n_; }

  // Next distinct index. After exhaustion, draws uniformly with replacement.
  std::uint64_t next();

 private:
  std::uint64_t value_at(std::uint64_t position) const;

  std::uint64_t n_;
  std::uint64_t drawn_ = 0;
  Rng rng_;
  std::unordered_map<std::uint64_t, std::uint64_t> displaced_;
};

}  // namespace tnli
