#include "tnli/rng.hpp"

#include <stdexcept>

namespace tnli {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::string_view stream_name) {
  return mix64(mix64(master_seed) ^ fnv1a64(stream_name));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  // Reject the low values that would bias the modulo.
  const std::uint64_t threshold = (0 - bound) % bound;
  while (true) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t LazyShuffle::value_at(std::uint64_t position) const {
  if (auto it = displaced_.find(position); it != displaced_.end()) return it->second;
  return position;
}

std::uint64_t LazyShuffle::next() {
  if (n_ == 0) throw std::logic_error("LazyShuffle over an empty range");
  if (exhausted()) {
    ++drawn_;
    return rng_.below(n_);
  }
  const std::uint64_t i = drawn_++;
  const std::uint64_t j = i + rng_.below(n_ - i);
  const std::uint64_t picked = value_at(j);
  displaced_[j] = value_at(i);
  displaced_.erase(i);
  return picked;
}

}  // namespace tnli
