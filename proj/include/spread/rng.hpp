#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spread {

namespace detail {

// splitmix64 finalizer; good avalanche, cheap, and constexpr.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

// Hierarchical deterministic random stream. A handle is a pure value:
// deriving a child with the same label always yields the same stream, and
// siblings with distinct labels are decorrelated. Draws are addressable by
// counter, so consumers that index draws by (step, arc) get results that do
// not depend on thread count or iteration order.
class RngHandle {
 public:
  explicit RngHandle(std::uint64_t seed)
      : state_(detail::mix64(detail::mix64(seed) ^ 0x706172656e740aULL)) {}

  RngHandle derive(std::string_view label) const {
    return RngHandle(FromState{}, detail::mix64(state_ ^ detail::fnv1a(label)));
  }

  RngHandle derive(std::uint64_t label) const {
    return RngHandle(FromState{},
                     detail::mix64(state_ ^ detail::mix64(label ^ 0x6368696c64ULL)));
  }

  // Stateful engine for sequential sampling (generators, shuffles).
  std::mt19937_64 engine() const { return std::mt19937_64{state_}; }

  // Stateless uniform in [0,1) addressed by counter.
  double uniform_at(std::uint64_t counter) const {
    const std::uint64_t z = detail::mix64(state_ ^ detail::mix64(counter));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  // Bernoulli(p) coin addressed by counter. p >= 1 never consults the
  // stream (always true), p <= 0 likewise (always false).
  bool coin_at(std::uint64_t counter, double p) const {
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return uniform_at(counter) < p;
  }

  std::uint64_t state() const { return state_; }

  friend bool operator==(const RngHandle& a, const RngHandle& b) {
    return a.state_ == b.state_;
  }

 private:
  struct FromState {};
  RngHandle(FromState, std::uint64_t s) : state_(s) {}

  std::uint64_t state_;
};

}  // namespace spread
