#pragma once

#include <cstdint>
#include <random>

namespace proclab {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of the dedicated stream for item `index` under `master`. Streams are
// order independent, so parallel and serial generation agree bit for bit.
constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t a,
                                    std::uint64_t b) noexcept {
  return stream_seed(stream_seed(master, a), b);
}

inline Engine make_stream(std::uint64_t master, std::uint64_t index) {
  return Engine(stream_seed(master, index));
}

inline Engine make_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return Engine(stream_seed(master, a, b));
}

// Degree of parallelism for loops whose results are scheduling independent.
struct Parallelism {
  int threads = 1;
};

}  // namespace proclab
