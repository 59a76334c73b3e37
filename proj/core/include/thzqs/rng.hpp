#ifndef THZQS_RNG_HPP
#define THZQS_RNG_HPP

#include <cstdint>
#include <random>

namespace thzqs {

// splitmix64 finalizer; used to derive independent substream seeds from
// (seed, tag, point, repeat) tuples so that sampling order never matters.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a,
                                std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ a);
  k = splitmix64(k ^ (b + 0x632be59bd9b4e019ULL));
  k = splitmix64(k ^ (c + 0x9e3779b97f4a7c15ULL));
  return k;
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  return std::mt19937_64(stream_key(seed, a, b, c));
}

}  // namespace thzqs

#endif
