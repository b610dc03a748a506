#include "shapim/rng.hpp"

namespace shapim::rng {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive(std::uint64_t base, Purpose purpose, std::uint64_t a,
                     std::uint64_t b) {
  std::uint64_t h = mix(base);
  h = mix(h ^ static_cast<std::uint64_t>(purpose));
  h = mix(h ^ a);
  h = mix(h ^ b);
  return h;
}

}  // namespace shapim::rng
