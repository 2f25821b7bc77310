#include "sibuya/rng.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace sibuya {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), key_(mix64(mix64(seed + kGolden) ^ (stream * 0xd1b54a32d192ed03ULL + 1))) {}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t c = counter_++;
  return mix64(key_ + (c + 1) * kGolden);
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) {
  // Lemire's multiply-shift with rejection; unbiased.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::exponential() { return -std::log(uniform_pos()); }

RngStream RngStream::child(std::uint64_t index) const {
  return RngStream(seed_, mix64(stream_ ^ kGolden) + index);
}

std::uint64_t default_seed(std::uint64_t fallback) {
  const char* env = std::getenv("SIBUYA_SEED");
  if (env == nullptr || *env == '\0') return fallback;
  try {
    std::size_t pos = 0;
    const auto v = std::stoull(env, &pos, 0);
    if (pos != std::string(env).size()) return fallback;
    return v;
  } catch (const std::exception&) {
    return fallback;
  }
}

}  // namespace sibuya
