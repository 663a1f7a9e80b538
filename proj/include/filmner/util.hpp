#ifndef FILMNER_UTIL_HPP
#define FILMNER_UTIL_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace filmner {

// 64-bit FNV-1a, used for config digests embedded in output files.
inline std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v);

// splitmix64 step; mixes a base seed with a stream index so per-item RNG
// streams are independent of processing order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string join_tokens(const std::vector<std::string>& tokens,
                        std::size_t begin, std::size_t end);
std::string join_tokens(const std::vector<std::string>& tokens);

// Runs fn(i) for i in [0, n). Each index writes only its own result slot,
// so the output is identical at any worker count.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn);

}  // namespace filmner

#endif
