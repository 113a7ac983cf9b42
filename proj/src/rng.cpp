#include "ctrwlim/rng.hpp"

#include <cmath>
#include <numbers>

#include "ctrwlim/errors.hpp"

namespace ctrwlim {

namespace detail {
void throw_parameter(const std::string& what) { throw ParameterError(what); }
}  // namespace detail

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}
}  // namespace

Engine::Engine(SeedSpec seed, Substream sub) {
  // Mix the three key words through separate splitmix rounds so that nearby
  // stream ids do not give correlated initial states.
  std::uint64_t h = seed.master_seed;
  std::uint64_t k = splitmix64(h);
  h = k ^ seed.stream_id;
  k = splitmix64(h);
  h = k ^ static_cast<std::uint64_t>(sub);
  for (auto& word : s_) word = splitmix64(h);
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Engine::next_u64() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Engine::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Engine::uniform_open() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Engine::exponential() noexcept { return -std::log(uniform_open()); }

double Engine::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace ctrwlim
