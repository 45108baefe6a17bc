#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace mvtest {

// Deterministic random stream: xoshiro256++ state seeded through the
// splitmix64 finalizer, plus the cached second deviate of the polar method so
// that normal draws are a pure function of the state. Copyable by value; a
// copy replays the identical sequence.
struct RngState {
  std::uint64_t seed = 0;            // seed material this state was derived from
  std::array<std::uint64_t, 4> s{};  // xoshiro256++ words
  std::uint64_t position = 0;        // uniform outputs drawn so far
  double spare = 0.0;                // pending polar-method deviate
  bool has_spare = false;
};

namespace detail {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

inline RngState state_from(std::uint64_t seed) {
  RngState st;
  st.seed = seed;
  std::uint64_t x = seed;
  for (auto& w : st.s) w = mix64(x += kGolden);
  // the all-zero state is the one fixed point xoshiro can't leave; mix64 of
  // four distinct inputs cannot produce it short of a 256-bit coincidence,
  // but the guard costs nothing
  if ((st.s[0] | st.s[1] | st.s[2] | st.s[3]) == 0) st.s[0] = kGolden;
  return st;
}

}  // namespace detail

inline RngState rng_new(std::uint64_t master_seed) { return detail::state_from(master_seed); }

// Independent stream for one (scenario, replicate) cell, derived from the
// master's seed material only — the master's current position is irrelevant,
// so replicates can be generated in any order or in parallel.
inline RngState rng_substream(const RngState& master, std::uint64_t scenario_id,
                              std::uint64_t replicate_index) {
  using detail::kGolden;
  using detail::mix64;
  std::uint64_t h = mix64(master.seed + kGolden);
  h = mix64(h + kGolden + scenario_id);
  h = mix64(h + kGolden + replicate_index);
  return detail::state_from(h);
}

inline std::uint64_t next_u64(RngState& st) {
  auto& s = st.s;
  const std::uint64_t out = detail::rotl(s[0] + s[3], 23) + s[0];
  const std::uint64_t t = s[1] << 17;
  s[2] ^= s[0];
  s[3] ^= s[1];
  s[1] ^= s[2];
  s[0] ^= s[3];
  s[2] ^= t;
  s[3] = detail::rotl(s[3], 45);
  ++st.position;
  return out;
}

// Uniform on [0, 1) using the top 53 bits.
inline double uniform01(RngState& st) {
  return static_cast<double>(next_u64(st) >> 11) * 0x1.0p-53;
}

// Standard normal deviate by the Marsaglia polar method. Each accepted pair
// yields two deviates; the second is cached in the state and returned by the
// next call without consuming uniforms.
inline double std_normal(RngState& st) {
  if (st.has_spare) {
    st.has_spare = false;
    return st.spare;
  }
  for (;;) {
    const double u = 2.0 * uniform01(st) - 1.0;
    const double v = 2.0 * uniform01(st) - 1.0;
    const double m = u * u + v * v;
    if (m > 0.0 && m < 1.0) {
      const double scale = std::sqrt(-2.0 * std::log(m) / m);
      st.spare = v * scale;
      st.has_spare = true;
      return u * scale;
    }
  }
}

}  // namespace mvtest
