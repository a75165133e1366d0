#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mimo_ee {

//! Labels separating the independent random substreams of one trial.
enum class Substream : std::uint64_t
{
  small_scale = 1,
  pathloss = 2,
  gamma_scores = 3,
  user = 100
};

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

} // namespace detail

//! Deterministic random stream keyed by (master seed, trial index, substream).
//!
//! The state is a pure function of the key, so a trial draws the same numbers
//! regardless of which worker runs it or in what order.
class RandomStream
{
public:
  RandomStream(std::uint64_t seed, std::uint64_t trial, Substream label)
  {
    std::uint64_t k = detail::splitmix64(seed);
    k = detail::splitmix64(k ^ trial);
    k = detail::splitmix64(k ^ static_cast<std::uint64_t>(label));
    std::seed_seq seq{ static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32),
                       static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(label) };
    engine_.seed(seq);
  }

  double normal() { return normal_(engine_); }

  //! Uniform on [0, 1).
  double uniform() { return std::generate_canonical<double, 53>(engine_); }

  //! Circularly-symmetric complex Gaussian with variance `component_var` per real part.
  std::complex<double> complex_normal(double component_var)
  {
    const double s = std::sqrt(component_var);
    const double re = normal();
    const double im = normal();
    return { s * re, s * im };
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{ 0.0, 1.0 };
};

} // namespace mimo_ee
