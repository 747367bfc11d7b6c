#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

namespace rankdiff {

struct SampleTag {
  std::string sampler;
  std::uint64_t seed = 0;
  long long n = 0;       // particle count of the originating law, if any
  std::size_t count = 0;
};

// A seeded, tagged collection of k-dimensional draws (one row per draw).
struct EmpiricalSample {
  int dimension = 1;
  Eigen::MatrixXd draws;
  SampleTag tag;

  std::size_t count() const { return static_cast<std::size_t>(draws.rows()); }
  Eigen::VectorXd column(int j) const { return draws.col(j); }
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent generator for (master seed, stream index) pairs.
inline std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
  std::uint64_t a = splitmix64(s), b = splitmix64(s), c = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return std::mt19937_64(seq);
}

// Uniform draw strictly inside (0,1).
inline double uniform_open01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

// Exponential with the given rate, strictly positive.
inline double exponential(std::mt19937_64& rng, double rate) {
  return -std::log(uniform_open01(rng)) / rate;
}

}  // namespace rankdiff
