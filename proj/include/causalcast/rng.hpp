#ifndef CAUSALCAST_RNG_HPP
#define CAUSALCAST_RNG_HPP

#include <cstdint>

namespace causalcast {

// Seed-deterministic generator with explicit stream splitting.
//
// Rng(seed, stream) yields the same sequence on every platform and worker
// count: parallel code hands each unit of work (a Monte Carlo draw, a path)
// its own stream id instead of sharing generator state. The core is
// xoshiro256++ seeded through splitmix64 from a hash of (seed, stream);
// all variates use fixed algorithms (Box-Muller normals, Marsaglia-Tsang
// gammas) rather than standard-library distributions, whose output is
// implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // Uniform on (0, 1), endpoints excluded.
    double uniform();

    double normal();                    // standard normal
    double gamma(double shape);         // unit scale, shape > 0
    double chi_squared(double dof);     // dof > 0

  private:
    std::uint64_t s_[4];
};

// Stable 64-bit mix of a base seed and a purpose tag, for handing each
// pipeline stage (per-model sampling, mixing, permutations) its own
// independent seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag);

}  // namespace causalcast

#endif
