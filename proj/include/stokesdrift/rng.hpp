#pragma once

#include <cstdint>
#include <random>

namespace stokesdrift {

using RngEngine = std::mt19937_64;

/// Random stream for one trajectory of an ensemble.
///
/// The engine is seeded from (master_seed, traj_index) through std::seed_seq,
/// so each trajectory's stream is fixed by those two numbers alone and the
/// ensemble is reproducible whatever order the trajectories are run in.
inline RngEngine rng_stream(std::uint64_t master_seed, std::uint64_t traj_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(traj_index),
                      static_cast<std::uint32_t>(traj_index >> 32),
                      0x5354'4b53u};  // domain tag, keeps streams apart from ad-hoc seeding
    return RngEngine(seq);
}

}  // namespace stokesdrift
