#pragma once

#include <cstdint>

#include "collisim/linalg.hpp"

namespace collisim {

/// Splittable counter-style generator: trajectory k owns stream_id = k, so
/// ensembles are reproducible regardless of how trajectories are scheduled
/// across threads. The core is splitmix64; Gaussians use the Marsaglia polar
/// method (fixed here for cross-platform reproducibility, unlike
/// std::normal_distribution).
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64();
    double uniform();  // [0, 1)
    double normal();   // standard normal

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Haar-distributed unitary on U(dim): Ginibre matrix, QR, then column j
/// multiplied by conj(R_jj)/|R_jj| (plain QR is biased).
Matrix haar_unitary(int dim, RngStream& rng);

}  // namespace collisim
