#include "collisim/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace collisim {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : state_(mix64(seed + 0x9E3779B97F4A7C15ULL) ^
             mix64(stream_id * 0xDA942042E4DD58B5ULL + 0xA0761D6478BD642FULL)) {}

std::uint64_t RngStream::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    return mix64(z);
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
}

Matrix haar_unitary(int dim, RngStream& rng) {
    if (dim < 1) throw std::invalid_argument("haar_unitary: dimension must be >= 1");

    constexpr double inv_sqrt2 = 0.7071067811865475244;
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = cdouble(rng.normal(), rng.normal()) * inv_sqrt2;

    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < dim; ++j) {
        const cdouble d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) q.col(j) *= std::conj(d) / mag;
    }
    return q;
}

}  // namespace collisim
