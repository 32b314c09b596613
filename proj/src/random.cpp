#include "conelab/random.hpp"

#include <cmath>
#include <stdexcept>

namespace conelab {

double Rng::uniform() {
    return (eng_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms drawn straight from the engine.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t index) {
    // splitmix64 step on seed xor golden-ratio-scaled index
    std::uint64_t z = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

HermitianMatrix random_hermitian(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_hermitian: n must be >= 1");
    Rng rng(seed);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian_complex();
    return HermitianMatrix::symmetrized(0.5 * (g + g.adjoint().eval()));
}

HermitianMatrix random_psd(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("random_psd: n must be >= 1");
    Rng rng(seed);
    Matrix g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = rng.gaussian_complex();
    return HermitianMatrix::symmetrized(g * g.adjoint());
}

BipartiteOperator random_separable(int d, int s, int k, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("random_separable: k must be >= 1");
    Matrix sum = Matrix::Zero(d * s, d * s);
    for (int term = 0; term < k; ++term) {
        const HermitianMatrix p = random_psd(d, Rng::derive_seed(seed, 2 * term));
        const HermitianMatrix q = random_psd(s, Rng::derive_seed(seed, 2 * term + 1));
        sum += tensor(p, q).mat();
    }
    return BipartiteOperator(d, s, HermitianMatrix::symmetrized(std::move(sum)));
}

Vector random_unit_vector(int n, Rng& rng) {
    Vector v(n);
    double norm2 = 0.0;
    do {
        for (int i = 0; i < n; ++i) v[i] = rng.gaussian_complex();
        norm2 = v.squaredNorm();
    } while (norm2 == 0.0);
    return v / std::sqrt(norm2);
}

Vector random_product_vector(int d, int s, std::uint64_t seed) {
    Rng rng(seed);
    const Vector x = random_unit_vector(d, rng);
    const Vector y = random_unit_vector(s, rng);
    Vector out(d * s);
    for (int i = 0; i < d; ++i) out.segment(i * s, s) = x[i] * y;
    return out;
}

}  // namespace conelab
