// random.hpp — deterministic seeded sampling of Hermitian matrices, psd
// matrices, separable operators and product vectors.

#pragma once

#include "conelab/bipartite.hpp"

#include <cstdint>
#include <random>

namespace conelab {

// mt19937_64 with hand-rolled uniform/gaussian transforms so the stream is a
// pure function of the seed, independent of the standard library's
// distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform();  // [0, 1)
    double gaussian();
    Complex gaussian_complex() { return {gaussian(), gaussian()}; }

    // Derive an independent stream for a subtask (e.g. one grid point).
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// GUE-like: iid standard Gaussian real/imaginary parts, then symmetrized.
HermitianMatrix random_hermitian(int n, std::uint64_t seed);

// G G* for a Gaussian G: psd by construction.
HermitianMatrix random_psd(int n, std::uint64_t seed);

// Sum of k tensor products of psd d x d and s x s factors: separable.
BipartiteOperator random_separable(int d, int s, int k, std::uint64_t seed);

// Unit vector x (x) y with Gaussian unit factors.
Vector random_product_vector(int d, int s, std::uint64_t seed);

Vector random_unit_vector(int n, Rng& rng);

}  // namespace conelab
