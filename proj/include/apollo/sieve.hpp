#pragma once

#include <apollo/census.hpp>

#include <cstdint>
#include <vector>

namespace apollo {

// Number of prime factors counted with multiplicity; omega(1) == 0.
// Trial division up to 10^6, then a deterministic Miller-Rabin certificate
// for anything below 2^64, then Pollard rho splitting with retry.
int omega(const Int& n);

// Prime factorization in nondecreasing order; product equals the input.
std::vector<Int> factorize(const Int& n);

bool is_prime(const Int& n);

struct SieveRow {
    double T = 0;
    int R = 0;
    int i = 0;  // number of selected coordinates
    std::uint64_t count = 0;
    double normalized = 0;  // count * (log T)^i / T^alpha_ref
};

struct SieveReport {
    std::vector<SieveRow> rows;
    double alpha_ref = 0;
    std::vector<std::string> warnings;
};

// Almost-prime census over the created-circle orbit: for each grid cutoff T,
// how many circles with curvature < T have Omega(|prod of selected witness
// coordinates|) <= R.  The witness of a circle is the quadruple state at its
// creation in the word tree (well defined by the word/circle bijection);
// coords are 1-based indices into that state.  A vanishing selected
// coordinate raises ZeroCoordinateError (strip orbits keep their lines).
// With R large enough to accept everything the census equals the
// AugmentedOrbit count table.
SieveReport almost_prime_census(const Quadruple& root,
                                const std::vector<double>& grid,
                                const std::vector<int>& coords, int R,
                                double alpha_ref = 1.30568,
                                const CountOptions& opts = {});

}  // namespace apollo
