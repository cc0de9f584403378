#include <apollo/sieve.hpp>

#include <apollo/detail/orbit_walk.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>
#include <unordered_map>

namespace apollo {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic for every n < 2^64 with this base set.
bool miller_rabin64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                  29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

u64 gcd64(u64 a, u64 b) {
    while (b) {
        u64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// Brent's cycle variant; the polynomial offset steps on failure, so the
// search is deterministic and always terminates on composites.
u64 pollard_rho64(u64 n) {
    if ((n & 1) == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 x = 2, y = 2, d = 1;
        u64 q = 1;
        int lam = 1;
        while (d == 1) {
            x = y;
            for (int i = 0; i < lam; ++i) y = (mulmod(y, y, n) + c) % n;
            int k = 0;
            while (k < lam && d == 1) {
                int lim = std::min(128, lam - k);
                u64 ys = y;
                for (int i = 0; i < lim; ++i) {
                    y = (mulmod(y, y, n) + c) % n;
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                d = gcd64(q, n);
                if (d == n) {
                    // Backtrack one step at a time to recover the factor.
                    d = 1;
                    y = ys;
                    while (d == 1) {
                        y = (mulmod(y, y, n) + c) % n;
                        d = gcd64(x > y ? x - y : y - x, n);
                    }
                    break;
                }
                k += lim;
            }
            lam *= 2;
        }
        if (d != n) return d;
    }
}

void factorize64(u64 n, std::vector<u64>& out) {
    if (n < 2) return;
    for (u64 d : {2ull, 3ull, 5ull}) {
        while (n % d == 0) {
            out.push_back(d);
            n /= d;
        }
    }
    for (u64 d = 7; d <= 1000000 && d * d <= n; d += 6) {
        while (n % d == 0) {
            out.push_back(d);
            n /= d;
        }
        while (n % (d + 4) == 0) {
            out.push_back(d + 4);
            n /= d + 4;
        }
    }
    if (n == 1) return;
    // No factor up to 10^6 survived, so anything below 10^12 is prime.
    if (n < 1000000000000ull || miller_rabin64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho64(n);
    factorize64(d, out);
    factorize64(n / d, out);
}

Int int_abs(const Int& n) { return n < 0 ? Int(-n) : n; }

bool fits64(const Int& n) {
    static const Int lim = Int(std::numeric_limits<u64>::max());
    return n >= 0 && n <= lim;
}

// Arbitrary-precision fallback for inputs beyond 64 bits.  The same base set
// is only a strong certificate there, which is more than enough margin for
// curvature products.
bool miller_rabin_wide(const Int& n) {
    using boost::multiprecision::powm;
    if (n < 2) return false;
    for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        if (n % p == 0) return n == p;
    }
    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (int a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        Int x = powm(Int(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

Int pollard_rho_wide(const Int& n) {
    using boost::multiprecision::gcd;
    if ((n & 1) == 0) return 2;
    for (Int c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = gcd(int_abs(x - y), n);
        }
        if (d != n) return d;
    }
}

void factorize_wide(Int n, std::vector<Int>& out) {
    if (n < 2) return;
    if (fits64(n)) {
        std::vector<u64> small;
        factorize64(n.convert_to<u64>(), small);
        for (u64 p : small) out.push_back(Int(p));
        return;
    }
    for (int d : {2, 3, 5, 7, 11, 13}) {
        while (n % d == 0) {
            out.push_back(d);
            n /= d;
        }
    }
    if (fits64(n)) {
        factorize_wide(n, out);
        return;
    }
    if (miller_rabin_wide(n)) {
        out.push_back(n);
        return;
    }
    Int d = pollard_rho_wide(n);
    factorize_wide(d, out);
    factorize_wide(n / d, out);
}

}  // namespace

std::vector<Int> factorize(const Int& n) {
    Int a = int_abs(n);
    if (a == 0) throw ValidationError("cannot factor zero");
    std::vector<Int> out;
    factorize_wide(a, out);
    std::sort(out.begin(), out.end());
    return out;
}

int omega(const Int& n) { return static_cast<int>(factorize(n).size()); }

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (fits64(n)) return miller_rabin64(n.convert_to<u64>());
    return miller_rabin_wide(n);
}

namespace {

int resolved_threads(const CountOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <class S>
double scalar_to_double(const S& v) {
    if constexpr (std::is_same_v<S, detail::Fast>) {
        return static_cast<double>(v);
    } else {
        return v.template convert_to<double>();
    }
}

template <class S>
u64 scalar_abs64(const S& v) {
    if constexpr (std::is_same_v<S, detail::Fast>) {
        return static_cast<u64>(v < 0 ? -v : v);
    } else {
        return int_abs(v).template convert_to<u64>();
    }
}

// Omega of the witness product, summed per coordinate since Omega is
// completely additive; a small cache absorbs the heavy repetition of
// curvatures across states.
struct OmegaCache {
    std::unordered_map<u64, int> seen;
    std::vector<u64> scratch;

    int of(u64 v) {
        if (v == 1) return 0;
        auto it = seen.find(v);
        if (it != seen.end()) return it->second;
        scratch.clear();
        factorize64(v, scratch);
        int w = static_cast<int>(scratch.size());
        seen.emplace(v, w);
        return w;
    }
};

template <class S>
struct SieveVisitor {
    const std::vector<double>* grid = nullptr;
    const std::vector<int>* coords = nullptr;
    int r_max = 0;
    bool strip = false;
    S window_pd = 0;
    std::vector<std::uint64_t> bumps;
    OmegaCache cache;

    std::int32_t on_create(const detail::WalkState<S>& st, int slot) {
        auto u = static_cast<std::size_t>(slot);
        if (strip && !(st.wx[u] >= 0 && st.wx[u] < window_pd * st.k[u])) return 0;
        int w = 0;
        for (int c : *coords) {
            const S& k = st.k[static_cast<std::size_t>(c - 1)];
            if (k == 0)
                throw ZeroCoordinateError(
                    "selected witness coordinate vanishes on the orbit");
            w += cache.of(scalar_abs64(k));
            if (w > r_max) return 0;
        }
        double cv = scalar_to_double(st.k[u]);
        auto it = std::upper_bound(grid->begin(), grid->end(), cv);
        if (it != grid->end())
            ++bumps[static_cast<std::size_t>(it - grid->begin())];
        return 0;
    }
};

template <class S>
std::vector<std::uint64_t> sieve_counts(const detail::ScaledSeed& scaled,
                                        const std::vector<double>& grid,
                                        const std::vector<int>& coords, int r_max,
                                        int threads, std::uint64_t max_nodes) {
    auto cfg = detail::to_scalar<S>(scaled);
    auto make = [&] {
        SieveVisitor<S> v;
        v.grid = &grid;
        v.coords = &coords;
        v.r_max = r_max;
        v.strip = cfg.strip;
        v.window_pd = cfg.window_pd;
        v.bumps.assign(grid.size(), 0);
        return v;
    };
    SieveVisitor<S> serial = make();
    std::vector<SieveVisitor<S>> tasks;
    detail::walk_tree<S>(cfg, threads, max_nodes, serial, make, tasks, nullptr);

    std::vector<std::uint64_t> acc = std::move(serial.bumps);
    for (const auto& t : tasks)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t.bumps[i];
    for (std::size_t i = 1; i < acc.size(); ++i) acc[i] += acc[i - 1];
    return acc;
}

}  // namespace

SieveReport almost_prime_census(const Quadruple& root,
                                const std::vector<double>& grid,
                                const std::vector<int>& coords, int R,
                                double alpha_ref, const CountOptions& opts) {
    if (grid.empty()) throw ValidationError("empty threshold grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] == grid[i - 1])
            throw DuplicateThresholdError("threshold grid has a repeated value");
        if (grid[i] < grid[i - 1])
            throw ValidationError("threshold grid must increase");
    }
    if (coords.empty()) throw ValidationError("no witness coordinates selected");
    for (int c : coords)
        if (c < 1 || c > 4)
            throw ValidationError("witness coordinates are 1-based indices 1..4");
    if (R < 0) throw ValidationError("almost-prime bound must be nonnegative");
    if (!(alpha_ref > 0)) throw ValidationError("reference exponent must be positive");

    PackingSpec spec = make_packing_spec(root);
    SeedConfiguration seed = seed_configuration(spec);
    detail::ScaledSeed scaled = detail::scale_seed(seed, spec, Rat(grid.back()));
    int threads = resolved_threads(opts);

    SieveReport out;
    out.alpha_ref = alpha_ref;
    std::vector<std::uint64_t> counts;
    if (opts.force_wide_arithmetic) {
        counts = sieve_counts<detail::Wide>(scaled, grid, coords, R, threads,
                                            opts.max_nodes);
    } else {
        try {
            counts = sieve_counts<detail::Fast>(scaled, grid, coords, R, threads,
                                                opts.max_nodes);
        } catch (const detail::OverflowSignal&) {
            counts = sieve_counts<detail::Wide>(scaled, grid, coords, R, threads,
                                                opts.max_nodes);
            out.warnings.push_back(
                "128-bit fast path overflowed; reran with wide arithmetic");
        }
    }

    int i = static_cast<int>(coords.size());
    out.rows.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        SieveRow row;
        row.T = grid[j];
        row.R = R;
        row.i = i;
        row.count = counts[j];
        row.normalized = static_cast<double>(counts[j]) *
                         std::pow(std::log(grid[j]), i) / std::pow(grid[j], alpha_ref);
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace apollo
