#include <apollo/census.hpp>

#include <apollo/detail/orbit_walk.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace apollo {

const char* to_string(CountMode m) {
    switch (m) {
        case CountMode::VectorOrbit: return "vector";
        case CountMode::AugmentedOrbit: return "augmented";
        case CountMode::Geometric: return "geometric";
    }
    return "unknown";
}

const char* to_string(NormKind n) {
    return n == NormKind::Max ? "max" : "euclid";
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

// Accumulates, per grid index, how many creations first fall under that
// threshold; prefix sums turn this into the counting function.
template <class S>
struct CountVisitor {
    const std::vector<double>* grid = nullptr;
    bool strip = false;
    S window_pd = 0;
    std::vector<std::uint64_t> bumps;

    std::int32_t on_create(const detail::WalkState<S>& st, int slot) {
        auto u = static_cast<std::size_t>(slot);
        if (strip && !(st.wx[u] >= 0 && st.wx[u] < window_pd * st.k[u])) return 0;
        double c = scalar_to_double(st.k[u]);
        auto it = std::upper_bound(grid->begin(), grid->end(), c);
        if (it != grid->end())
            ++bumps[static_cast<std::size_t>(it - grid->begin())];
        return 0;
    }
};

template <class S>
std::vector<std::uint64_t> creation_counts(const detail::ScaledSeed& scaled,
                                           const std::vector<double>& grid,
                                           int threads, std::uint64_t max_nodes) {
    auto cfg = detail::to_scalar<S>(scaled);
    auto make = [&] {
        CountVisitor<S> v;
        v.grid = &grid;
        v.strip = cfg.strip;
        v.window_pd = cfg.window_pd;
        v.bumps.assign(grid.size(), 0);
        return v;
    };
    CountVisitor<S> serial = make();
    std::vector<CountVisitor<S>> tasks;
    detail::walk_tree<S>(cfg, threads, max_nodes, serial, make, tasks, nullptr);

    std::vector<std::uint64_t> acc = std::move(serial.bumps);
    for (const auto& t : tasks)
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += t.bumps[i];
    for (std::size_t i = 1; i < acc.size(); ++i) acc[i] += acc[i - 1];
    return acc;
}

// Seed members below the threshold (window-filtered for strips); the
// geometric count is the created-circle count plus this offset.
std::uint64_t seed_offset(const PackingSpec& spec, const SeedConfiguration& seed,
                          double T) {
    std::uint64_t n = 0;
    for (const Circle& c : seed.circles) {
        if (!(to_double(c.curvature) < T)) continue;
        if (spec.kind == PackingKind::Strip && !c.is_line &&
            !(c.cx >= 0 && c.cx < spec.period))
            continue;
        ++n;
    }
    return n;
}

// ---- vector-orbit breadth-first search with hash dedup ----

struct VecKey {
    std::array<std::int64_t, 4> v;
    bool operator==(const VecKey&) const = default;
};

struct VecKeyHash {
    std::size_t operator()(const VecKey& k) const {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t x : k.v) {
            auto u = static_cast<std::uint64_t>(x);
            for (int b = 0; b < 8; ++b) {
                h ^= (u >> (8 * b)) & 0xff;
                h *= 1099511628211ull;
            }
        }
        return static_cast<std::size_t>(h);
    }
};

bool norm_below(const std::array<std::int64_t, 4>& v, double T, NormKind norm) {
    if (norm == NormKind::Max) {
        std::int64_t m = 0;
        for (std::int64_t x : v) m = std::max(m, x < 0 ? -x : x);
        return static_cast<double>(m) < T;
    }
    unsigned __int128 s = 0;
    for (std::int64_t x : v) {
        auto a = static_cast<unsigned __int128>(x < 0 ? -x : x);
        s += a * a;
    }
    if (T > 0 && T == std::floor(T) && T < 9e9) {
        auto t = static_cast<unsigned __int128>(T);
        return s < t * t;
    }
    return static_cast<double>(s) < T * T;
}

std::uint64_t vector_orbit_count(const Quadruple& root, double T, NormKind norm,
                                 const CountOptions& opts) {
    if (eval_form(root) != 0)
        throw NonDescartesError("root does not satisfy the Descartes form");
    if (T > 1e14)
        throw BudgetExceededError("vector-orbit cutoff too large for the counter");

    std::array<std::int64_t, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (root.k[i] > 1000000000 || root.k[i] < -1000000000)
            throw BudgetExceededError("root too large for the vector counter");
        r[i] = root.k[i].convert_to<std::int64_t>();
    }
    if (!norm_below(r, T, norm)) return 0;

    std::unordered_set<VecKey, VecKeyHash> seen;
    std::deque<std::array<std::int64_t, 4>> queue;
    seen.insert({r});
    queue.push_back(r);
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        std::int64_t s = v[0] + v[1] + v[2] + v[3];
        for (std::size_t i = 0; i < 4; ++i) {
            auto nv = v;
            nv[i] = 2 * (s - v[i]) - v[i];
            if (!norm_below(nv, T, norm)) continue;
            if (seen.insert({nv}).second) {
                if (opts.max_nodes != 0 && seen.size() > opts.max_nodes)
                    throw BudgetExceededError("node budget exhausted");
                queue.push_back(nv);
            }
        }
    }
    return seen.size();
}

std::vector<std::uint64_t> vector_orbit_table(const Quadruple& root,
                                              const std::vector<double>& grid,
                                              NormKind norm, const CountOptions& opts) {
    // One search to the top threshold, then a histogram over norms.
    std::vector<std::uint64_t> out(grid.size(), 0);
    double top = grid.back();
    if (eval_form(root) != 0)
        throw NonDescartesError("root does not satisfy the Descartes form");
    if (top > 1e14)
        throw BudgetExceededError("vector-orbit cutoff too large for the counter");

    std::array<std::int64_t, 4> r{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (root.k[i] > 1000000000 || root.k[i] < -1000000000)
            throw BudgetExceededError("root too large for the vector counter");
        r[i] = root.k[i].convert_to<std::int64_t>();
    }
    if (!norm_below(r, top, norm)) return out;

    std::unordered_set<VecKey, VecKeyHash> seen;
    std::deque<std::array<std::int64_t, 4>> queue;
    std::vector<std::array<std::int64_t, 4>> members;
    seen.insert({r});
    queue.push_back(r);
    members.push_back(r);
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        std::int64_t s = v[0] + v[1] + v[2] + v[3];
        for (std::size_t i = 0; i < 4; ++i) {
            auto nv = v;
            nv[i] = 2 * (s - v[i]) - v[i];
            if (!norm_below(nv, top, norm)) continue;
            if (seen.insert({nv}).second) {
                if (opts.max_nodes != 0 && seen.size() > opts.max_nodes)
                    throw BudgetExceededError("node budget exhausted");
                queue.push_back(nv);
                members.push_back(nv);
            }
        }
    }
    for (const auto& v : members)
        for (std::size_t j = 0; j < grid.size(); ++j)
            if (norm_below(v, grid[j], norm)) {
                ++out[j];
                break;
            }
    for (std::size_t j = 1; j < grid.size(); ++j) out[j] += out[j - 1];
    return out;
}

void validate_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ValidationError("empty threshold grid");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (grid[i] == grid[i - 1])
            throw DuplicateThresholdError("threshold grid has a repeated value");
        if (grid[i] < grid[i - 1])
            throw ValidationError("threshold grid must increase");
    }
}

}  // namespace

CountTable count_table(const Quadruple& root, const std::vector<double>& grid,
                       CountMode mode, NormKind norm, const CountOptions& opts) {
    validate_grid(grid);
    CountTable out;
    out.mode = mode;
    out.norm = norm;
    out.root = root;

    std::vector<std::uint64_t> counts;
    if (mode == CountMode::VectorOrbit) {
        counts = vector_orbit_table(root, grid, norm, opts);
    } else {
        PackingSpec spec = make_packing_spec(root);
        SeedConfiguration seed = seed_configuration(spec);
        detail::ScaledSeed scaled = detail::scale_seed(seed, spec, Rat(grid.back()));
        int threads = resolved_threads(opts);
        if (opts.force_wide_arithmetic) {
            counts = creation_counts<detail::Wide>(scaled, grid, threads, opts.max_nodes);
        } else {
            try {
                counts = creation_counts<detail::Fast>(scaled, grid, threads, opts.max_nodes);
            } catch (const detail::OverflowSignal&) {
                counts = creation_counts<detail::Wide>(scaled, grid, threads, opts.max_nodes);
                out.warnings.push_back(
                    "128-bit fast path overflowed; reran with wide arithmetic");
            }
        }
        if (mode == CountMode::Geometric)
            for (std::size_t j = 0; j < grid.size(); ++j)
                counts[j] += seed_offset(spec, seed, grid[j]);
    }

    out.rows.reserve(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
        out.rows.emplace_back(grid[j], counts[j]);
    return out;
}

std::uint64_t count_orbit(const Quadruple& root, double T, CountMode mode,
                          NormKind norm, const CountOptions& opts) {
    if (mode == CountMode::VectorOrbit) return vector_orbit_count(root, T, norm, opts);
    return count_table(root, {T}, mode, norm, opts).rows[0].second;
}

std::uint64_t count_circles_bruteforce(const Quadruple& root, double T) {
    PackingSpec spec = make_packing_spec(root);
    SeedConfiguration seed = seed_configuration(spec);
    const bool strip = spec.kind == PackingKind::Strip;
    const Rat period = spec.period;
    const Rat margin_lo = -period, margin_hi = 2 * period;

    auto member_key = [](const AugmentedQuadruple& w, std::size_t i) {
        std::ostringstream s;
        s << w.curv.k[i] << '|' << w.bx[i] << '|' << w.by[i] << '|' << w.line[i]
          << '|' << w.offset[i];
        return s.str();
    };
    auto state_key = [&](const AugmentedQuadruple& w) {
        std::array<std::string, 4> parts;
        for (std::size_t i = 0; i < 4; ++i) parts[i] = member_key(w, i);
        std::sort(parts.begin(), parts.end());
        return parts[0] + ';' + parts[1] + ';' + parts[2] + ';' + parts[3];
    };

    struct MemberLite {
        bool is_line;
        Int curv;
        Rat cx;
    };
    std::map<std::string, MemberLite> circles;
    std::unordered_set<std::string> visited;
    std::deque<AugmentedQuadruple> queue;

    visited.insert(state_key(seed.aug));
    queue.push_back(seed.aug);
    while (!queue.empty()) {
        AugmentedQuadruple w = std::move(queue.front());
        queue.pop_front();
        for (std::size_t i = 0; i < 4; ++i) {
            MemberLite m;
            m.is_line = w.line[i];
            m.curv = w.curv.k[i];
            m.cx = w.line[i] ? Rat(0) : Rat(w.bx[i]) / Rat(w.curv.k[i]);
            circles.emplace(member_key(w, i), m);
        }
        for (int g = 1; g <= 4; ++g) {
            AugmentedQuadruple next = apply_generator_augmented(w, g);
            std::size_t slot = static_cast<std::size_t>(g - 1);
            if (!(Rat(next.curv.k[slot]) < Rat(T))) continue;
            if (strip) {
                // Keep only states whose circle hull still meets the widened
                // window; circles beyond it cannot touch [0, period).
                bool any = false, reach = false;
                Rat lo, hi;
                for (std::size_t i = 0; i < 4; ++i) {
                    if (next.line[i]) continue;
                    Rat k(next.curv.k[i]);
                    Rat cx = next.bx[i] / k;
                    Rat r = 1 / k;
                    if (!any || cx - r < lo) lo = cx - r;
                    if (!any || cx + r > hi) hi = cx + r;
                    any = true;
                }
                reach = any && lo <= margin_hi && hi >= margin_lo;
                if (!reach) continue;
            }
            std::string key = state_key(next);
            if (visited.insert(key).second) queue.push_back(std::move(next));
        }
    }

    std::uint64_t n = 0;
    for (const auto& [key, m] : circles) {
        if (m.is_line) {
            ++n;
            continue;
        }
        if (!(Rat(m.curv) < Rat(T))) continue;
        if (strip && !(m.cx >= 0 && m.cx < period)) continue;
        ++n;
    }
    return n;
}

std::vector<double> default_grid(double t_min, double t_max, int points_per_decade) {
    if (!(t_min > 0) || !(t_max > t_min))
        throw ValidationError("grid endpoints must satisfy 0 < t_min < t_max");
    if (points_per_decade < 1)
        throw ValidationError("points per decade must be positive");
    std::vector<double> g;
    double step = std::pow(10.0, 1.0 / points_per_decade);
    for (double t = t_min; t < t_max * (1 - 1e-12); t *= step) g.push_back(t);
    g.push_back(t_max);
    return g;
}

namespace {

struct OlsFit {
    double slope, intercept, rms;
};

OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys) {
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double det = n * sxx - sx * sx;
    if (det <= 0) throw InsufficientDataError("fit window is degenerate");
    OlsFit f;
    f.slope = (n * sxy - sx * sy) / det;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double e = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += e * e;
    }
    f.rms = std::sqrt(ss / n);
    return f;
}

}  // namespace

FitResult fit_exponent(const CountTable& table, std::pair<double, double> window) {
    if (!(window.first < window.second))
        throw ValidationError("fit window must be a nonempty interval");
    std::vector<double> xs, ys;
    FitResult out;
    bool dropped = false;
    for (const auto& [t, n] : table.rows) {
        if (t < window.first || t > window.second) continue;
        if (n == 0) {
            dropped = true;
            continue;
        }
        xs.push_back(std::log(t));
        ys.push_back(std::log(static_cast<double>(n)));
    }
    if (dropped) out.warnings.push_back("dropped rows with zero counts from the fit");
    if (xs.size() < 3)
        throw InsufficientDataError("need at least three populated rows in the window");
    OlsFit f = ols(xs, ys);
    out.alpha = f.slope;
    out.c = std::exp(f.intercept);
    out.residual = f.rms;
    out.window = window;
    return out;
}

std::pair<double, double> default_fit_window(const CountTable& table) {
    if (table.rows.empty()) throw InsufficientDataError("empty count table");
    double top = table.rows.back().first;
    return {top / 100.0, top};
}

BoxDimensionResult box_dimension(const std::vector<Circle>& circles,
                                 const std::vector<Rat>& epsilons,
                                 const BoxFrame* frame) {
    if (epsilons.empty()) throw ValidationError("no box sizes given");
    for (const Rat& e : epsilons)
        if (!(e > 0)) throw ValidationError("box sizes must be positive");

    const Circle* bounding = nullptr;
    std::vector<const Circle*> disks;
    Int max_curv = 0;
    for (const Circle& c : circles) {
        if (c.is_line) continue;
        if (c.curvature < 0) {
            if (bounding) throw ValidationError("more than one bounding circle");
            bounding = &c;
        } else if (c.curvature > 0) {
            disks.push_back(&c);
            Int k = num(c.curvature) / den(c.curvature);
            if (k > max_curv) max_curv = k;
        }
    }

    Rat fx0, fy0, side;
    if (frame) {
        if (!(frame->side > 0)) throw ValidationError("frame side must be positive");
        fx0 = frame->x0;
        fy0 = frame->y0;
        side = frame->side;
    } else if (bounding) {
        Rat r0 = bounding->radius();
        fx0 = bounding->cx - r0;
        fy0 = bounding->cy - r0;
        side = 2 * r0;
    } else {
        throw ValidationError("no bounding circle; provide a frame");
    }

    std::vector<Rat> eps_sorted = epsilons;
    std::sort(eps_sorted.begin(), eps_sorted.end(),
              [](const Rat& a, const Rat& b) { return a > b; });
    eps_sorted.erase(std::unique(eps_sorted.begin(), eps_sorted.end()), eps_sorted.end());

    auto ceil_div = [](const Rat& v) {
        Int q = num(v) / den(v);
        if (Rat(q) < v) ++q;
        return q;
    };

    BoxDimensionResult out;
    for (const Rat& eps : eps_sorted) {
        Int n_big = ceil_div(side / eps);
        if (n_big > 200000) throw BudgetExceededError("box grid too fine for the frame");
        auto n = n_big.convert_to<std::int64_t>();
        std::uint64_t total = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
        std::uint64_t excluded = 0;

        const double fx0d = to_double(fx0), fy0d = to_double(fy0), ed = to_double(eps);

        // Boxes swallowed by one open disk: disk interiors are disjoint, so
        // no box is counted twice.  Floating point filters the clear cases
        // and exact arithmetic settles anything near a boundary.
        for (const Circle* c : disks) {
            Rat k = c->curvature;
            Rat r = c->radius();
            Rat rx0 = (c->cx - r - fx0) / eps, rx1 = (c->cx + r - fx0) / eps;
            Rat ry0 = (c->cy - r - fy0) / eps, ry1 = (c->cy + r - fy0) / eps;
            auto lo_idx = [&](const Rat& v) {
                Int q = num(v) / den(v);
                if (Rat(q) > v) --q;  // floor
                return std::max<std::int64_t>(0, q.convert_to<std::int64_t>());
            };
            auto hi_idx = [&](const Rat& v) {
                Int q = num(v) / den(v);
                if (Rat(q) > v) --q;
                return std::min<std::int64_t>(n - 1, q.convert_to<std::int64_t>());
            };
            std::int64_t ix0 = lo_idx(rx0), ix1 = hi_idx(rx1);
            std::int64_t iy0 = lo_idx(ry0), iy1 = hi_idx(ry1);
            const double cxd = to_double(c->cx), cyd = to_double(c->cy);
            const double r2d = to_double(r) * to_double(r);
            for (std::int64_t ix = ix0; ix <= ix1; ++ix) {
                for (std::int64_t iy = iy0; iy <= iy1; ++iy) {
                    double bx0 = fx0d + static_cast<double>(ix) * ed;
                    double by0 = fy0d + static_cast<double>(iy) * ed;
                    bool clear_in = true, clear_out = false;
                    for (int corner = 0; corner < 4; ++corner) {
                        double px = bx0 + (corner & 1 ? ed : 0.0);
                        double py = by0 + (corner & 2 ? ed : 0.0);
                        double d2 = (px - cxd) * (px - cxd) + (py - cyd) * (py - cyd);
                        if (d2 >= r2d * (1 - 1e-9)) clear_in = false;
                        if (d2 > r2d * (1 + 1e-9)) clear_out = true;
                    }
                    if (clear_out) continue;
                    bool inside;
                    if (clear_in) {
                        inside = true;
                    } else {
                        inside = true;
                        Rat x0 = fx0 + ix * eps, y0 = fy0 + iy * eps;
                        for (int corner = 0; corner < 4 && inside; ++corner) {
                            Rat px = corner & 1 ? Rat(x0 + eps) : x0;
                            Rat py = corner & 2 ? Rat(y0 + eps) : y0;
                            Rat d2 = (px - c->cx) * (px - c->cx) + (py - c->cy) * (py - c->cy);
                            inside = d2 < r * r;
                        }
                    }
                    if (inside) ++excluded;
                }
            }
        }

        // Boxes entirely outside the closed bounding disk: nearest point of
        // the box to the center is the clamped center.
        if (bounding) {
            Rat r0 = bounding->radius();
            const double cxd = to_double(bounding->cx), cyd = to_double(bounding->cy);
            const double r2d = to_double(r0) * to_double(r0);
            for (std::int64_t ix = 0; ix < n; ++ix) {
                double bx0 = fx0d + static_cast<double>(ix) * ed;
                double nxd = std::clamp(cxd, bx0, bx0 + ed);
                double dx2 = (nxd - cxd) * (nxd - cxd);
                for (std::int64_t iy = 0; iy < n; ++iy) {
                    double by0 = fy0d + static_cast<double>(iy) * ed;
                    double nyd = std::clamp(cyd, by0, by0 + ed);
                    double d2 = dx2 + (nyd - cyd) * (nyd - cyd);
                    if (d2 <= r2d * (1 - 1e-9)) continue;  // clearly meets the disk
                    if (d2 > r2d * (1 + 1e-9)) {
                        ++excluded;
                        continue;
                    }
                    Rat x0 = fx0 + ix * eps, y0 = fy0 + iy * eps;
                    Rat nx = std::clamp(bounding->cx, x0, Rat(x0 + eps));
                    Rat ny = std::clamp(bounding->cy, y0, Rat(y0 + eps));
                    Rat d2r = (nx - bounding->cx) * (nx - bounding->cx) +
                              (ny - bounding->cy) * (ny - bounding->cy);
                    if (d2r > r0 * r0) ++excluded;
                }
            }
        }

        out.rows.emplace_back(to_double(eps), total - excluded);
    }

    std::vector<double> xs, ys;
    for (const auto& [e, cnt] : out.rows) {
        if (cnt == 0) continue;
        xs.push_back(std::log(1.0 / e));
        ys.push_back(std::log(static_cast<double>(cnt)));
    }
    if (xs.size() < 3)
        throw InsufficientDataError("need at least three box sizes with hits");
    OlsFit f = ols(xs, ys);
    out.fit.alpha = f.slope;
    out.fit.c = std::exp(f.intercept);
    out.fit.residual = f.rms;
    out.fit.window = {xs.front(), xs.back()};
    if (max_curv != 0 && Rat(1) / eps_sorted.back() > Rat(max_curv))
        out.fit.warnings.push_back(
            "finest boxes are smaller than the smallest resolved circle");
    return out;
}

double error_exponent_main(double alpha, double s1) {
    if (!(1.0 < s1 && s1 < alpha && alpha < 2.0))
        throw DomainError("need 1 < s1 < alpha < 2");
    return alpha - 2.0 * (alpha - s1) / 63.0;
}

}  // namespace apollo
