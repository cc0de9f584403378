#include <apollo/packing.hpp>

#include <apollo/detail/orbit_walk.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>

namespace apollo {

namespace {

Rat sq(const Rat& v) { return v * v; }

Rat rat_abs(const Rat& v) { return v < 0 ? Rat(-v) : v; }

// Signed tangency identity for two placed circles; covers internal tangency
// against the bounding circle through the sign of the curvature.
bool circles_tangent(const Rat& k1, const Rat& x1, const Rat& y1, const Rat& k2,
                     const Rat& x2, const Rat& y2) {
    Rat d2 = sq(x1 - x2) + sq(y1 - y2);
    return d2 * sq(k1 * k2) == sq(k1 + k2);
}

bool line_circle_tangent(const Rat& nx, const Rat& ny, const Rat& off,
                         const Rat& k, const Rat& cx, const Rat& cy) {
    return sq((nx * cx + ny * cy - off) * k) == 1;
}

int resolved_threads(const GenerateOptions& opts) {
    if (opts.threads > 0) return opts.threads;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

Rat Circle::radius() const {
    if (is_line || curvature == 0) throw DomainError("a line has no radius");
    return rat_abs(Rat(1) / curvature);
}

PackingSpec make_packing_spec(const Quadruple& root) {
    if (eval_form(root) != 0)
        throw NonDescartesError("root does not satisfy the Descartes form");

    Int s = root.k[0] + root.k[1] + root.k[2] + root.k[3];
    int negatives = 0, zeros = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        Int nk = 2 * (s - root.k[i]) - root.k[i];
        if (nk < root.k[i])
            throw InvalidRootError("root is not reduced: a reflection lowers it");
        if (root.k[i] < 0) ++negatives;
        if (root.k[i] == 0) ++zeros;
    }

    PackingSpec spec;
    spec.root = root;
    if (negatives == 1 && zeros == 0) {
        spec.kind = PackingKind::Bounded;
        spec.period = 0;
        return spec;
    }
    if (negatives == 0 && zeros == 2) {
        // The form forces the two nonzero coordinates to be equal.
        Int c = 0;
        for (std::size_t i = 0; i < 4; ++i)
            if (root.k[i] != 0) c = root.k[i];
        if (c <= 0) throw InvalidRootError("degenerate all-zero root");
        spec.kind = PackingKind::Strip;
        spec.period = Rat(2) / Rat(c);
        return spec;
    }
    throw InvalidRootError("root must have one negative coordinate or two zeros");
}

namespace {

SeedConfiguration bounded_seed(const PackingSpec& spec) {
    // Work on the curvature-ascending ordering, then map the placed circles
    // back to the slots of the input quadruple.
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return spec.root[a] < spec.root[b];
    });

    std::array<Rat, 4> kk;
    for (std::size_t p = 0; p < 4; ++p) kk[p] = Rat(spec.root[order[p]]);

    Rat r0 = Rat(-1) / kk[0];  // bounding radius, positive
    Rat r1 = Rat(1) / kk[1];
    Rat r2 = Rat(1) / kk[2];
    Rat r3 = Rat(1) / kk[3];

    std::array<Rat, 4> x{}, y{};
    // Bounding circle at the origin, largest inner circle on the negative
    // x axis, internally tangent.
    Rat a = r0 - r1;
    if (a <= 0) throw NotRepresentableError("inner circle as large as the bound");
    x[1] = -a;

    // Third circle: internally tangent to the bound, externally to the second.
    {
        Rat big = r0 - r2, small = r1 + r2;
        x[2] = (sq(small) - sq(big) - sq(a)) / (2 * a);
        Rat ysq = sq(big) - sq(x[2]);
        if (ysq < 0) throw NotRepresentableError("seed circles cannot close up");
        auto root = exact_sqrt(ysq);
        if (!root) throw NotRepresentableError("seed placement needs an irrational coordinate");
        y[2] = *root;  // y >= 0 breaks the mirror symmetry
    }

    // Fourth circle: tangent to all three.  Two linear conditions pin it down
    // unless the third circle landed on the x axis, where a square root with
    // the same y >= 0 convention takes over.
    {
        Rat big = r0 - r3, mid = r1 + r3, small = r2 + r3;
        x[3] = (sq(mid) - sq(big) - sq(a)) / (2 * a);
        if (y[2] != 0) {
            y[3] = (sq(big) + sq(x[2]) + sq(y[2]) - 2 * x[2] * x[3] - sq(small)) /
                   (2 * y[2]);
            if (sq(x[3]) + sq(y[3]) != sq(big))
                throw NotRepresentableError("seed placement is inconsistent");
        } else {
            Rat ysq = sq(big) - sq(x[3]);
            if (ysq < 0) throw NotRepresentableError("seed circles cannot close up");
            auto root = exact_sqrt(ysq);
            if (!root) throw NotRepresentableError("seed placement needs an irrational coordinate");
            y[3] = *root;
        }
    }

    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (!circles_tangent(kk[i], x[i], y[i], kk[j], x[j], y[j]))
                throw NotRepresentableError("seed placement failed a tangency");

    SeedConfiguration seed;
    for (std::size_t p = 0; p < 4; ++p) {
        auto slot = static_cast<std::size_t>(order[p]);
        Circle& c = seed.circles[slot];
        c.curvature = kk[p];
        c.cx = x[p];
        c.cy = y[p];
        c.depth = 0;
        c.is_line = false;
        seed.aug.curv.k[slot] = spec.root[order[p]];
        seed.aug.bx[slot] = kk[p] * x[p];
        seed.aug.by[slot] = kk[p] * y[p];
        seed.aug.line[slot] = false;
        seed.aug.offset[slot] = 0;
    }
    return seed;
}

SeedConfiguration strip_seed(const PackingSpec& spec) {
    Rat period = spec.period;
    Rat half = period / 2;  // also the circle radius
    SeedConfiguration seed;
    int zeros_seen = 0, circles_seen = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        Circle& c = seed.circles[i];
        seed.aug.curv.k[i] = spec.root[static_cast<int>(i)];
        c.depth = 0;
        if (spec.root[static_cast<int>(i)] == 0) {
            // Normals point away from the strip, into each line's half-plane.
            bool lower = zeros_seen++ == 0;
            c.curvature = 0;
            c.is_line = true;
            c.cx = 0;
            c.cy = lower ? Rat(-1) : Rat(1);
            c.line_offset = lower ? Rat(0) : period;
        } else {
            bool first = circles_seen++ == 0;
            c.curvature = Rat(spec.root[static_cast<int>(i)]);
            c.is_line = false;
            c.cx = first ? Rat(0) : period;
            c.cy = half;
        }
        seed.aug.line[i] = c.is_line;
        if (c.is_line) {
            seed.aug.bx[i] = c.cx;  // unit normal rides in the center rows
            seed.aug.by[i] = c.cy;
            seed.aug.offset[i] = c.line_offset;
        } else {
            seed.aug.bx[i] = c.curvature * c.cx;
            seed.aug.by[i] = c.curvature * c.cy;
            seed.aug.offset[i] = 0;
        }
    }
    return seed;
}

}  // namespace

SeedConfiguration seed_configuration(const PackingSpec& spec) {
    SeedConfiguration seed = spec.kind == PackingKind::Bounded ? bounded_seed(spec)
                                                               : strip_seed(spec);
    if (!augmented_invariants_ok(seed.aug))
        throw NotRepresentableError("seed placement broke an orbit invariant");
    return seed;
}

namespace detail {

ScaledSeed scale_seed(const SeedConfiguration& seed, const PackingSpec& spec,
                      const Rat& max_curv) {
    ScaledSeed out;
    Int d = 1;
    for (std::size_t i = 0; i < 4; ++i) {
        d = boost::multiprecision::lcm(d, den(seed.aug.bx[i]));
        d = boost::multiprecision::lcm(d, den(seed.aug.by[i]));
    }
    out.strip = spec.kind == PackingKind::Strip;
    if (out.strip) d = boost::multiprecision::lcm(d, den(spec.period));
    for (std::size_t i = 0; i < 4; ++i) {
        out.k[i] = seed.aug.curv.k[i];
        Rat wx = seed.aug.bx[i] * d, wy = seed.aug.by[i] * d;
        out.wx[i] = num(wx);
        out.wy[i] = num(wy);
    }
    out.scale = d;
    out.window_pd = out.strip ? Int(num(spec.period * d)) : Int(0);
    out.kmax = strict_cutoff(max_curv);
    return out;
}

}  // namespace detail

namespace {

template <class S>
struct CreationRec {
    S k, wx, wy;
    std::int32_t depth;
    std::array<std::int32_t, 3> parents;  // >= 0 final id, < 0 task-local
};

template <class S>
struct EmitVisitor {
    std::vector<CreationRec<S>> recs;
    bool local = false;

    std::int32_t on_create(const detail::WalkState<S>& st, int slot) {
        CreationRec<S> r;
        auto u = static_cast<std::size_t>(slot);
        r.k = st.k[u];
        r.wx = st.wx[u];
        r.wy = st.wy[u];
        r.depth = st.depth;
        int n = 0;
        for (int j = 0; j < 4; ++j)
            if (j != slot) r.parents[static_cast<std::size_t>(n++)] = st.id[static_cast<std::size_t>(j)];
        recs.push_back(std::move(r));
        auto idx = static_cast<std::int32_t>(recs.size()) - 1;
        return local ? -idx - 1 : idx + 4;  // seeds hold ids 0..3
    }
};

template <class S>
PackingResult generate_impl(const PackingSpec& spec, const SeedConfiguration& seed,
                            const detail::ScaledSeed& scaled, const Rat& max_curv,
                            const GenerateOptions& opts, int threads) {
    auto cfg = detail::to_scalar<S>(scaled);

    EmitVisitor<S> serial;
    std::vector<EmitVisitor<S>> tasks;
    std::uint64_t nodes = 0;
    detail::walk_tree<S>(cfg, threads, opts.max_nodes, serial,
                         [] {
                             EmitVisitor<S> v;
                             v.local = true;
                             return v;
                         },
                         tasks, &nodes);

    // Flatten to final creation order: serial phase first, then each task.
    std::vector<std::int32_t> task_base(tasks.size());
    std::size_t total = serial.recs.size();
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        task_base[t] = static_cast<std::int32_t>(4 + total);
        total += tasks[t].recs.size();
    }

    const bool strip = spec.kind == PackingKind::Strip;
    std::vector<Circle> all;
    std::vector<char> keep;
    all.reserve(4 + total);
    keep.reserve(4 + total);
    for (std::size_t i = 0; i < 4; ++i) {
        const Circle& c = seed.circles[i];
        bool in = c.curvature < max_curv;
        if (strip && !c.is_line) in = in && c.cx >= 0 && c.cx < spec.period;
        all.push_back(c);
        keep.push_back(in ? 1 : 0);
    }

    std::vector<std::array<std::int32_t, 2>> edges;
    edges.reserve(6 + 3 * total);
    for (std::int32_t i = 0; i < 4; ++i)
        for (std::int32_t j = i + 1; j < 4; ++j) edges.push_back({i, j});

    Int d = scaled.scale;
    auto append = [&](const CreationRec<S>& r, std::int32_t base_for_locals) {
        Int k(r.k), wx(r.wx), wy(r.wy);
        Circle c;
        c.curvature = Rat(k);
        c.cx = Rat(wx) / Rat(k * d);
        c.cy = Rat(wy) / Rat(k * d);
        c.depth = r.depth;
        bool in = !strip || (wx >= 0 && wx < scaled.window_pd * k);
        std::int32_t id = static_cast<std::int32_t>(all.size());
        all.push_back(std::move(c));
        keep.push_back(in ? 1 : 0);
        for (std::int32_t p : r.parents) {
            std::int32_t pid = p >= 0 ? p : base_for_locals + (-p - 1);
            edges.push_back({pid, id});
        }
    };
    for (const auto& r : serial.recs) append(r, 0);
    for (std::size_t t = 0; t < tasks.size(); ++t)
        for (const auto& r : tasks[t].recs) append(r, task_base[t]);

    // Stable output order regardless of traversal: sort the survivors by
    // (curvature, cx, cy) and remap the recorded tangent pairs.
    std::vector<std::int32_t> kept_ids;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (keep[i]) kept_ids.push_back(static_cast<std::int32_t>(i));
    std::sort(kept_ids.begin(), kept_ids.end(), [&](std::int32_t a, std::int32_t b) {
        const Circle& ca = all[static_cast<std::size_t>(a)];
        const Circle& cb = all[static_cast<std::size_t>(b)];
        if (ca.curvature != cb.curvature) return ca.curvature < cb.curvature;
        if (ca.cx != cb.cx) return ca.cx < cb.cx;
        return ca.cy < cb.cy;
    });

    std::vector<std::int32_t> new_index(all.size(), -1);
    PackingResult res;
    res.circles.reserve(kept_ids.size());
    for (std::size_t n = 0; n < kept_ids.size(); ++n) {
        new_index[static_cast<std::size_t>(kept_ids[n])] = static_cast<std::int32_t>(n);
        res.circles.push_back(all[static_cast<std::size_t>(kept_ids[n])]);
    }
    for (const auto& e : edges) {
        std::int32_t a = new_index[static_cast<std::size_t>(e[0])];
        std::int32_t b = new_index[static_cast<std::size_t>(e[1])];
        if (a < 0 || b < 0) continue;
        res.tangencies.push_back({std::min(a, b), std::max(a, b)});
    }
    std::sort(res.tangencies.begin(), res.tangencies.end());
    res.tangencies.erase(std::unique(res.tangencies.begin(), res.tangencies.end()),
                         res.tangencies.end());
    res.nodes_visited = nodes;
    return res;
}

}  // namespace

PackingResult generate(const PackingSpec& spec, const Rat& max_curv,
                       const GenerateOptions& opts) {
    SeedConfiguration seed = seed_configuration(spec);
    detail::ScaledSeed scaled = detail::scale_seed(seed, spec, max_curv);
    int threads = resolved_threads(opts);

    if (!opts.force_wide_arithmetic) {
        try {
            return generate_impl<detail::Fast>(spec, seed, scaled, max_curv, opts,
                                               threads);
        } catch (const detail::OverflowSignal&) {
            // fall through to arbitrary precision
        }
        PackingResult res =
            generate_impl<detail::Wide>(spec, seed, scaled, max_curv, opts, threads);
        res.warnings.push_back("128-bit fast path overflowed; reran with wide arithmetic");
        return res;
    }
    return generate_impl<detail::Wide>(spec, seed, scaled, max_curv, opts, threads);
}

namespace {

void check_pair(const std::vector<Circle>& circles, std::size_t i, std::size_t j,
                TangencyReport& report) {
    const Circle& a = circles[i];
    const Circle& b = circles[j];
    ++report.pairs_checked;
    bool ok;
    if (a.is_line && b.is_line) {
        ok = a.cx == -b.cx && a.cy == -b.cy;
    } else if (a.is_line || b.is_line) {
        const Circle& line = a.is_line ? a : b;
        const Circle& circ = a.is_line ? b : a;
        ok = line_circle_tangent(line.cx, line.cy, line.line_offset, circ.curvature,
                                 circ.cx, circ.cy);
    } else {
        ok = circles_tangent(a.curvature, a.cx, a.cy, b.curvature, b.cx, b.cy);
    }
    if (!ok) {
        ++report.failures;
        std::ostringstream msg;
        msg << "pair (" << i << "," << j << ") fails the tangency identity";
        report.details.push_back(msg.str());
    }
}

}  // namespace

TangencyReport tangency_check(const std::vector<Circle>& circles,
                              const std::vector<std::array<int, 2>>& pairs) {
    TangencyReport report;
    for (const auto& p : pairs) {
        if (p[0] < 0 || p[1] < 0 || p[0] == p[1] ||
            static_cast<std::size_t>(p[0]) >= circles.size() ||
            static_cast<std::size_t>(p[1]) >= circles.size())
            throw ValidationError("tangency pair index out of range");
        check_pair(circles, static_cast<std::size_t>(p[0]),
                   static_cast<std::size_t>(p[1]), report);
    }
    return report;
}

TangencyReport tangency_check_all_pairs(const std::vector<Circle>& circles) {
    // Discover near-tangent pairs in floating point, then hold each one to the
    // exact identity.  A slightly perturbed list keeps its pairs discoverable
    // but fails the exact check, which is the point of the negative control.
    constexpr double tol = 1e-3;
    TangencyReport report;
    for (std::size_t i = 0; i < circles.size(); ++i) {
        for (std::size_t j = i + 1; j < circles.size(); ++j) {
            const Circle& a = circles[i];
            const Circle& b = circles[j];
            bool candidate;
            if (a.is_line && b.is_line) {
                candidate = std::abs(to_double(a.cx) + to_double(b.cx)) < tol &&
                            std::abs(to_double(a.cy) + to_double(b.cy)) < tol;
            } else if (a.is_line || b.is_line) {
                const Circle& line = a.is_line ? a : b;
                const Circle& circ = a.is_line ? b : a;
                double dist = to_double(line.cx) * to_double(circ.cx) +
                              to_double(line.cy) * to_double(circ.cy) -
                              to_double(line.line_offset);
                double r = 1.0 / std::abs(to_double(circ.curvature));
                candidate = std::abs(std::abs(dist) - r) < tol * r;
            } else {
                double dx = to_double(a.cx) - to_double(b.cx);
                double dy = to_double(a.cy) - to_double(b.cy);
                double k1 = to_double(a.curvature), k2 = to_double(b.curvature);
                double lhs = (dx * dx + dy * dy) * (k1 * k2) * (k1 * k2);
                double rhs = (k1 + k2) * (k1 + k2);
                candidate = std::abs(lhs - rhs) < tol * std::max(1.0, std::abs(rhs));
            }
            if (candidate) check_pair(circles, i, j, report);
        }
    }
    return report;
}

}  // namespace apollo
