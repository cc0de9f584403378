#pragma once

// Internal word-tree traversal shared by the packing generator, the census
// counters, and the almost-prime sieve.  States are quadruples of integer
// rows (k, wx, wy) where wx, wy carry the curvature-scaled centers times a
// fixed denominator-clearing factor, so the reflection action stays in
// integer arithmetic.  Non-backtracking words are in bijection with the
// circles beyond the seed, so the tree needs no deduplication.

#include <apollo/descartes.hpp>
#include <apollo/errors.hpp>
#include <apollo/packing.hpp>

#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <thread>
#include <type_traits>
#include <vector>

namespace apollo::detail {

using Wide = Int;
using Fast = __int128;

// Raised when the 128-bit fast path would leave its guarded range; the
// caller reruns the whole traversal with arbitrary precision.
struct OverflowSignal {};

// Integer seed rows plus the cutoff data every walk needs.
struct ScaledSeed {
    std::array<Int, 4> k, wx, wy;
    Int scale;      // common denominator cleared out of the center rows
    Int window_pd;  // period * scale, strip only
    Int kmax;       // accept a created circle iff its curvature <= kmax
    bool strip = false;
};

// Curvature cutoff: created curvatures are positive integers, so k < T is
// equivalent to k <= kmax with kmax = T-1 for integer T, floor(T) otherwise.
inline Int strict_cutoff(const Rat& max_curv) {
    if (den(max_curv) == 1) return num(max_curv) - 1;
    return floor_rat(max_curv);
}

ScaledSeed scale_seed(const SeedConfiguration& seed, const PackingSpec& spec,
                      const Rat& max_curv);

template <class S>
struct ScaledSeedT {
    std::array<S, 4> k, wx, wy;
    S scale, window_pd, kmax;
    bool strip = false;
};

template <class S>
inline S checked_cast(const Int& v) {
    if constexpr (std::is_same_v<S, Fast>) {
        static const Int lim = Int(1) << 100;
        if (v >= lim || v <= -lim) throw OverflowSignal{};
        return static_cast<Fast>(v);
    } else {
        return v;
    }
}

template <class S>
ScaledSeedT<S> to_scalar(const ScaledSeed& s) {
    ScaledSeedT<S> out;
    for (std::size_t i = 0; i < 4; ++i) {
        out.k[i] = checked_cast<S>(s.k[i]);
        out.wx[i] = checked_cast<S>(s.wx[i]);
        out.wy[i] = checked_cast<S>(s.wy[i]);
    }
    out.scale = checked_cast<S>(s.scale);
    out.window_pd = checked_cast<S>(s.window_pd);
    out.kmax = checked_cast<S>(s.kmax);
    out.strip = s.strip;
    return out;
}

template <class S>
struct WalkState {
    std::array<S, 4> k, wx, wy;
    // Emission identity of each member: seeds and serial-phase creations get
    // final indices, task-local creations get -(local_index+1) and are fixed
    // up after the parallel join.
    std::array<std::int32_t, 4> id{-1, -1, -1, -1};
    std::int32_t depth = 0;
    std::int8_t last = -1;
};

// Reflections can grow a value by at most a factor of seven per step, so a
// guard well below the 128-bit ceiling leaves room for one more step.
template <class S>
inline bool within_guard(const S& v) {
    if constexpr (std::is_same_v<S, Fast>) {
        static constexpr Fast lim = Fast(1) << 110;
        return v < lim && v > -lim;
    } else {
        (void)v;
        return true;
    }
}

template <class S>
inline void reflect_row(const WalkState<S>& st, int slot, S& nk, S& nwx, S& nwy) {
    S sk = 0, sx = 0, sy = 0;
    for (int j = 0; j < 4; ++j) {
        if (j == slot) continue;
        auto u = static_cast<std::size_t>(j);
        sk += st.k[u];
        sx += st.wx[u];
        sy += st.wy[u];
    }
    auto u = static_cast<std::size_t>(slot);
    nk = 2 * sk - st.k[u];
    nwx = 2 * sx - st.wx[u];
    nwy = 2 * sy - st.wy[u];
    if (!within_guard(nk) || !within_guard(nwx) || !within_guard(nwy))
        throw OverflowSignal{};
}

// Is the created circle's center inside the strip window [0, period)?
template <class S>
inline bool in_window(const S& nk, const S& nwx, const ScaledSeedT<S>& cfg) {
    return nwx >= 0 && nwx < cfg.window_pd * nk;
}

// Whether the subtree rooted at this move can still reach the window.
// After a move the whole subtree stays inside the region spanned by the three
// retained members: a half-channel [cx, +inf) or (-inf, cx] when the retained
// members are the two lines plus one (necessarily channel-spanning) circle,
// and the x-hull of the retained circles' disks otherwise.  Child regions
// nest inside parent regions, so pruning here is sound.
template <class S>
inline bool strip_region_alive(const WalkState<S>& st, int slot, const S& nk,
                               const S& nwx, const ScaledSeedT<S>& cfg) {
    int lines = 0;
    for (int j = 0; j < 4; ++j)
        if (j != slot && st.k[static_cast<std::size_t>(j)] == 0) ++lines;

    if (lines == 2) {
        // Half-channel left or right of the retained circle.
        for (int j = 0; j < 4; ++j) {
            auto u = static_cast<std::size_t>(j);
            if (j == slot || st.k[u] == 0) continue;
            bool right = nwx * st.k[u] >= st.wx[u] * nk;
            if (right) return st.wx[u] < cfg.window_pd * st.k[u];
            return st.wx[u] > 0;
        }
        return true;  // unreachable for valid states
    }

    bool all_left = true, all_right = true;
    for (int j = 0; j < 4; ++j) {
        auto u = static_cast<std::size_t>(j);
        if (j == slot || st.k[u] == 0) continue;
        if (st.wx[u] + cfg.scale > 0) all_left = false;
        if (st.wx[u] - cfg.scale < cfg.window_pd * st.k[u]) all_right = false;
    }
    return !(all_left || all_right);
}

class NodeBudget {
  public:
    NodeBudget(std::atomic<std::uint64_t>* total, std::uint64_t cap)
        : total_(total), cap_(cap) {}

    void tick() {
        if (++local_ >= kBatch) flush();
    }

    void flush() {
        if (local_ == 0) return;
        std::uint64_t seen = total_->fetch_add(local_) + local_;
        local_ = 0;
        if (cap_ != 0 && seen > cap_)
            throw BudgetExceededError("node budget exhausted");
    }

  private:
    static constexpr std::uint64_t kBatch = 4096;
    std::atomic<std::uint64_t>* total_;
    std::uint64_t cap_;
    std::uint64_t local_ = 0;
};

// Depth-first walk of the non-backtracking word tree below `st`.  For each
// accepted creation the visitor's on_create(state, slot) runs with the state
// already updated; its return value becomes the new member's id.
template <class S, class V>
void dfs_subtree(WalkState<S>& st, const ScaledSeedT<S>& cfg, V& vis,
                 NodeBudget& budget) {
    for (int i = 0; i < 4; ++i) {
        if (i == st.last) continue;
        S nk, nwx, nwy;
        reflect_row(st, i, nk, nwx, nwy);
        if (nk > cfg.kmax) continue;
        if (cfg.strip && !strip_region_alive(st, i, nk, nwx, cfg)) continue;
        budget.tick();

        auto u = static_cast<std::size_t>(i);
        S ok = st.k[u], ox = st.wx[u], oy = st.wy[u];
        std::int32_t oid = st.id[u];
        std::int8_t olast = st.last;

        st.k[u] = nk;
        st.wx[u] = nwx;
        st.wy[u] = nwy;
        st.last = static_cast<std::int8_t>(i);
        ++st.depth;
        st.id[u] = vis.on_create(st, i);

        dfs_subtree(st, cfg, vis, budget);

        st.k[u] = ok;
        st.wx[u] = ox;
        st.wy[u] = oy;
        st.id[u] = oid;
        st.last = olast;
        --st.depth;
    }
}

// Full traversal: a serial breadth-first prefix feeds `serial_visitor` and
// builds a frontier of independent subtrees, which then run on `threads`
// workers with one forked visitor per frontier entry.  Results are merged by
// the caller in frontier order, which keeps every output independent of the
// thread count.
template <class S, class V, class Fork>
void walk_tree(const ScaledSeedT<S>& cfg, int threads, std::uint64_t max_nodes,
               V& serial_visitor, Fork fork, std::vector<V>& task_visitors,
               std::uint64_t* nodes_seen) {
    if (threads < 1) threads = 1;
    std::atomic<std::uint64_t> total{0};

    WalkState<S> root;
    root.k = cfg.k;
    root.wx = cfg.wx;
    root.wy = cfg.wy;
    root.id = {0, 1, 2, 3};

    const std::size_t target = static_cast<std::size_t>(threads) * 16;
    std::deque<WalkState<S>> frontier;
    frontier.push_back(root);
    {
        NodeBudget budget(&total, max_nodes);
        while (!frontier.empty() && frontier.size() < target) {
            WalkState<S> st = frontier.front();
            frontier.pop_front();
            for (int i = 0; i < 4; ++i) {
                if (i == st.last) continue;
                S nk, nwx, nwy;
                reflect_row(st, i, nk, nwx, nwy);
                if (nk > cfg.kmax) continue;
                if (cfg.strip && !strip_region_alive(st, i, nk, nwx, cfg)) continue;
                budget.tick();
                WalkState<S> child = st;
                auto u = static_cast<std::size_t>(i);
                child.k[u] = nk;
                child.wx[u] = nwx;
                child.wy[u] = nwy;
                child.last = static_cast<std::int8_t>(i);
                ++child.depth;
                child.id[u] = serial_visitor.on_create(child, i);
                frontier.push_back(std::move(child));
            }
        }
        budget.flush();
    }

    task_visitors.clear();
    task_visitors.reserve(frontier.size());
    for (std::size_t t = 0; t < frontier.size(); ++t) task_visitors.push_back(fork());

    std::vector<WalkState<S>> tasks(frontier.begin(), frontier.end());
    if (threads == 1 || tasks.size() <= 1) {
        NodeBudget budget(&total, max_nodes);
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            dfs_subtree(tasks[t], cfg, task_visitors[t], budget);
        }
        budget.flush();
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                NodeBudget budget(&total, max_nodes);
                try {
                    for (;;) {
                        std::size_t t = next.fetch_add(1);
                        if (t >= tasks.size()) break;
                        dfs_subtree(tasks[t], cfg, task_visitors[t], budget);
                    }
                    budget.flush();
                } catch (...) {
                    errors[static_cast<std::size_t>(w)] = std::current_exception();
                    next.store(tasks.size());  // drain remaining work
                }
            });
        }
        for (auto& th : pool) th.join();
        // An overflow outranks other failures: the wide rerun may not hit them.
        for (auto& e : errors) {
            if (!e) continue;
            try {
                std::rethrow_exception(e);
            } catch (const OverflowSignal&) {
                throw;
            } catch (...) {
            }
        }
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    if (nodes_seen) *nodes_seen = total.load();
}

}  // namespace apollo::detail
