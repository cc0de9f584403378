#include <apollo/descartes.hpp>

#include <algorithm>

namespace apollo {

namespace {

template <class T>
T form_of(const std::array<T, 4>& v) {
    T sq = 0, s = 0;
    for (const auto& x : v) {
        sq += x * x;
        s += x;
    }
    return 2 * sq - s * s;
}

}  // namespace

Int eval_form(const Quadruple& v) { return form_of(v.k); }
Int eval_form(const std::array<Int, 4>& v) { return form_of(v); }
Rat eval_form(const std::array<Rat, 4>& v) { return form_of(v); }

Rat bilinear_form(const std::array<Rat, 4>& x, const std::array<Rat, 4>& y) {
    Rat dot = 0, sx = 0, sy = 0;
    for (int i = 0; i < 4; ++i) {
        dot += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
        sx += x[static_cast<std::size_t>(i)];
        sy += y[static_cast<std::size_t>(i)];
    }
    return 2 * dot - sx * sy;
}

static void check_index(int i) {
    if (i < 1 || i > 4) throw ValidationError("generator index must be 1..4");
}

Quadruple apply_generator(Quadruple v, int i) {
    check_index(i);
    Int s = v.k[0] + v.k[1] + v.k[2] + v.k[3];
    auto& ki = v[i - 1];
    ki = 2 * (s - ki) - ki;
    return v;
}

AugmentedQuadruple apply_generator_augmented(AugmentedQuadruple w, int i) {
    check_index(i);
    const auto j = static_cast<std::size_t>(i - 1);

    Int ks = 0;
    Rat xs = 0, ys = 0;
    for (int t = 0; t < 4; ++t) {
        auto u = static_cast<std::size_t>(t);
        ks += w.curv.k[u];
        xs += w.bx[u];
        ys += w.by[u];
    }
    Int new_k = 2 * (ks - w.curv.k[j]) - w.curv.k[j];
    Rat new_x = 2 * (xs - w.bx[j]) - w.bx[j];
    Rat new_y = 2 * (ys - w.by[j]) - w.by[j];

    w.curv.k[j] = new_k;
    w.bx[j] = new_x;
    w.by[j] = new_y;
    if (new_k == 0) {
        // The reflection recreated a line.  (new_x, new_y) is its outward
        // unit normal; the offset follows from tangency to any retained
        // circle A, which lies outside the half-plane: off = (n.w_A + 1)/k_A.
        if (new_x * new_x + new_y * new_y != 1)
            throw NotRepresentableError("degenerate member: curvature 0 but not a unit line normal");
        int a = -1;
        for (int t = 0; t < 4; ++t)
            if (t != i - 1 && w.curv.k[static_cast<std::size_t>(t)] != 0) a = t;
        if (a < 0) throw NotRepresentableError("no retained circle to place a recreated line");
        auto ua = static_cast<std::size_t>(a);
        w.line[j] = true;
        w.offset[j] = (new_x * w.bx[ua] + new_y * w.by[ua] + 1) / Rat(w.curv.k[ua]);
    } else {
        w.line[j] = false;
        w.offset[j] = 0;
    }
    return w;
}

bool augmented_invariants_ok(const AugmentedQuadruple& w) {
    if (eval_form(w.curv) != 0) return false;
    std::array<Rat, 4> kr;
    for (int i = 0; i < 4; ++i) kr[static_cast<std::size_t>(i)] = Rat(w.curv.k[static_cast<std::size_t>(i)]);
    if (eval_form(w.bx) != eval_form(w.by)) return false;
    if (bilinear_form(w.bx, w.by) != 0) return false;
    if (bilinear_form(kr, w.bx) != 0) return false;
    if (bilinear_form(kr, w.by) != 0) return false;
    return true;
}

Reduction reduce_to_root(Quadruple v) {
    if (eval_form(v) != 0)
        throw NonDescartesError("quadruple does not satisfy the Descartes form");
    if (v.k[0] == v.k[1] && v.k[1] == v.k[2] && v.k[2] == v.k[3])
        throw NonDescartesError("degenerate all-equal quadruple");

    Reduction out;
    // Each step applies the generator giving the largest strict decrease of
    // the coordinate sum.  For genuine Descartes quadruples this terminates
    // at the root; the sweep guard catches corrupted input.
    for (std::size_t steps = 0;; ++steps) {
        Int s = v.k[0] + v.k[1] + v.k[2] + v.k[3];
        int best = 0;
        Int best_sum = s;
        for (int i = 1; i <= 4; ++i) {
            auto j = static_cast<std::size_t>(i - 1);
            Int nk = 2 * (s - v.k[j]) - v.k[j];
            Int cand = s - v.k[j] + nk;
            if (cand < best_sum) {
                best_sum = cand;
                best = i;
            }
        }
        if (best == 0) {
            out.root = v;
            return out;
        }
        if (steps > 100000)
            throw NonTerminatingError("reduction exceeded the step guard");
        v = apply_generator(std::move(v), best);
        out.word.push_back(best);
    }
}

PartnerRoots descartes_partner(const Rat& k1, const Rat& k2, const Rat& k3) {
    PartnerRoots out;
    out.radicand = k1 * k2 + k2 * k3 + k3 * k1;
    out.sum = 2 * (k1 + k2 + k3);
    if (out.radicand < 0)
        throw NoRealSolutionError("no real tangent circle: k1k2+k2k3+k3k1 < 0");
    auto root = exact_sqrt(out.radicand);
    out.is_rational = root.has_value();
    if (out.is_rational) {
        Rat half = k1 + k2 + k3;
        out.plus = half + 2 * *root;
        out.minus = half - 2 * *root;
    }
    return out;
}

}  // namespace apollo
