#pragma once

#include <apollo/errors.hpp>
#include <apollo/numeric.hpp>

#include <array>
#include <vector>

namespace apollo {

// Four signed curvatures of mutually tangent circles.  A valid configuration
// satisfies Q(k) = 2*sum(k_i^2) - (sum k_i)^2 == 0.  Negative curvature marks
// the bounding circle (its interior is the complement of its disk), zero a
// straight line.
struct Quadruple {
    std::array<Int, 4> k{};

    Quadruple() = default;
    Quadruple(Int a, Int b, Int c, Int d) : k{std::move(a), std::move(b), std::move(c), std::move(d)} {}

    Int& operator[](int i) { return k[static_cast<std::size_t>(i)]; }
    const Int& operator[](int i) const { return k[static_cast<std::size_t>(i)]; }

    bool operator==(const Quadruple&) const = default;
};

Int eval_form(const Quadruple& v);

// Polarization of the form: B(x,y) = 2*sum(x_i y_i) - (sum x)(sum y),
// so that Q(x+y) = Q(x) + Q(y) + 2 B(x,y).
Int eval_form(const std::array<Int, 4>& v);
Rat eval_form(const std::array<Rat, 4>& v);
Rat bilinear_form(const std::array<Rat, 4>& x, const std::array<Rat, 4>& y);

// Replace coordinate i (1-based) by the second Descartes solution:
// k_i -> 2(sum of the other three) - k_i.  Involution; preserves the form.
Quadruple apply_generator(Quadruple v, int i);

// Curvatures plus the curvature-scaled centers (bx_j, by_j) = k_j * z_j.
// A line member stores its unit normal in (bx, by) instead; the normal points
// away from the packing, into the line's own half-plane {n.x >= offset}, and
// the offset rides along in an auxiliary slot.  All rows transform linearly
// under the same generator matrices, which is the point of this encoding.
struct AugmentedQuadruple {
    Quadruple curv;
    std::array<Rat, 4> bx{}, by{};
    std::array<bool, 4> line{};
    std::array<Rat, 4> offset{};

    bool operator==(const AugmentedQuadruple&) const = default;
};

// Same reflection applied to the curvature row and both center rows.  When
// the new curvature is zero the member is a line; its normal comes out of the
// linear action and the offset is recovered from tangency to a retained
// circle (retained circles lie outside the line's half-plane).
AugmentedQuadruple apply_generator_augmented(AugmentedQuadruple w, int i);

// Q(k) == 0, Q(bx) == Q(by), and all cross pairings of the three rows vanish.
// These hold for genuine circle configurations and are preserved exactly by
// the generator action (the action is orthogonal for Q on each column).
bool augmented_invariants_ok(const AugmentedQuadruple& w);

struct Reduction {
    Quadruple root;
    std::vector<int> word;  // generators applied to the input, in order
};

// Walk v down to the orbit representative that no generator can shrink
// further (minimal coordinate sum).  Applying the reversed word to the root
// reproduces v.  Throws NonDescartesError if Q(v) != 0 or v is degenerate,
// NonTerminatingError if the sum stops decreasing away from a root.
Reduction reduce_to_root(Quadruple v);

struct PartnerRoots {
    Rat radicand;      // k1 k2 + k2 k3 + k3 k1
    bool is_rational;  // radicand is a perfect rational square
    Rat plus, minus;   // the two solutions, valid when is_rational

    // Always representable: the two solutions sum to 2(k1+k2+k3).
    Rat sum;
};

// Both curvatures completing (k1,k2,k3) to a Descartes quadruple:
// k4 = (k1+k2+k3) +- 2*sqrt(k1 k2 + k2 k3 + k3 k1).
// Throws NoRealSolutionError when the radicand is negative.
PartnerRoots descartes_partner(const Rat& k1, const Rat& k2, const Rat& k3);

}  // namespace apollo
