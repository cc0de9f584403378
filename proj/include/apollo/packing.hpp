#pragma once

#include <apollo/descartes.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace apollo {

enum class PackingKind { Bounded, Strip };

struct PackingSpec {
    Quadruple root;
    PackingKind kind = PackingKind::Bounded;
    Rat period;  // horizontal translation length, strip only
};

// Classify and validate a root quadruple.  Bounded roots have exactly one
// negative coordinate; strip roots are (0,0,c,c) with c > 0, giving two
// parallel lines at distance 2/c and period 2/c.
PackingSpec make_packing_spec(const Quadruple& root);

struct Circle {
    Rat curvature;  // 0 for a line
    Rat cx, cy;     // center, or the line's unit normal
    int depth = 0;  // 0 for seed members, else word length that created it
    bool is_line = false;
    Rat line_offset;  // line is {p : n.p == line_offset}

    Rat radius() const;  // 1/|curvature|; throws DomainError on a line
};

struct SeedConfiguration {
    std::array<Circle, 4> circles;
    AugmentedQuadruple aug;
};

// Canonical exact placement of the four seed circles.  Bounded packings put
// the bounding circle at the origin, the largest inner circle on the negative
// x axis, and break the remaining mirror symmetry by y >= 0.  Strip packings
// use the lines y=0 and y=period with circles at (0, period/2) and
// (period, period/2).  Throws NotRepresentableError when the placement needs
// an irrational coordinate.
SeedConfiguration seed_configuration(const PackingSpec& spec);

struct GenerateOptions {
    std::uint64_t max_nodes = 0;  // 0 means unlimited
    int threads = 0;              // 0 means hardware concurrency
    bool force_wide_arithmetic = false;  // skip the 128-bit fast path
};

struct PackingResult {
    // Sorted by (curvature, cx, cy); lines first (curvature 0 sorts below
    // positives, above the negative bounding curvature).
    std::vector<Circle> circles;
    // Index pairs into `circles` recorded tangent during generation: the six
    // seed pairings plus, for each created circle, its three parents (only
    // pairs whose endpoints both survive the strip window filter).
    std::vector<std::array<int, 2>> tangencies;
    std::vector<std::string> warnings;
    std::uint64_t nodes_visited = 0;
};

// Every circle of the packing with curvature < max_curv, each exactly once.
// Strip packings are restricted to one period window: circles whose center x
// lies in [0, period), plus the two lines.  Throws BudgetExceededError when
// max_nodes is hit.
PackingResult generate(const PackingSpec& spec, const Rat& max_curv,
                       const GenerateOptions& opts = {});

struct TangencyReport {
    std::size_t pairs_checked = 0;
    std::size_t failures = 0;
    std::vector<std::string> details;  // one entry per failing pair
};

// Check the exact cleared-denominator tangency identity for each given pair:
//   circle/circle: |c1-c2|^2 (k1 k2)^2 == (k1+k2)^2   (signed curvatures)
//   line/circle:   (n.c k - offset k)^2 == 1
//   line/line:     normals exactly opposite
TangencyReport tangency_check(const std::vector<Circle>& circles,
                              const std::vector<std::array<int, 2>>& pairs);

// Discover tangent pairs by testing all O(n^2) combinations, then check
// them.  Intended for small lists and negative controls.
TangencyReport tangency_check_all_pairs(const std::vector<Circle>& circles);

}  // namespace apollo
