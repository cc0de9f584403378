#pragma once

#include <apollo/packing.hpp>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace apollo {

enum class CountMode { VectorOrbit, AugmentedOrbit, Geometric };
enum class NormKind { Max, Euclid };

const char* to_string(CountMode m);
const char* to_string(NormKind n);

struct CountTable {
    std::vector<std::pair<double, std::uint64_t>> rows;  // (T, N), T increasing
    CountMode mode = CountMode::AugmentedOrbit;
    NormKind norm = NormKind::Max;
    Quadruple root;
    std::vector<std::string> warnings;
};

struct CountOptions {
    std::uint64_t max_nodes = 0;
    int threads = 0;
    bool force_wide_arithmetic = false;
};

// Orbit points below the cutoff, mode-dependent:
//   VectorOrbit    distinct curvature vectors v with ||v|| < T (hash dedup)
//   AugmentedOrbit circles created beyond the seed, curvature < T; equals the
//                  number of non-backtracking words thanks to the word/circle
//                  bijection, so no dedup is needed
//   Geometric      all circles of the packing with curvature < T
// The norm applies to VectorOrbit only.  Strip roots count one period window.
std::uint64_t count_orbit(const Quadruple& root, double T, CountMode mode,
                          NormKind norm = NormKind::Max,
                          const CountOptions& opts = {});

// One traversal accumulating every threshold; identical to calling
// count_orbit per row.  Grid must be strictly increasing.
CountTable count_table(const Quadruple& root, const std::vector<double>& grid,
                       CountMode mode, NormKind norm = NormKind::Max,
                       const CountOptions& opts = {});

// Reference counter: plain breadth-first search over quadruple states with a
// hash set, deduplicating circles geometrically.  Slow; exists to check the
// pruned traversal against an implementation with no shared pruning logic.
std::uint64_t count_circles_bruteforce(const Quadruple& root, double T);

// Geometric spacing, points_per_decade rows per factor of 10.
std::vector<double> default_grid(double t_min, double t_max, int points_per_decade = 24);

struct FitResult {
    double c = 0;         // lead coefficient, exp(intercept)
    double alpha = 0;     // fitted exponent, the log-log slope
    double residual = 0;  // RMS of log residuals
    std::pair<double, double> window{0, 0};
    std::vector<std::string> warnings;
};

// Ordinary least squares of log N against log T over rows with
// window.first <= T <= window.second.  Needs >= 3 rows, all N > 0.
FitResult fit_exponent(const CountTable& table, std::pair<double, double> window);

// Convenience: window spanning the top two decades of the table.
std::pair<double, double> default_fit_window(const CountTable& table);

struct BoxDimensionResult {
    FitResult fit;
    std::vector<std::pair<double, std::uint64_t>> rows;  // (epsilon, boxes met)
};

// Box-counting estimate of the residual set dimension.  The region is the
// bounding disk (or the given frame square) minus the open interiors of the
// positive-curvature disks; a box is excluded when its four corners land
// strictly inside one open disk (convexity) or strictly outside the closed
// bounding disk, all decided in exact rational arithmetic.
// `frame` overrides the default frame (circumscribed square of the bounding
// circle) with an axis-aligned square [x0, x0+side] x [y0, y0+side].
struct BoxFrame {
    Rat x0, y0, side;
};
BoxDimensionResult box_dimension(const std::vector<Circle>& circles,
                                 const std::vector<Rat>& epsilons,
                                 const BoxFrame* frame = nullptr);

// The counting error exponent alpha - 2(alpha - s1)/63.
// Requires 1 < s1 < alpha < 2.
double error_exponent_main(double alpha, double s1);

}  // namespace apollo
