#pragma once

#include <apollo/census.hpp>
#include <apollo/packing.hpp>
#include <apollo/sieve.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace apollo {

// Shortest decimal that round-trips a double (up to 17 significant digits).
std::string format_double(double v);

// circles.csv: header "curvature,center_x,center_y,radius,depth".
// Curvature and centers are exact rational strings ("p/q" or integers).
// Radius is decimal; lines write their normal in the center columns and the
// line offset in the radius column.
void write_circles_csv(std::ostream& out, const std::vector<Circle>& circles);
std::vector<Circle> read_circles_csv(std::istream& in);

// counts.csv: header "T,N".
void write_counts_csv(std::ostream& out, const CountTable& table);
CountTable read_counts_csv(std::istream& in);

// sieve.csv: header "T,R,i,count,normalized".
void write_sieve_csv(std::ostream& out, const SieveReport& report);

// Fit report with keys {"c","alpha","residual","window","mode","norm","root"}.
std::string fit_report_json(const FitResult& fit, const CountTable& table);

// One SVG circle element per circle, deterministic order; strip lines render
// as thin full-width rectangles.  `size` is the pixel width of the image.
std::string render_svg(const std::vector<Circle>& circles, int size = 800);

// Minimal JSON string escaping for the hand-rolled emitters.
std::string json_escape(const std::string& s);

}  // namespace apollo
