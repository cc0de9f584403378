#include <apollo/serialize.hpp>

#include <apollo/errors.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace apollo {

std::string format_double(double v) {
    if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

int parse_int_field(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError(std::string("malformed integer field for ") + what);
    }
}

std::uint64_t parse_u64_field(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw IoError(std::string("malformed count field for ") + what);
    }
}

double parse_double_field(const std::string& s, const char* what) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw IoError(std::string("malformed numeric field for ") + what);
    return v;
}

}  // namespace

void write_circles_csv(std::ostream& out, const std::vector<Circle>& circles) {
    out << "curvature,center_x,center_y,radius,depth\n";
    for (const Circle& c : circles) {
        out << rat_to_string(c.curvature) << ',' << rat_to_string(c.cx) << ','
            << rat_to_string(c.cy) << ',';
        if (c.is_line)
            out << rat_to_string(c.line_offset);
        else
            out << format_double(to_double(c.radius()));
        out << ',' << c.depth << '\n';
    }
}

std::vector<Circle> read_circles_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("curvature", 0) != 0)
        throw IoError("missing circles csv header");
    std::vector<Circle> out;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != 5) throw IoError("circles csv row needs five fields");
        Circle c;
        try {
            c.curvature = parse_rational(f[0]);
            c.cx = parse_rational(f[1]);
            c.cy = parse_rational(f[2]);
            if (c.curvature == 0) {
                c.is_line = true;
                c.line_offset = parse_rational(f[3]);
            }
        } catch (const ValidationError& e) {
            throw IoError(std::string("circles csv: ") + e.what());
        }
        c.depth = parse_int_field(f[4], "depth");
        out.push_back(std::move(c));
    }
    return out;
}

void write_counts_csv(std::ostream& out, const CountTable& table) {
    out << "T,N\n";
    for (const auto& [t, n] : table.rows)
        out << format_double(t) << ',' << n << '\n';
}

CountTable read_counts_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("T,N", 0) != 0)
        throw IoError("missing counts csv header");
    CountTable table;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto f = split_csv_line(line);
        if (f.size() != 2) throw IoError("counts csv row needs two fields");
        table.rows.emplace_back(parse_double_field(f[0], "T"),
                                parse_u64_field(f[1], "N"));
    }
    return table;
}

void write_sieve_csv(std::ostream& out, const SieveReport& report) {
    out << "T,R,i,count,normalized\n";
    for (const SieveRow& r : report.rows)
        out << format_double(r.T) << ',' << r.R << ',' << r.i << ',' << r.count
            << ',' << format_double(r.normalized) << '\n';
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
                    out += buf;
                } else {
                    out.push_back(ch);
                }
        }
    }
    return out;
}

std::string fit_report_json(const FitResult& fit, const CountTable& table) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"c\": " << format_double(fit.c) << ",\n";
    out << "  \"alpha\": " << format_double(fit.alpha) << ",\n";
    out << "  \"residual\": " << format_double(fit.residual) << ",\n";
    out << "  \"window\": [" << format_double(fit.window.first) << ", "
        << format_double(fit.window.second) << "],\n";
    out << "  \"mode\": \"" << to_string(table.mode) << "\",\n";
    out << "  \"norm\": \"" << to_string(table.norm) << "\",\n";
    out << "  \"root\": [" << table.root.k[0] << ", " << table.root.k[1] << ", "
        << table.root.k[2] << ", " << table.root.k[3] << "]";
    std::vector<std::string> warnings = fit.warnings;
    warnings.insert(warnings.end(), table.warnings.begin(), table.warnings.end());
    if (!warnings.empty()) {
        out << ",\n  \"warnings\": [";
        for (std::size_t i = 0; i < warnings.size(); ++i) {
            if (i) out << ", ";
            out << '"' << json_escape(warnings[i]) << '"';
        }
        out << "]";
    }
    out << "\n}\n";
    return out.str();
}

namespace {

std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.8g", v);
    return buf;
}

}  // namespace

std::string render_svg(const std::vector<Circle>& circles, int size) {
    if (size < 16) throw ValidationError("svg size too small");
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool seen = false;
    for (const Circle& c : circles) {
        if (c.is_line) continue;
        double r = 1.0 / std::abs(to_double(c.curvature));
        double cx = to_double(c.cx), cy = to_double(c.cy);
        if (!seen) {
            x0 = cx - r;
            x1 = cx + r;
            y0 = cy - r;
            y1 = cy + r;
            seen = true;
        } else {
            x0 = std::min(x0, cx - r);
            x1 = std::max(x1, cx + r);
            y0 = std::min(y0, cy - r);
            y1 = std::max(y1, cy + r);
        }
    }
    for (const Circle& c : circles) {
        if (!c.is_line) continue;
        double off = to_double(c.line_offset);
        double nx = to_double(c.cx), ny = to_double(c.cy);
        if (nx == 0) {
            double y = off / ny;
            if (!seen) {
                y0 = y - 1;
                y1 = y + 1;
                x0 = -1;
                x1 = 1;
                seen = true;
            } else {
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        } else if (ny == 0) {
            double x = off / nx;
            if (!seen) {
                x0 = x - 1;
                x1 = x + 1;
                y0 = -1;
                y1 = 1;
                seen = true;
            } else {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
            }
        }
    }
    if (!seen) throw ValidationError("nothing to render");

    double w = x1 - x0, h = y1 - y0;
    double pad = 0.05 * std::max(w, h);
    x0 -= pad;
    y0 -= pad;
    w += 2 * pad;
    h += 2 * pad;
    double stroke = std::max(w, h) / size;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << svg_num(size * h / w) << "\" viewBox=\"" << svg_num(x0)
        << " " << svg_num(y0) << " " << svg_num(w) << " " << svg_num(h) << "\">\n";
    // Flip the y axis so the upper half plane points up.
    out << "<g transform=\"matrix(1 0 0 -1 0 " << svg_num(2 * y0 + h)
        << ")\" fill=\"none\" stroke=\"black\" stroke-width=\"" << svg_num(stroke)
        << "\">\n";
    for (const Circle& c : circles) {
        if (c.is_line) {
            double off = to_double(c.line_offset);
            double nx = to_double(c.cx), ny = to_double(c.cy);
            if (nx == 0) {
                double y = off / ny;
                out << "<rect x=\"" << svg_num(x0) << "\" y=\"" << svg_num(y - stroke / 2)
                    << "\" width=\"" << svg_num(w) << "\" height=\"" << svg_num(stroke)
                    << "\" fill=\"black\" stroke=\"none\"/>\n";
            } else if (ny == 0) {
                double x = off / nx;
                out << "<rect x=\"" << svg_num(x - stroke / 2) << "\" y=\"" << svg_num(y0)
                    << "\" width=\"" << svg_num(stroke) << "\" height=\"" << svg_num(h)
                    << "\" fill=\"black\" stroke=\"none\"/>\n";
            }
            continue;
        }
        double r = 1.0 / std::abs(to_double(c.curvature));
        out << "<circle cx=\"" << svg_num(to_double(c.cx)) << "\" cy=\""
            << svg_num(to_double(c.cy)) << "\" r=\"" << svg_num(r) << "\"/>\n";
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace apollo
