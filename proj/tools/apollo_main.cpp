#include <apollo/census.hpp>
#include <apollo/packing.hpp>
#include <apollo/serialize.hpp>
#include <apollo/sieve.hpp>
#include <apollo/spectral.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);
    return parts;
}

apollo::Quadruple parse_root(const std::string& text) {
    auto parts = split(text, ',');
    if (parts.size() != 4)
        throw apollo::ValidationError("root needs four comma-separated integers");
    apollo::Quadruple q;
    for (std::size_t i = 0; i < 4; ++i) {
        try {
            q.k[i] = apollo::Int(parts[i]);
        } catch (const std::exception&) {
            throw apollo::ValidationError("root coordinate '" + parts[i] +
                                          "' is not an integer");
        }
    }
    return q;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const std::string& p : split(text, ',')) {
        char* end = nullptr;
        double v = std::strtod(p.c_str(), &end);
        if (p.empty() || end != p.c_str() + p.size())
            throw apollo::ValidationError(std::string("bad numeric value in ") + what);
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_ints(const std::string& text, const char* what) {
    std::vector<int> out;
    for (const std::string& p : split(text, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoi(p, &pos));
            if (pos != p.size()) throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw apollo::ValidationError(std::string("bad integer value in ") + what);
        }
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw apollo::IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw apollo::IoError("failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw apollo::IoError("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Every artifact gets a {out}.meta.json sidecar recording provenance that
// must stay byte-identical across thread counts.
void write_sidecar(const std::string& out_path, const std::string& command,
                   std::uint64_t seed, const std::vector<std::string>& warnings) {
    std::ostringstream meta;
    meta << "{\n";
    meta << "  \"version\": \"" << kVersion << "\",\n";
    meta << "  \"command\": \"" << command << "\",\n";
    meta << "  \"seed\": " << seed << ",\n";
    meta << "  \"warnings\": [";
    for (std::size_t i = 0; i < warnings.size(); ++i) {
        if (i) meta << ", ";
        meta << '"' << apollo::json_escape(warnings[i]) << '"';
    }
    meta << "]\n}\n";
    write_file(out_path + ".meta.json", meta.str());
}

struct CommonOpts {
    int threads = 0;
    std::uint64_t seed = 0;
    std::uint64_t max_nodes = 0;
    bool force_wide = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)")
        ->envname("APOLLO_THREADS");
    cmd->add_option("--seed", c.seed, "seed recorded in the metadata sidecar");
    cmd->add_option("--max-nodes", c.max_nodes,
                    "abort after this many traversal nodes (0 = unlimited)");
    cmd->add_flag("--force-wide", c.force_wide,
                  "skip the 128-bit fast path and use wide arithmetic");
}

std::vector<double> build_grid(const std::string& thresholds, double t_min,
                               double t_max, int ppd) {
    if (!thresholds.empty()) return parse_doubles(thresholds, "--thresholds");
    if (!(t_max > 0)) throw apollo::ValidationError("--t-max must be positive");
    if (t_min <= 0) t_min = t_max / 1000.0;
    return apollo::default_grid(t_min, t_max, ppd);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Apollonian circle packings: generation, counting, sieving"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a packing below a curvature bound");
    std::string gen_root = "-1,2,2,3", gen_max = "100", gen_out = "circles.csv";
    bool gen_check = false;
    CommonOpts gen_c;
    gen->add_option("--root", gen_root, "root quadruple k1,k2,k3,k4");
    gen->add_option("--max-curv", gen_max, "curvature cutoff (rational)");
    gen->add_option("--out", gen_out, "output CSV path");
    gen->add_flag("--check-tangency", gen_check, "verify recorded tangencies exactly");
    add_common(gen, gen_c);

    // ---- count ----
    auto* count = app.add_subcommand("count", "count orbit points below thresholds");
    std::string cnt_root = "-1,2,2,3", cnt_mode = "geometric", cnt_norm = "max";
    std::string cnt_thresholds, cnt_out = "counts.csv";
    double cnt_tmin = 0, cnt_tmax = 1000;
    int cnt_ppd = 24;
    CommonOpts cnt_c;
    count->add_option("--root", cnt_root, "root quadruple k1,k2,k3,k4");
    count->add_option("--mode", cnt_mode, "vector | augmented | geometric");
    count->add_option("--norm", cnt_norm, "max | euclid (vector mode)");
    count->add_option("--t-min", cnt_tmin, "smallest threshold (default t-max/1000)");
    count->add_option("--t-max", cnt_tmax, "largest threshold");
    count->add_option("--points-per-decade", cnt_ppd, "grid density");
    count->add_option("--thresholds", cnt_thresholds,
                      "explicit comma-separated thresholds (overrides the grid)");
    count->add_option("--out", cnt_out, "output CSV path");
    add_common(count, cnt_c);

    // ---- fit ----
    auto* fit = app.add_subcommand("fit", "fit c*T^alpha to a counts table");
    std::string fit_in = "counts.csv", fit_out = "fit.json";
    std::string fit_root = "-1,2,2,3", fit_mode = "geometric", fit_norm = "max";
    double fit_lo = 0, fit_hi = 0;
    CommonOpts fit_c;
    fit->add_option("--in", fit_in, "counts CSV produced by `count`");
    fit->add_option("--out", fit_out, "output JSON path");
    fit->add_option("--root", fit_root, "root recorded in the report");
    fit->add_option("--mode", fit_mode, "mode recorded in the report");
    fit->add_option("--norm", fit_norm, "norm recorded in the report");
    fit->add_option("--window-lo", fit_lo, "fit window lower T (default top two decades)");
    fit->add_option("--window-hi", fit_hi, "fit window upper T");
    add_common(fit, fit_c);

    // ---- boxdim ----
    auto* boxdim = app.add_subcommand("boxdim", "box-counting dimension of the residual set");
    std::string box_root = "-1,2,2,3", box_max = "10000", box_in, box_out = "boxdim.json";
    std::string box_eps, box_frame;
    int box_coarse = 4, box_fine = 9;
    CommonOpts box_c;
    boxdim->add_option("--root", box_root, "root quadruple (generates the packing)");
    boxdim->add_option("--max-curv", box_max, "curvature cutoff for generation");
    boxdim->add_option("--in", box_in, "read circles from CSV instead of generating");
    boxdim->add_option("--epsilons", box_eps, "explicit comma-separated box sizes");
    boxdim->add_option("--coarse-power", box_coarse, "largest box 2^-p");
    boxdim->add_option("--fine-power", box_fine, "smallest box 2^-p");
    boxdim->add_option("--frame", box_frame, "x0,y0,side frame override (rationals)");
    boxdim->add_option("--out", box_out, "output JSON path");
    add_common(boxdim, box_c);

    // ---- sieve ----
    auto* sieve = app.add_subcommand("sieve", "almost-prime census over witness coordinates");
    std::string sv_root = "-1,2,2,3", sv_coords = "1", sv_thresholds, sv_out = "sieve.csv";
    double sv_tmin = 0, sv_tmax = 1000, sv_alpha = 1.30568;
    int sv_ppd = 24, sv_r = 3;
    CommonOpts sv_c;
    sieve->add_option("--root", sv_root, "root quadruple k1,k2,k3,k4");
    sieve->add_option("--coords", sv_coords, "1-based witness coordinates, e.g. 1,2,3,4");
    sieve->add_option("--r", sv_r, "almost-prime bound on Omega");
    sieve->add_option("--alpha-ref", sv_alpha, "reference exponent for normalization");
    sieve->add_option("--t-min", sv_tmin, "smallest threshold (default t-max/1000)");
    sieve->add_option("--t-max", sv_tmax, "largest threshold");
    sieve->add_option("--points-per-decade", sv_ppd, "grid density");
    sieve->add_option("--thresholds", sv_thresholds, "explicit thresholds");
    sieve->add_option("--out", sv_out, "output CSV path");
    add_common(sieve, sv_c);

    // ---- spectral ----
    auto* spectral = app.add_subcommand("spectral", "run the special-function property suite");
    apollo::spectral::SpectralParams sp;
    std::string sp_out;
    spectral->add_option("--n", sp.n, "dimension, 2 or 3");
    spectral->add_option("--delta", sp.delta, "growth exponent");
    spectral->add_option("--s1", sp.s1, "secondary eigenvalue parameter");
    spectral->add_option("--s0", sp.s0, "spectral gap");
    spectral->add_option("--q", sp.q, "admissibility exponent");
    spectral->add_option("--out", sp_out, "optional JSON report path");

    // ---- render ----
    auto* render = app.add_subcommand("render", "render a circles CSV as SVG");
    std::string rd_in = "circles.csv", rd_out = "packing.svg";
    int rd_size = 800;
    render->add_option("--in", rd_in, "input circles CSV");
    render->add_option("--out", rd_out, "output SVG path");
    render->add_option("--size", rd_size, "image width in pixels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*gen) {
            auto spec = apollo::make_packing_spec(parse_root(gen_root));
            apollo::GenerateOptions go;
            go.max_nodes = gen_c.max_nodes;
            go.threads = gen_c.threads;
            go.force_wide_arithmetic = gen_c.force_wide;
            auto res = apollo::generate(spec, apollo::parse_rational(gen_max), go);
            if (gen_check) {
                auto rep = apollo::tangency_check(res.circles, res.tangencies);
                if (rep.failures != 0)
                    throw std::runtime_error("tangency verification failed on " +
                                             std::to_string(rep.failures) + " pairs");
                std::cout << "tangencies verified: " << rep.pairs_checked << "\n";
            }
            std::ostringstream body;
            apollo::write_circles_csv(body, res.circles);
            write_file(gen_out, body.str());
            write_sidecar(gen_out, "gen", gen_c.seed, res.warnings);
            std::cout << "circles: " << res.circles.size()
                      << " nodes: " << res.nodes_visited << "\n";
        } else if (*count) {
            apollo::CountMode mode;
            if (cnt_mode == "vector") mode = apollo::CountMode::VectorOrbit;
            else if (cnt_mode == "augmented") mode = apollo::CountMode::AugmentedOrbit;
            else if (cnt_mode == "geometric") mode = apollo::CountMode::Geometric;
            else throw apollo::ValidationError("unknown mode '" + cnt_mode + "'");
            apollo::NormKind norm;
            if (cnt_norm == "max") norm = apollo::NormKind::Max;
            else if (cnt_norm == "euclid") norm = apollo::NormKind::Euclid;
            else throw apollo::ValidationError("unknown norm '" + cnt_norm + "'");
            apollo::CountOptions co;
            co.max_nodes = cnt_c.max_nodes;
            co.threads = cnt_c.threads;
            co.force_wide_arithmetic = cnt_c.force_wide;
            auto grid = build_grid(cnt_thresholds, cnt_tmin, cnt_tmax, cnt_ppd);
            auto table = apollo::count_table(parse_root(cnt_root), grid, mode, norm, co);
            std::ostringstream body;
            apollo::write_counts_csv(body, table);
            write_file(cnt_out, body.str());
            write_sidecar(cnt_out, "count", cnt_c.seed, table.warnings);
            std::cout << "rows: " << table.rows.size() << " top: N("
                      << apollo::format_double(table.rows.back().first)
                      << ") = " << table.rows.back().second << "\n";
        } else if (*fit) {
            std::istringstream in(read_file(fit_in));
            auto table = apollo::read_counts_csv(in);
            if (fit_mode == "vector") table.mode = apollo::CountMode::VectorOrbit;
            else if (fit_mode == "augmented") table.mode = apollo::CountMode::AugmentedOrbit;
            else if (fit_mode == "geometric") table.mode = apollo::CountMode::Geometric;
            else throw apollo::ValidationError("unknown mode '" + fit_mode + "'");
            if (fit_norm == "max") table.norm = apollo::NormKind::Max;
            else if (fit_norm == "euclid") table.norm = apollo::NormKind::Euclid;
            else throw apollo::ValidationError("unknown norm '" + fit_norm + "'");
            table.root = parse_root(fit_root);
            std::pair<double, double> window;
            if (fit_lo > 0 && fit_hi > 0) window = {fit_lo, fit_hi};
            else window = apollo::default_fit_window(table);
            auto result = apollo::fit_exponent(table, window);
            write_file(fit_out, apollo::fit_report_json(result, table));
            write_sidecar(fit_out, "fit", fit_c.seed, result.warnings);
            std::cout << "alpha: " << apollo::format_double(result.alpha)
                      << " c: " << apollo::format_double(result.c) << "\n";
        } else if (*boxdim) {
            std::vector<apollo::Circle> circles;
            std::vector<std::string> warnings;
            if (!box_in.empty()) {
                std::istringstream in(read_file(box_in));
                circles = apollo::read_circles_csv(in);
            } else {
                auto spec = apollo::make_packing_spec(parse_root(box_root));
                apollo::GenerateOptions go;
                go.max_nodes = box_c.max_nodes;
                go.threads = box_c.threads;
                go.force_wide_arithmetic = box_c.force_wide;
                auto res = apollo::generate(spec, apollo::parse_rational(box_max), go);
                circles = std::move(res.circles);
                warnings = std::move(res.warnings);
            }
            std::vector<apollo::Rat> epsilons;
            if (!box_eps.empty()) {
                for (const std::string& p : split(box_eps, ','))
                    epsilons.push_back(apollo::parse_rational(p));
            } else {
                if (box_coarse > box_fine)
                    throw apollo::ValidationError("--coarse-power must not exceed --fine-power");
                for (int p = box_coarse; p <= box_fine; ++p)
                    epsilons.push_back(apollo::Rat(1) / apollo::Rat(apollo::Int(1) << p));
            }
            apollo::BoxFrame frame;
            bool has_frame = !box_frame.empty();
            if (has_frame) {
                auto parts = split(box_frame, ',');
                if (parts.size() != 3)
                    throw apollo::ValidationError("--frame needs x0,y0,side");
                frame.x0 = apollo::parse_rational(parts[0]);
                frame.y0 = apollo::parse_rational(parts[1]);
                frame.side = apollo::parse_rational(parts[2]);
            }
            auto result = apollo::box_dimension(circles, epsilons,
                                                has_frame ? &frame : nullptr);
            std::ostringstream body;
            body << "{\n";
            body << "  \"alpha\": " << apollo::format_double(result.fit.alpha) << ",\n";
            body << "  \"c\": " << apollo::format_double(result.fit.c) << ",\n";
            body << "  \"residual\": " << apollo::format_double(result.fit.residual)
                 << ",\n";
            body << "  \"window\": [" << apollo::format_double(result.fit.window.first)
                 << ", " << apollo::format_double(result.fit.window.second) << "],\n";
            body << "  \"rows\": [";
            for (std::size_t i = 0; i < result.rows.size(); ++i) {
                if (i) body << ", ";
                body << "[" << apollo::format_double(result.rows[i].first) << ", "
                     << result.rows[i].second << "]";
            }
            body << "]\n}\n";
            write_file(box_out, body.str());
            for (const auto& w : result.fit.warnings) warnings.push_back(w);
            write_sidecar(box_out, "boxdim", box_c.seed, warnings);
            std::cout << "alpha: " << apollo::format_double(result.fit.alpha) << "\n";
        } else if (*sieve) {
            apollo::CountOptions co;
            co.max_nodes = sv_c.max_nodes;
            co.threads = sv_c.threads;
            co.force_wide_arithmetic = sv_c.force_wide;
            auto grid = build_grid(sv_thresholds, sv_tmin, sv_tmax, sv_ppd);
            auto coords = parse_ints(sv_coords, "--coords");
            auto report = apollo::almost_prime_census(parse_root(sv_root), grid,
                                                      coords, sv_r, sv_alpha, co);
            std::ostringstream body;
            apollo::write_sieve_csv(body, report);
            write_file(sv_out, body.str());
            write_sidecar(sv_out, "sieve", sv_c.seed, report.warnings);
            std::cout << "rows: " << report.rows.size() << " top count: "
                      << report.rows.back().count << "\n";
        } else if (*spectral) {
            auto checks = apollo::spectral::self_check(sp);
            bool all = true;
            for (const auto& c : checks) {
                all = all && c.pass;
                std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name
                          << "  residual=" << apollo::format_double(c.residual)
                          << "  tolerance=" << apollo::format_double(c.tolerance)
                          << "\n";
            }
            if (!sp_out.empty()) {
                std::ostringstream body;
                body << "{\n  \"checks\": [";
                for (std::size_t i = 0; i < checks.size(); ++i) {
                    if (i) body << ",";
                    body << "\n    {\"name\": \"" << apollo::json_escape(checks[i].name)
                         << "\", \"pass\": " << (checks[i].pass ? "true" : "false")
                         << ", \"residual\": "
                         << apollo::format_double(checks[i].residual)
                         << ", \"tolerance\": "
                         << apollo::format_double(checks[i].tolerance) << "}";
                }
                body << "\n  ]\n}\n";
                write_file(sp_out, body.str());
                write_sidecar(sp_out, "spectral", 0, {});
            }
            if (!all) return 1;
        } else if (*render) {
            std::istringstream in(read_file(rd_in));
            auto circles = apollo::read_circles_csv(in);
            write_file(rd_out, apollo::render_svg(circles, rd_size));
            std::cout << "rendered " << circles.size() << " circles\n";
        }
    } catch (const apollo::BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const apollo::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const apollo::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const apollo::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const apollo::NotRepresentableError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const apollo::NonTerminatingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
