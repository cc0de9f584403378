#include <apollo/spectral.hpp>

#include <apollo/errors.hpp>

#include <algorithm>
#include <cmath>
#include <complex>

namespace apollo::spectral {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
    if (!ok) throw DomainError(msg);
}

void require_dimension(int n) {
    require(n == 2 || n == 3, "dimension must be 2 or 3");
}

void require_spectral(int n, double s, const char* what) {
    require_dimension(n);
    require((n - 1) / 2.0 < s && s < n - 1, what);
}

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double log_gamma(double x) {
    require(x > 0, "log_gamma needs a positive argument");
    return std::lgamma(x);
}

double legendre_P(int ell, double t) {
    require(ell >= 0, "degree must be nonnegative");
    require(std::abs(t) <= 1, "Legendre argument must lie in [-1, 1]");
    if (ell == 0) return 1;
    double pm2 = 1, pm1 = t;
    for (int l = 2; l <= ell; ++l) {
        double p = ((2 * l - 1) * t * pm1 - (l - 1) * pm2) / l;
        pm2 = pm1;
        pm1 = p;
    }
    return pm1;
}

double legendre_P_derivative(int ell, double t) {
    require(ell >= 0, "degree must be nonnegative");
    require(std::abs(t) <= 1, "Legendre argument must lie in [-1, 1]");
    if (ell == 0) return 0;
    if (t == 1 || t == -1) {
        double v = ell * (ell + 1) / 2.0;
        return (t == 1 || ell % 2 == 1) ? v : -v;
    }
    return ell * (legendre_P(ell - 1, t) - t * legendre_P(ell, t)) / (1 - t * t);
}

double legendre_P_assoc(int ell, int m, double x) {
    require(ell >= 0, "degree must be nonnegative");
    require(std::abs(m) <= ell, "order must satisfy |m| <= degree");
    require(std::abs(x) <= 1, "argument must lie in [-1, 1]");
    if (m < 0) {
        // P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m
        int mm = -m;
        double ratio = 1;
        for (int j = ell - mm + 1; j <= ell + mm; ++j) ratio *= j;
        double sign = mm % 2 == 0 ? 1.0 : -1.0;
        return sign / ratio * legendre_P_assoc(ell, mm, x);
    }
    // Condon-Shortley seed P_m^m, then climb the degree.
    double pmm = 1;
    if (m > 0) {
        double somx2 = std::sqrt((1 - x) * (1 + x));
        double fact = 1;
        for (int i = 0; i < m; ++i) {
            pmm *= -fact * somx2;
            fact += 2;
        }
    }
    if (ell == m) return pmm;
    double pmmp1 = x * (2 * m + 1) * pmm;
    if (ell == m + 1) return pmmp1;
    double pll = 0;
    for (int l = m + 2; l <= ell; ++l) {
        pll = (x * (2 * l - 1) * pmmp1 - (l + m - 1) * pmm) / (l - m);
        pmm = pmmp1;
        pmmp1 = pll;
    }
    return pll;
}

double M_theta(int ell, double theta) {
    require(ell >= 0, "degree must be nonnegative");
    return factorial(ell) * legendre_P(ell, -std::cos(2 * theta));
}

double M_theta_derivative(int ell, double theta) {
    require(ell >= 0, "degree must be nonnegative");
    return factorial(ell) * 2 * std::sin(2 * theta) *
           legendre_P_derivative(ell, -std::cos(2 * theta));
}

LadderCoeffs ladder_coeffs(int ell, double s) {
    LadderCoeffs c;
    c.a = -2.0 * ell + 1.0;
    c.b = double(ell - 1) * (ell - 1) * (ell * (ell - 2.0) - s * (s - 2.0));
    return c;
}

double v_norm(int n, double s, int ell) {
    require_spectral(n, s, "norm parameter must lie in ((n-1)/2, n-1)");
    require(ell >= 0, "degree must be nonnegative");
    if (n == 3) {
        double lg = log_gamma(s + ell) + log_gamma(2 - s + ell) - log_gamma(s) -
                    log_gamma(2 - s);
        return std::exp(log_gamma(ell + 1.0) - 0.5 * std::log(2.0 * ell + 1.0) +
                        0.5 * lg);
    }
    double lg = log_gamma(s + ell) + log_gamma(1 - s + ell) - log_gamma(s) -
                log_gamma(1 - s);
    return std::exp(0.5 * lg);
}

double v_norm_by_recursion(double s, int ell) {
    require_spectral(3, s, "norm parameter must lie in (1, 2)");
    require(ell >= 0, "degree must be nonnegative");
    double sq = 1;  // ||v_0||^2
    for (int l = 1; l <= ell; ++l) {
        LadderCoeffs cur = ladder_coeffs(l, s);
        LadderCoeffs next = ladder_coeffs(l + 1, s);
        sq *= cur.a * next.b / next.a;
    }
    return std::sqrt(sq);
}

double c_coeff_ratio(int n, double delta, int ell) {
    require_spectral(n, delta, "growth exponent must lie in ((n-1)/2, n-1)");
    require(ell >= 0, "degree must be nonnegative");
    double sign = (n - 2) * ell % 2 == 0 ? 1.0 : -1.0;
    double lg = log_gamma(delta) + log_gamma(ell + n - 1 - delta) -
                log_gamma(n - 1 - delta) - log_gamma(ell + delta);
    return sign * std::sqrt(2.0 * (n - 2) * ell + 1.0) * std::exp(0.5 * lg);
}

namespace {

double boundary_dist2(const KernelPoint& p, int n) {
    double dx1 = p.x1 - p.u1;
    if (n == 2) return dx1 * dx1;
    double dx2 = p.x2 - p.u2;
    return dx1 * dx1 + dx2 * dx2;
}

double boundary_norm2(const KernelPoint& p, int n) {
    if (n == 2) return p.u1 * p.u1;
    return p.u1 * p.u1 + p.u2 * p.u2;
}

}  // namespace

double poisson_kernel(double delta, const KernelPoint& p, int n) {
    require_spectral(n, delta, "growth exponent must lie in ((n-1)/2, n-1)");
    require(p.y > 0, "height must be positive");
    double d2 = boundary_dist2(p, n);
    double base = (boundary_norm2(p, n) + 1) * p.y / (d2 + p.y * p.y);
    return std::pow(base, delta);
}

double phi_kernel_prefactor(int ell, double delta, int n) {
    require_dimension(n);
    require(ell >= 0, "degree must be nonnegative");
    require(delta > 0, "growth exponent must be positive");
    double lg = log_gamma(delta + ell) - log_gamma(delta);
    if (n == 3) lg += log_gamma(ell + 1.0);
    return std::exp(lg);
}

ComplexValue phi_kernel(int ell, double delta, const KernelPoint& p, int n) {
    double pre = phi_kernel_prefactor(ell, delta, n) * poisson_kernel(delta, p, n);
    if (n == 3) {
        double d2 = boundary_dist2(p, n);
        double y2 = p.y * p.y;
        double B = (y2 - d2) / (y2 + d2);
        return {pre * legendre_P(ell, B), 0.0};
    }
    std::complex<double> num(p.x1 - p.u1, -p.y);
    std::complex<double> den(p.x1 - p.u1, p.y);
    std::complex<double> zeta = num / den;
    std::complex<double> zl = 1;
    for (int i = 0; i < ell; ++i) zl *= zeta;
    zl *= pre;
    return {zl.real(), zl.imag()};
}

double kappa_flat_factor(int n, double delta) {
    require_dimension(n);
    if (n == 2) {
        require(delta > 0.5, "flat factor needs delta > 1/2");
        return std::sqrt(kPi) * std::exp(log_gamma(delta - 0.5) - log_gamma(delta));
    }
    require(delta > 1, "flat factor needs delta > 1");
    return kPi / (delta - 1);
}

namespace {

// Tanh-sinh quadrature over (a, b) for integrands with at worst an
// integrable power singularity at b.  The integrand receives the distance
// to b alongside the point so that the singular factor never cancels.
template <class F>
double tanh_sinh(F f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double piH = 0.5 * kPi;
    const double tmax = 6.9;

    auto eval_at = [&](double t) -> double {
        double v = piH * std::sinh(t);
        if (v > 350.0) return 0.0;
        double ev = std::exp(v);
        double sech = 2.0 / (ev + 1.0 / ev);
        double w = piH * std::cosh(t) * sech * sech;
        double omt = 2.0 / (std::exp(2.0 * v) + 1.0);  // 1 - tanh(v)
        double th = 1.0 - omt;
        double xp = mid + half * th;
        double dbp = half * omt;
        if (t == 0.0) return w * f(xp, dbp);
        double xm = mid - half * th;
        double dbm = b - xm;
        return w * (f(xp, dbp) + f(xm, dbm));
    };

    double h = 1.0;
    double sum = eval_at(0.0);
    for (double t = 1.0; t <= tmax; t += 1.0) sum += eval_at(t);
    double integral = half * h * sum;
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double add = 0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += eval_at(t);
        double next = 0.5 * integral + half * h * add;
        if (level >= 4 && std::abs(next - integral) <= 1e-13 * std::abs(next))
            return next;
        integral = next;
    }
    return integral;
}

}  // namespace

double kappa_flat_quadrature(int n, double delta) {
    require_dimension(n);
    // Substituting x = tan(u) turns the flat integral into a cosine-power
    // moment on (0, pi/2); the distance to pi/2 feeds sin directly.
    if (n == 2) {
        require(delta > 0.5, "flat factor needs delta > 1/2");
        return tanh_sinh(
            [&](double, double db) {
                if (db <= 0) return 0.0;
                return 2.0 * std::pow(std::sin(db), 2.0 * delta - 2.0);
            },
            0.0, 0.5 * kPi);
    }
    require(delta > 1, "flat factor needs delta > 1");
    return tanh_sinh(
        [&](double x, double db) {
            if (db <= 0) return 0.0;
            return 2.0 * kPi * std::sin(x) * std::pow(std::sin(db), 2.0 * delta - 3.0);
        },
        0.0, 0.5 * kPi);
}

double horospherical_main_exponent(int n, double delta) {
    require_spectral(n, delta, "growth exponent must lie in ((n-1)/2, n-1)");
    return n - 1 - delta;
}

double horospherical_error_exponent(const SpectralParams& p) {
    require_spectral(p.n, p.delta, "growth exponent must lie in ((n-1)/2, n-1)");
    require(p.s1 < p.delta, "the secondary parameter must sit below delta");
    return p.n - 1 - p.delta + 2.0 * (p.delta - p.s1) / (2.0 * p.n + 1.0);
}

double sector_error_exponent(int n, double delta, double s0, double q) {
    require_spectral(n, delta, "growth exponent must lie in ((n-1)/2, n-1)");
    require(s0 > 0, "spectral gap must be positive");
    require(q > 0 && q <= 1, "admissibility exponent must lie in (0, 1]");
    return delta - 8.0 * s0 / (n * (n + 9.0) * (2.0 * n + 1.0) * q);
}

namespace {

CheckResult checked(const char* name, double residual, double tolerance) {
    CheckResult r;
    r.name = name;
    r.residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    return r;
}

}  // namespace

std::vector<CheckResult> self_check(const SpectralParams& params) {
    require_spectral(params.n, params.delta,
                     "growth exponent must lie in ((n-1)/2, n-1)");
    std::vector<CheckResult> out;

    // Legendre values stay in [-1, 1], hit the endpoints exactly, and the
    // derivative satisfies P'_{l+1} - P'_{l-1} = (2l+1) P_l.
    {
        double worst = 0;
        for (int ell = 0; ell <= 40; ++ell) {
            worst = std::max(worst, std::abs(legendre_P(ell, 1.0) - 1.0));
            double end = ell % 2 == 0 ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(legendre_P(ell, -1.0) - end));
            for (int j = -20; j <= 20; ++j) {
                double t = j / 20.0;
                worst = std::max(worst, std::abs(legendre_P(ell, t)) - 1.0);
                if (ell >= 1) {
                    double lhs = legendre_P_derivative(ell + 1, t) -
                                 (ell >= 1 ? legendre_P_derivative(ell - 1, t) : 0.0);
                    double rhs = (2.0 * ell + 1.0) * legendre_P(ell, t);
                    double scale = std::max(1.0, std::abs(rhs));
                    worst = std::max(worst, std::abs(lhs - rhs) / scale);
                }
            }
        }
        out.push_back(checked("legendre-bound-and-derivative", worst, 1e-10));
    }

    // M_l(theta) = (-2l+1) cos(2 theta) M_{l-1} - (l-1)^2 M_{l-2}.
    {
        double worst = 0;
        for (int ell = 2; ell <= 30; ++ell) {
            for (int j = 1; j < 16; ++j) {
                double th = j * kPi / 16.0;
                double lhs = M_theta(ell, th);
                double rhs = (-2.0 * ell + 1.0) * std::cos(2 * th) * M_theta(ell - 1, th) -
                             double(ell - 1) * (ell - 1) * M_theta(ell - 2, th);
                double scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
                worst = std::max(worst, std::abs(lhs - rhs) / scale);
            }
        }
        out.push_back(checked("m-theta-recursion", worst, 1e-11));
    }

    // 2(l+1) M_l = 4(-2l+1) cos(2t) M_{l-1} + (-2l+1) sin(2t) M'_{l-1}
    //              + 2 (l-1)^2 (l-2) M_{l-2}.
    {
        double worst = 0;
        for (int ell = 2; ell <= 30; ++ell) {
            for (int j = 1; j < 16; ++j) {
                double th = j * kPi / 16.0;
                double a = -2.0 * ell + 1.0;
                double lhs = 2.0 * (ell + 1.0) * M_theta(ell, th);
                double rhs = 4.0 * a * std::cos(2 * th) * M_theta(ell - 1, th) +
                             a * std::sin(2 * th) * M_theta_derivative(ell - 1, th) +
                             2.0 * double(ell - 1) * (ell - 1) * (ell - 2.0) *
                                 M_theta(ell - 2, th);
                double scale = std::max(1.0, std::max(std::abs(lhs), std::abs(rhs)));
                worst = std::max(worst, std::abs(lhs - rhs) / scale);
            }
        }
        out.push_back(checked("m-theta-derivative-identity", worst, 1e-11));
    }

    // Closed-form ladder norms against the recursion.
    {
        double worst = 0;
        double svals[] = {params.n == 3 ? params.delta : 1.30568, 1.1, 1.7};
        for (double s : svals) {
            for (int ell = 1; ell <= 20; ++ell) {
                double a = v_norm(3, s, ell);
                double b = v_norm_by_recursion(s, ell);
                worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
            }
        }
        out.push_back(checked("ladder-norm-closed-form", worst, 1e-10));
    }

    // Coefficient growth: |c(l)| / (l+1)^((n-2)/2) decays like l to a strictly
    // negative power, so it must never increase from one l to the next.  The
    // mirrored Gamma orientation would grow by the opposite power, which is
    // what this pins down.
    {
        double worst = 0;
        for (int n : {2, 3}) {
            double delta = n == params.n ? params.delta : (n == 3 ? 1.30568 : 0.8);
            double prev = 0;
            for (int ell = 100; ell <= 200; ++ell) {
                double v = std::abs(c_coeff_ratio(n, delta, ell)) /
                           std::pow(ell + 1.0, (n - 2) / 2.0);
                if (ell > 100) worst = std::max(worst, v / prev - 1.0);
                prev = v;
            }
        }
        out.push_back(checked("coefficient-growth-bound", worst, 1e-9));
    }

    // |phi_l| <= prefactor * poisson holds pointwise since the angular factor
    // has modulus at most one.
    {
        double worst = 0;
        for (int n : {2, 3}) {
            double delta = n == params.n ? params.delta : (n == 3 ? 1.30568 : 0.8);
            for (int ell : {0, 1, 2, 5, 9}) {
                for (double y : {0.25, 1.0, 3.0}) {
                    for (double x : {-1.5, 0.0, 0.4, 2.0}) {
                        KernelPoint p;
                        p.x1 = x;
                        p.x2 = 0.3;
                        p.y = y;
                        p.u1 = 1.1;
                        p.u2 = -0.2;
                        ComplexValue v = phi_kernel(ell, delta, p, n);
                        double mag = std::hypot(v.re, v.im);
                        double cap = phi_kernel_prefactor(ell, delta, n) *
                                     poisson_kernel(delta, p, n);
                        worst = std::max(worst, mag / cap - 1.0);
                    }
                }
            }
        }
        out.push_back(checked("kernel-domination", worst, 1e-12));
    }

    // Quadrature against the closed-form flat factor.
    {
        double worst = 0;
        for (int n : {2, 3}) {
            for (double delta : {n == 2 ? 0.65 : 1.2, n == 2 ? 0.8 : 1.30568,
                                 n == 2 ? 0.95 : 1.7}) {
                double a = kappa_flat_factor(n, delta);
                double b = kappa_flat_quadrature(n, delta);
                worst = std::max(worst, std::abs(a - b) / a);
            }
        }
        out.push_back(checked("flat-factor-quadrature", worst, 1e-10));
    }

    // The sector exponent written through the product n(n+9)(2n+1)q agrees
    // bit for bit with the reduced 2 s0 / 63 form at n = 3, q = 1.
    {
        double worst = 0;
        for (int j = 1; j <= 50; ++j) {
            double delta = 1.0 + j / 51.0;
            double s0 = (delta - 1.0) * j / 64.0 + 1e-4;
            double a = sector_error_exponent(3, delta, s0, 1.0);
            double b = delta - 2.0 * s0 / 63.0;
            worst = std::max(worst, std::abs(a - b));
        }
        out.push_back(checked("sector-exponent-identity", worst, 0.0));
    }

    return out;
}

}  // namespace apollo::spectral
