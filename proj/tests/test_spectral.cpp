#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <apollo/census.hpp>
#include <apollo/spectral.hpp>

#include <cmath>
#include <random>
#include <set>

using namespace apollo::spectral;
using doctest::Approx;

TEST_CASE("log gamma holds thirteen digits across the working range") {
    CHECK(log_gamma(0.07) == Approx(2.6227537606032154926).epsilon(1e-13));
    CHECK(log_gamma(0.5) == Approx(0.57236494292470008707).epsilon(1e-13));
    CHECK(log_gamma(1.30568) == Approx(-0.10911755338695154387).epsilon(1e-12));
    CHECK(log_gamma(3.25) == Approx(0.93580193110872535826).epsilon(1e-13));
    CHECK(log_gamma(10.0) == Approx(12.801827480081469611).epsilon(1e-13));
    CHECK(log_gamma(123.456) == Approx(469.60554712992946873).epsilon(1e-13));
    CHECK(log_gamma(9876.5) == Approx(80963.012445507255158).epsilon(1e-13));
    CHECK(log_gamma(1.0) == Approx(0.0).scale(1.0));
    CHECK(log_gamma(2.0) == Approx(0.0).scale(1.0));
}

TEST_CASE("legendre polynomials by recursion") {
    CHECK(legendre_P(0, 0.4) == 1.0);
    CHECK(legendre_P(1, 0.4) == 0.4);
    CHECK(legendre_P(10, 0.3) == Approx(0.251476349516015625).epsilon(1e-13));
    CHECK(legendre_P(200, -0.731) ==
          Approx(0.036568553491412026571).epsilon(1e-11));
    CHECK(legendre_P(7, 1.0) == Approx(1.0).epsilon(1e-14));
    CHECK(legendre_P(7, -1.0) == Approx(-1.0).epsilon(1e-14));

    // |P_l| <= 1 on [-1, 1]
    for (int ell : {3, 17, 64}) {
        for (double t = -1.0; t <= 1.0; t += 0.125)
            CHECK(std::abs(legendre_P(ell, t)) <= 1.0 + 1e-14);
    }
}

TEST_CASE("legendre derivative identity and endpoints") {
    for (int ell : {2, 5, 12}) {
        double t = 0.37;
        double h = 1e-6;
        double fd = (legendre_P(ell, t + h) - legendre_P(ell, t - h)) / (2 * h);
        CHECK(legendre_P_derivative(ell, t) == Approx(fd).epsilon(1e-8));
    }
    CHECK(legendre_P_derivative(6, 1.0) == Approx(21.0).epsilon(1e-14));
    CHECK(legendre_P_derivative(6, -1.0) == Approx(-21.0).epsilon(1e-14));
}

TEST_CASE("associated legendre with Condon-Shortley phase") {
    CHECK(legendre_P_assoc(4, 0, 0.3) == Approx(legendre_P(4, 0.3)).epsilon(1e-14));
    CHECK(legendre_P_assoc(4, 2, 0.3) == Approx(-2.52525).epsilon(1e-13));
    CHECK(legendre_P_assoc(4, -2, 0.3) ==
          Approx(-0.0070145833333333333333).epsilon(1e-13));
    CHECK(legendre_P_assoc(7, 5, -0.2) ==
          Approx(2252.7542514753230633).epsilon(1e-12));
    CHECK(legendre_P_assoc(1, 1, 0.5) == Approx(-std::sqrt(0.75)).epsilon(1e-14));
}

TEST_CASE("theta deformation of the legendre family") {
    CHECK(M_theta(3, 0.7) == Approx(1.4560520085020813043).epsilon(1e-12));
    CHECK(M_theta(25, 1.234) ==
          Approx(-2.4178848760468900697e+24).epsilon(1e-11));

    // derivative against a central difference
    double theta = 0.9, h = 1e-6;
    double fd = (M_theta(5, theta + h) - M_theta(5, theta - h)) / (2 * h);
    CHECK(M_theta_derivative(5, theta) == Approx(fd).epsilon(1e-7));
}

TEST_CASE("ladder coefficients") {
    LadderCoeffs lc = ladder_coeffs(5, 1.3);
    CHECK(lc.a == -9.0);
    CHECK(lc.b == Approx(16.0 * (15.0 + 0.91)).epsilon(1e-14));
    CHECK(ladder_coeffs(1, 1.3).a == -1.0);
    CHECK(ladder_coeffs(1, 1.3).b == 0.0);
}

TEST_CASE("ladder vector norms: closed form and recursion") {
    CHECK(v_norm(3, 1.30568, 5) == Approx(4044.644417476183658).epsilon(1e-12));
    CHECK(v_norm(3, 1.7, 12) ==
          Approx(28383821849741671.168).epsilon(1e-12));
    CHECK(v_norm(2, 0.8, 7) == Approx(814.62032948402248094).epsilon(1e-12));
    CHECK(v_norm(3, 1.3, 0) == Approx(1.0).epsilon(1e-14));

    for (int ell = 1; ell <= 12; ++ell)
        CHECK(v_norm_by_recursion(1.30568, ell) ==
              Approx(v_norm(3, 1.30568, ell)).epsilon(1e-11));
}

TEST_CASE("coefficient ratios stay within the growth envelope") {
    CHECK(c_coeff_ratio(3, 1.30568, 4) ==
          Approx(1.5682723371944601686).epsilon(1e-12));
    CHECK(c_coeff_ratio(3, 1.30568, 5) ==
          Approx(-1.6308438825868302731).epsilon(1e-12));
    CHECK(c_coeff_ratio(2, 0.8, 9) ==
          Approx(0.26046988442388177124).epsilon(1e-12));
    CHECK(c_coeff_ratio(3, 1.30568, 0) == Approx(1.0).epsilon(1e-14));

    for (int ell = 0; ell <= 60; ++ell) {
        CHECK(std::abs(c_coeff_ratio(3, 1.30568, ell)) <=
              2.5 * std::sqrt(ell + 1.0));
        CHECK(std::abs(c_coeff_ratio(2, 0.8, ell)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("poisson kernel and eigenfunction integrands") {
    KernelPoint p;
    p.x1 = 0.3;
    p.x2 = -0.2;
    p.y = 0.7;
    p.u1 = 1.1;
    p.u2 = 0.4;
    CHECK(poisson_kernel(1.30568, p) ==
          Approx(1.1505968543576403666).epsilon(1e-13));

    ComplexValue v3 = phi_kernel(3, 1.30568, p, 3);
    CHECK(v3.re == Approx(28.385790080367345146).epsilon(1e-12));
    CHECK(v3.im == 0.0);

    KernelPoint q;
    q.x1 = 0.3;
    q.y = 0.7;
    q.u1 = 1.1;
    ComplexValue v2 = phi_kernel(2, 0.8, q, 2);
    CHECK(v2.re == Approx(-1.7861196834488655603).epsilon(1e-12));
    CHECK(v2.im == Approx(0.48716309249031482123).epsilon(1e-12));

    CHECK(phi_kernel_prefactor(0, 1.30568, 3) == Approx(1.0).epsilon(1e-14));
    CHECK(phi_kernel_prefactor(1, 1.5, 3) == Approx(1.5).epsilon(1e-13));
}

TEST_CASE("flat factor closed forms match independent quadrature") {
    CHECK(kappa_flat_factor(2, 0.8) ==
          Approx(4.5544430879621720621).epsilon(1e-13));
    CHECK(kappa_flat_factor(3, 1.3) ==
          Approx(10.471975511965977462).epsilon(1e-13));

    for (double d : {0.65, 0.8, 0.95})
        CHECK(kappa_flat_quadrature(2, d) ==
              Approx(kappa_flat_factor(2, d)).epsilon(1e-10));
    for (double d : {1.2, 1.30568, 1.7})
        CHECK(kappa_flat_quadrature(3, d) ==
              Approx(kappa_flat_factor(3, d)).epsilon(1e-10));
}

TEST_CASE("decay exponents") {
    CHECK(horospherical_main_exponent(3, 1.30568) ==
          Approx(2.0 - 1.30568).epsilon(1e-15));
    SpectralParams p;
    CHECK(horospherical_error_exponent(p) ==
          Approx(2.0 - 1.30568 + 2.0 * (1.30568 - 1.2) / 7.0).epsilon(1e-14));

    // the sector exponent collapses to the counting error exponent exactly
    double delta = 1.30568, s1 = 1.2;
    double s0 = delta - s1;
    CHECK(sector_error_exponent(3, delta, s0, 1.0) ==
          apollo::error_exponent_main(delta, s1));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> da(1.01, 1.99);
    for (int i = 0; i < 100; ++i) {
        double a = da(rng);
        std::uniform_real_distribution<double> db(1.0 + 1e-9, a - 1e-9);
        double b = db(rng);
        CHECK(sector_error_exponent(3, a, a - b, 1.0) ==
              apollo::error_exponent_main(a, b));
    }
}

TEST_CASE("property suite passes for both dimensions") {
    SpectralParams p3;
    auto checks = self_check(p3);
    CHECK(checks.size() == 8);
    std::set<std::string> names;
    for (const auto& c : checks) {
        names.insert(c.name);
        INFO(c.name << " residual " << c.residual << " tol " << c.tolerance);
        CHECK(c.pass);
        CHECK(c.residual <= c.tolerance);
    }
    CHECK(names.size() == 8);

    SpectralParams p2;
    p2.n = 2;
    p2.delta = 0.8;
    p2.s1 = 0.7;
    p2.s0 = 0.1;
    p2.q = 1.0;
    for (const auto& c : self_check(p2)) CHECK(c.pass);
}
