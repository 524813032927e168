#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace ktf {

using cplx = std::complex<double>;

enum class QuadScheme { gauss_kronrod, tanh_sinh, trapezoid };

struct Quadrature {
    QuadScheme scheme = QuadScheme::gauss_kronrod;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 15;
};

struct QuadResult {
    double value = 0;
    double error = 0;
};

// a or b may be +-infinity (not for trapezoid).
QuadResult integrate(const std::function<double(double)>& f, double a, double b, const Quadrature& q = {});

// Composite Gauss-Legendre, 20 nodes per panel.
double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels);
cplx gauss_legendre_c(const std::function<cplx(double)>& f, double a, double b, int panels);

struct QuadRule {
    std::vector<double> x, w;
};
QuadRule gauss_legendre_rule(double a, double b, int panels);

// Lanczos (g = 7, 9 terms) with reflection for Re z < 1/2.
cplx gamma_complex(cplx z);
cplx lgamma_complex(cplx z);  // principal-branch log for Re z >= 1/2

// int_0^inf exp(-x cosh u) cos(t u) du
double bessel_K_it(double t, double x);
// int_0^inf exp(-x cosh u) cosh(nu u) du for complex order nu
cplx bessel_K(cplx nu, double x);

// Largest argument accepted by the J series.
inline constexpr double kJSeriesCutoff = 100.0;
cplx bessel_J(cplx nu, double x);
cplx bessel_J_2it(double t, double x);

// int_0^inf K_it(2 pi w)^2 dw
double k_squared_integral(double t);

// Hurwitz zeta sum_{k>=0} (k + a)^(-s), a > 0, s != 1.
cplx hurwitz_zeta(cplx s, double a);

}  // namespace ktf
