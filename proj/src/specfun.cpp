#include "ktf/specfun.hpp"

#include <array>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/quadrature/trapezoidal.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ktf {

namespace bq = boost::math::quadrature;

namespace {

// bisection driven by the 61-point Kronrod error estimate; stops on abs_tol or rel_tol of the panel value
QuadResult gk_adapt(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
                    int depth) {
    QuadResult r;
    r.value = bq::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &r.error);
    if (depth <= 0 || r.error <= std::max(abs_tol, rel_tol * std::abs(r.value))) return r;
    double m = 0.5 * (a + b);
    auto lo = gk_adapt(f, a, m, abs_tol / 2, rel_tol, depth - 1);
    auto hi = gk_adapt(f, m, b, abs_tol / 2, rel_tol, depth - 1);
    return {lo.value + hi.value, lo.error + hi.error};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b, const Quadrature& q) {
    QuadResult r;
    if (a == b) return r;
    switch (q.scheme) {
    case QuadScheme::gauss_kronrod: {
        if (std::isfinite(a) && std::isfinite(b)) return gk_adapt(f, a, b, q.abs_tol, q.rel_tol, q.max_depth);
        r.value = bq::gauss_kronrod<double, 61>::integrate(f, a, b, static_cast<unsigned>(q.max_depth), q.rel_tol,
                                                          &r.error);
        break;
    }
    case QuadScheme::tanh_sinh: {
        bq::tanh_sinh<double> ts(static_cast<size_t>(q.max_depth));
        double l1 = 0;
        r.value = ts.integrate(f, a, b, q.rel_tol, &r.error, &l1);
        r.error *= l1;
        break;
    }
    case QuadScheme::trapezoid: {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("trapezoid quadrature needs a finite interval");
        double l1 = 0;
        r.value = bq::trapezoidal(f, a, b, q.rel_tol, static_cast<size_t>(q.max_depth), &r.error, &l1);
        r.error *= std::abs(r.value);
        break;
    }
    }
    r.error = std::max(std::abs(r.error), 0.0);
    return r;
}

namespace {

template <class T, class F>
T gl_panels(const F& f, double a, double b, int panels) {
    using G = bq::gauss<double, 20>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    T total{};
    double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        double lo = a + k * h, mid = lo + h / 2, half = h / 2;
        T s{};
        for (size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] == 0) {
                s += ws[i] * f(mid);
            } else {
                s += ws[i] * (f(mid - half * xs[i]) + f(mid + half * xs[i]));
            }
        }
        total += s * half;
    }
    return total;
}

constexpr double kLanczosG = 7;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_log(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2 * M_PI) + (z + 0.5) * std::log(t) - t + std::log(x);
}

void check_pole(cplx z) {
    if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real()))
        throw std::domain_error("gamma pole at " + std::to_string(z.real()));
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels) {
    return gl_panels<double>(f, a, b, panels);
}

cplx gauss_legendre_c(const std::function<cplx(double)>& f, double a, double b, int panels) {
    return gl_panels<cplx>(f, a, b, panels);
}

QuadRule gauss_legendre_rule(double a, double b, int panels) {
    using G = bq::gauss<double, 20>;
    const auto& xs = G::abscissa();
    const auto& ws = G::weights();
    QuadRule r;
    double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        double mid = a + k * h + h / 2, half = h / 2;
        for (size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] == 0) {
                r.x.push_back(mid);
                r.w.push_back(ws[i] * half);
            } else {
                r.x.push_back(mid - half * xs[i]);
                r.w.push_back(ws[i] * half);
                r.x.push_back(mid + half * xs[i]);
                r.w.push_back(ws[i] * half);
            }
        }
    }
    return r;
}

cplx lgamma_complex(cplx z) {
    check_pole(z);
    if (z.real() < 0.5) throw std::domain_error("lgamma_complex: Re z < 1/2");
    return lanczos_log(z);
}

cplx gamma_complex(cplx z) {
    check_pole(z);
    if (z.real() < 0.5) return M_PI / (std::sin(M_PI * z) * std::exp(lanczos_log(1.0 - z)));
    return std::exp(lanczos_log(z));
}

cplx bessel_K(cplx nu, double x) {
    if (!(x > 0)) throw std::domain_error("bessel_K: x must be positive");
    // integrand below exp(-745) beyond u_max
    double u_max = std::acosh(std::max(760.0 / x, 2.0)) + std::abs(nu.real()) * 0.01 + 1.0;
    auto g = [&](double u) { return std::exp(-x * std::cosh(u)) * std::cosh(nu * u); };
    double h = std::min(0.25, 0.5 / (1 + std::abs(nu.imag())));
    // trapezoid on [0, u_max] with the even extension, so the u = 0 node has weight 1/2
    cplx sum = 0.5 * g(0.0);
    for (double u = h; u <= u_max; u += h) sum += g(u);
    cplx prev = sum * h;
    for (int level = 0; level < 20; ++level) {
        cplx mids = 0;
        for (double u = h / 2; u <= u_max; u += h) mids += g(u);
        sum += mids;
        h /= 2;
        cplx cur = sum * h;
        if (std::abs(cur - prev) <= 1e-14 * std::max(1.0, std::abs(cur)) && level >= 1) return cur;
        prev = cur;
    }
    return prev;
}

double bessel_K_it(double t, double x) { return bessel_K(cplx(0, t), x).real(); }

namespace {

// sum_k (-x^2/4)^k / (k! (nu+1)_k) in precision T
template <class T>
cplx j_series(cplx nu, double x) {
    T q = T(x) * T(x) / 4;
    T nr = nu.real(), ni = nu.imag();
    T tr = 1, ti = 0, sr = 1, si = 0;
    T eps = std::numeric_limits<T>::epsilon();
    for (int k = 0; k < 600; ++k) {
        // term *= -q / ((k+1)(nu+k+1))
        T dr = nr + k + 1, di = ni;
        T den = (dr * dr + di * di) * (k + 1);
        T ar = (tr * dr + ti * di) / den, ai = (ti * dr - tr * di) / den;
        tr = -q * ar;
        ti = -q * ai;
        sr += tr;
        si += ti;
        T mag = abs(tr) + abs(ti);
        if (k > x && mag <= eps * (abs(sr) + abs(si) + eps)) return {static_cast<double>(sr), static_cast<double>(si)};
    }
    throw std::runtime_error("bessel_J series did not converge");
}

}  // namespace

cplx bessel_J(cplx nu, double x) {
    if (!(x > 0)) throw std::domain_error("bessel_J: x must be positive");
    if (x > kJSeriesCutoff)
        throw std::domain_error("bessel_J: x = " + std::to_string(x) + " above series cutoff " +
                                std::to_string(kJSeriesCutoff));
    using boost::multiprecision::cpp_bin_float_50;
    using boost::multiprecision::cpp_bin_float_100;
    using std::abs;
    cplx s;
    if (x <= 12)
        s = j_series<long double>(nu, x);
    else if (x <= 60)
        s = j_series<cpp_bin_float_50>(nu, x);
    else
        s = j_series<cpp_bin_float_100>(nu, x);
    cplx pref = std::exp(nu * std::log(x / 2)) / gamma_complex(nu + 1.0);
    return pref * s;
}

cplx bessel_J_2it(double t, double x) { return bessel_J(cplx(0, 2 * t), x); }

double k_squared_integral(double t) {
    auto k = [t](double x) {
        if (x < 1e-7) {
            if (t == 0) return -std::log(x / 2) - 0.57721566490153286;
            return (gamma_complex(cplx(0, t)) * std::exp(cplx(0, -t) * std::log(x / 2))).real();
        }
        return bessel_K_it(t, x);
    };
    auto f = [&](double w) {
        double v = k(2 * M_PI * w);
        return v * v;
    };
    bq::tanh_sinh<double> ts;
    bq::exp_sinh<double> es;
    double near = ts.integrate(f, 0.0, 1.0, 1e-11);
    double far = es.integrate([&](double w) { return f(w); }, 1.0, INFINITY, 1e-11);
    return near + far;
}

cplx hurwitz_zeta(cplx s, double a) {
    if (s == cplx(1, 0)) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    if (!(a > 0)) throw std::domain_error("hurwitz_zeta: a must be positive");
    // B_{2j} / (2j)!
    static constexpr std::array<double, 12> b = {
        1.0 / 12,
        -1.0 / 720,
        1.0 / 30240,
        -1.0 / 1209600,
        1.0 / 47900160,
        -691.0 / 1307674368000,
        1.0 / 74724249600,
        -3617.0 / 10670622842880000.0,
        43867.0 / 5109094217170944000.0,
        -174611.0 / 802857662698291200000.0,
        77683.0 / 14101100039391805440000.0,
        -236364091.0 / 1693824136731743669452800000.0};
    int n = static_cast<int>(std::abs(s)) + 30;
    cplx sum = 0;
    for (int k = 0; k < n; ++k) sum += std::exp(-s * std::log(a + k));
    double an = a + n;
    double la = std::log(an);
    sum += std::exp((1.0 - s) * la) / (s - 1.0) + 0.5 * std::exp(-s * la);
    cplx poch = s;  // s (s+1) ... (s + 2j - 2)
    cplx pw = std::exp((-s - 1.0) * la);
    for (size_t j = 0; j < b.size(); ++j) {
        sum += b[j] * poch * pw;
        poch *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
        pw /= an * an;
    }
    return sum;
}

}  // namespace ktf
