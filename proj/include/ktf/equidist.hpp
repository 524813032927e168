#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ktf/ktf.hpp"

namespace ktf {

// X_0 = 1, X_1 = x, X_{l+1} = x X_l - X_{l-1}; X_l(2 cos th) = sin((l+1) th) / sin th
double chebyshev_eval(int l, double x);

struct Measure {
    enum class Kind { sato_tate, modified };
    Kind kind = Kind::sato_tate;
    i64 m = 1, p = 2;  // modified only

    static Measure sato_tate() { return {}; }
    static Measure modified(i64 m, i64 p);

    // on [-2, 2]: (1/pi) sqrt(1 - x^2/4), times sum_{l' <= ord_p(m)} X_{2l'}(x) when modified
    double density(double x) const;
    int extra_degree() const;  // degree of the polynomial factor
};

// int X_i X_j dmu, Gauss-Chebyshev (second kind) after x = 2 cos th; exact for these degrees
double measure_moment(const Measure& mu, int i, int j);
// int X_l dmu
double measure_moment(const Measure& mu, int l);

struct MomentReport {
    i64 N = 0, p = 0, m = 0;
    int l = 0;
    cplx omega_p;     // omega'(p)
    cplx half_power;  // principal sqrt(omega'(p)) raised to l
    cplx lhs;         // half_power * inferred cuspidal side at n = p^l, m1 = m2 = m
    double prediction = 0;  // J psi(N) when l = 2l' with l' <= ord_p(m), else 0
    double J = 0, psi = 0;
    double tail_bound = 0, t_quadrature_error = 0;
    i64 c_terms_used = 0;
    cplx ratio() const { return lhs / (J * psi); }
};

MomentReport moment_report(const KtfEngine& engine, i64 p, int l, i64 m, std::optional<i64> c_terms);
MomentReport moment_report(i64 N, const DirichletCharacter& omega, i64 p, int l, i64 m, const TestFunction& h,
                           Tolerances tol = {}, std::optional<i64> c_terms = std::nullopt);

struct EquidistRow {
    i64 N = 0, p = 0, m = 0;
    int l = 0;
    cplx ratio;         // moment(l) / moment(0)
    double prediction;  // int X_l dmu
};

// trivial omega' at each N; rows sorted by (N, l)
std::vector<EquidistRow> equidist_scan(i64 p, i64 m, const TestFunction& h, std::vector<i64> Ns, int l_max,
                                   std::optional<i64> c_terms = std::nullopt, Tolerances tol = {});
// header N,p,m,l,ratio_re,ratio_im,prediction
std::string scan_to_csv(const std::vector<EquidistRow>& rows);

}  // namespace ktf
