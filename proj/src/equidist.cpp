#include "ktf/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ktf {

double chebyshev_eval(int l, double x) {
    if (l < 0) throw std::invalid_argument("chebyshev_eval: negative degree");
    double a = 1, b = x;  // X_0, X_1
    if (l == 0) return a;
    for (int k = 1; k < l; ++k) {
        double c = x * b - a;
        a = b;
        b = c;
    }
    return b;
}

Measure Measure::modified(i64 m, i64 p) {
    if (m <= 0) throw std::invalid_argument("Measure: m must be positive");
    if (!is_prime(p)) throw std::invalid_argument("Measure: p must be prime");
    Measure mu;
    mu.kind = Kind::modified;
    mu.m = m;
    mu.p = p;
    return mu;
}

int Measure::extra_degree() const { return kind == Kind::modified ? 2 * ord_p(m, p) : 0; }

double Measure::density(double x) const {
    if (x < -2 || x > 2) return 0;
    double d = std::sqrt(std::max(0.0, 1 - x * x / 4)) / std::numbers::pi;
    if (kind == Kind::sato_tate) return d;
    double poly = 0;
    for (int k = 0; 2 * k <= extra_degree(); ++k) poly += chebyshev_eval(2 * k, x);
    return d * poly;
}

namespace {

// int f dmu_inf = (2/pi) int_0^pi f(2 cos th) sin^2 th dth; n-point rule exact to degree 2n - 1
template <class F>
double sato_tate_integral(F f, int degree) {
    int n = degree / 2 + 2;
    double s = 0;
    for (int k = 1; k <= n; ++k) {
        double th = k * std::numbers::pi / (n + 1);
        double sn = std::sin(th);
        s += sn * sn * f(2 * std::cos(th));
    }
    return 2.0 * s / (n + 1);
}

}  // namespace

double measure_moment(const Measure& mu, int i, int j) {
    if (i < 0 || j < 0) throw std::invalid_argument("measure_moment: negative degree");
    int extra = mu.extra_degree();
    return sato_tate_integral(
        [&](double x) {
            double poly = 0;
            for (int k = 0; 2 * k <= extra; ++k) poly += chebyshev_eval(2 * k, x);
            return poly * chebyshev_eval(i, x) * chebyshev_eval(j, x);
        },
        i + j + extra);
}

double measure_moment(const Measure& mu, int l) { return measure_moment(mu, l, 0); }

MomentReport moment_report(const KtfEngine& E, i64 p, int l, i64 m, std::optional<i64> c_terms) {
    if (!is_prime(p)) throw std::invalid_argument("moment_report: p must be prime");
    if (E.N() % p == 0) throw std::invalid_argument("moment_report: p divides N");
    if (l < 0) throw std::invalid_argument("moment_report: negative l");
    if (m <= 0) throw std::invalid_argument("moment_report: m must be positive");

    MomentReport r;
    r.N = E.N();
    r.p = p;
    r.m = m;
    r.l = l;
    i64 n = ipow(p, l);
    KtfRequest req;
    req.N = E.N();
    req.n = n;
    req.m1 = req.m2 = m;
    req.c_terms = c_terms;
    auto kl = E.geo_kloosterman(n, m, m, c_terms, req.c_terms_min, req.c_terms_max);
    auto cont = E.spec_continuous(n, m, m);
    cplx cusp = E.geo_main(n, m, m) + kl.value - cont.value;

    r.omega_p = E.omega()(p);
    r.half_power = std::pow(std::sqrt(r.omega_p), l);
    r.lhs = r.half_power * cusp;
    r.J = E.J();
    r.psi = E.psi();
    r.prediction = (l % 2 == 0 && l / 2 <= ord_p(m, p)) ? r.J * r.psi : 0.0;
    r.tail_bound = kl.tail_bound;
    r.t_quadrature_error = cont.quad_error;
    r.c_terms_used = kl.c_terms;
    return r;
}

MomentReport moment_report(i64 N, const DirichletCharacter& omega, i64 p, int l, i64 m, const TestFunction& h,
                           Tolerances tol, std::optional<i64> c_terms) {
    KtfEngine E(N, omega, h, tol);
    return moment_report(E, p, l, m, c_terms);
}

std::vector<EquidistRow> equidist_scan(i64 p, i64 m, const TestFunction& h, std::vector<i64> Ns, int l_max,
                                   std::optional<i64> c_terms, Tolerances tol) {
    if (!is_prime(p)) throw std::invalid_argument("equidist_scan: p must be prime");
    if (l_max < 0) throw std::invalid_argument("equidist_scan: negative l_max");
    for (i64 N : Ns)
        if (N <= 0 || N % p == 0) throw std::invalid_argument("equidist_scan: N must be positive and coprime to p");
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    Measure::modified(m, p);  // validates m, p

    std::vector<EquidistRow> rows;
    for (i64 N : Ns) {
        KtfEngine E(N, DirichletCharacter::principal(N), h, tol);
        cplx base = moment_report(E, p, 0, m, c_terms).lhs;
        for (int l = 0; l <= l_max; ++l) {
            EquidistRow row;
            row.N = N;
            row.p = p;
            row.m = m;
            row.l = l;
            row.ratio = l == 0 ? cplx(1, 0) : moment_report(E, p, l, m, c_terms).lhs / base;
            row.prediction = (l % 2 == 0 && l / 2 <= ord_p(m, p)) ? 1.0 : 0.0;  // = measure_moment(mu, l)
            rows.push_back(row);
        }
    }
    return rows;
}

std::string scan_to_csv(const std::vector<EquidistRow>& rows) {
    std::ostringstream os;
    os << std::setprecision(15);
    os << "N,p,m,l,ratio_re,ratio_im,prediction\n";
    for (auto& r : rows)
        os << r.N << ',' << r.p << ',' << r.m << ',' << r.l << ',' << r.ratio.real() << ',' << r.ratio.imag() << ','
           << r.prediction << '\n';
    return os.str();
}

}  // namespace ktf
