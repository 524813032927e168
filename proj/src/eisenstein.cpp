#include "ktf/eisenstein.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ktf/specfun.hpp"

namespace ktf {

namespace {

cplx cpow(double base, cplx e) { return std::exp(e * std::log(base)); }

}  // namespace

std::string EisensteinBasisElement::tuple_label() const {
    if (tuple.empty()) return "-";
    std::ostringstream os;
    for (size_t i = 0; i < tuple.size(); ++i) os << (i ? "." : "") << tuple[i].first << '^' << tuple[i].second;
    return os.str();
}

EisensteinBasisElement make_basis_element(const CharacterPair& pair, const std::vector<int>& exps) {
    EisensteinBasisElement e;
    e.N = pair.chi1.modulus();
    if (pair.chi2.modulus() != e.N) throw std::invalid_argument("basis element: characters must share the modulus");
    auto f = factor(e.N);
    if (exps.size() != f.size()) throw std::invalid_argument("basis element: one exponent per prime of N");
    e.pair = pair;
    i64 c1 = pair.chi1.conductor(), c2 = pair.chi2.conductor();
    i64 num = 1, den = 1;
    for (size_t k = 0; k < f.size(); ++k) {
        i64 p = f[k].p;
        int Np = f[k].e, i = exps[k];
        int lo = ord_p(c2, p), hi = Np - ord_p(c1, p);
        if (i < lo || i > hi)
            throw std::invalid_argument("basis element: i_" + std::to_string(p) + " = " + std::to_string(i) +
                                        " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        e.tuple.emplace_back(p, i);
        i64 pN = ipow(p, Np);
        e.M *= ipow(p, i);
        if (i < Np) e.N1 *= pN;
        if (i > 0) e.N2 *= pN;
        if (i == 0) {
            num *= p;
            den *= p + 1;
        } else if (i < Np) {
            num *= p - 1;
            den *= ipow(p, i) * (p + 1);
        } else {
            den *= ipow(p, Np - 1) * (p + 1);
        }
    }
    i64 g = gcd(num, den);
    e.norm_num = num / g;
    e.norm_den = den / g;
    e.chi1p = pair.chi1.project(e.N1);
    e.chi2p = pair.chi2.project(e.N2);
    e.chi2M = e.chi2p.induce(e.M);
    for (auto [p, i] : e.tuple) {
        int Np = ord_p(e.N, p);
        if (i < Np) e.C *= std::conj(pair.chi1.project(ipow(p, Np))(e.M / ipow(p, i)));
    }
    return e;
}

std::vector<EisensteinBasisElement> enumerate_basis(i64 N, const DirichletCharacter& omega) {
    if (omega.modulus() != N) throw std::invalid_argument("enumerate_basis: omega must be a character mod N");
    std::vector<EisensteinBasisElement> out;
    if (omega.parity() == -1) return out;
    auto f = factor(N);
    for (const auto& pr : pairs_with_product(omega)) {
        std::vector<int> lo(f.size()), hi(f.size());
        for (size_t k = 0; k < f.size(); ++k) {
            lo[k] = ord_p(pr.chi2.conductor(), f[k].p);
            hi[k] = f[k].e - ord_p(pr.chi1.conductor(), f[k].p);
        }
        std::vector<int> cur = lo;
        while (true) {
            out.push_back(make_basis_element(pr, cur));
            size_t k = 0;
            while (k < cur.size() && cur[k] == hi[k]) {
                cur[k] = lo[k];
                ++k;
            }
            if (k == cur.size()) break;
            ++cur[k];
        }
    }
    return out;
}

std::pair<i64, i64> basis_norm_sq(const EisensteinBasisElement& e) { return {e.norm_num, e.norm_den}; }

cplx phi_fin_value(const EisensteinBasisElement& e, i64 c, i64 d) {
    if (gcd(c, d) != 1) throw std::invalid_argument("phi_fin_value: (c, d) must be coprime");
    if (c % e.M != 0) return 0;
    return e.C * std::conj(e.chi1p(c / e.M)) * e.chi2p(d);
}

cplx sigma_s(const EisensteinBasisElement& e, i64 m, cplx s, GaussMode mode) {
    double M = static_cast<double>(e.M);
    if (m == 0) {
        if (!(s.real() > 0.5)) throw std::domain_error("sigma_s: m = 0 needs Re s > 1/2");
        if (!e.chi2_trivial()) return 0;
        return static_cast<double>(multiplicative_fn(e.M, MultFn::phi)) * cpow(M, -(1.0 + 2.0 * s)) *
               dirichlet_L(e.chi1p.conj(), 2.0 * s);
    }
    i64 am = m < 0 ? -m : m;
    cplx acc = 0;
    for (i64 c : divisors(am)) {
        cplx x = e.chi1p(c);
        if (x == 0.0) continue;
        acc += std::conj(x) * cpow(static_cast<double>(c), -2.0 * s) * gauss_sum(e.chi2M, m / c, mode);
    }
    return acc * cpow(M, -(1.0 + 2.0 * s));
}

cplx lambda_n_eis(i64 n, const CharacterPair& pair, cplx s) {
    if (n < 1 || gcd(n, pair.chi1.modulus()) != 1)
        throw std::invalid_argument("lambda_n_eis: n must be positive and coprime to N");
    cplx acc = 0;
    for (i64 d : divisors(n))
        acc += std::conj(pair.chi1(d) * pair.chi2(n / d)) * cpow(static_cast<double>(d), -2.0 * s);
    return cpow(static_cast<double>(n), s) * acc;
}

cplx dirichlet_L(const DirichletCharacter& chi, cplx s) {
    auto prim = chi.primitive();
    i64 q = prim.modulus();
    cplx base = 0;
    if (q == 1) {
        if (s == cplx(1, 0)) throw std::domain_error("dirichlet_L: pole of the principal character at s = 1");
        base = hurwitz_zeta(s, 1.0);
    } else if (s == cplx(1, 0)) {
        // zeta(s, a) = 1/(s-1) - digamma(a) + O(s-1) and sum chi = 0
        for (i64 r = 1; r < q; ++r) base -= prim(r) * boost::math::digamma(static_cast<double>(r) / double(q));
        base /= static_cast<double>(q);
    } else {
        for (i64 r = 1; r < q; ++r) {
            cplx x = prim(r);
            if (x == 0.0) continue;
            base += x * hurwitz_zeta(s, static_cast<double>(r) / double(q));
        }
        base *= cpow(static_cast<double>(q), -s);
    }
    for (auto [p, k] : factor(chi.modulus()))
        if (q % p != 0) base *= 1.0 - prim(p) * cpow(static_cast<double>(p), -s);
    return base;
}

cplx dirichlet_L_line(const DirichletCharacter& chi, double t, LVariant variant) {
    cplx s(1, 2 * t);
    return dirichlet_L(variant == LVariant::full ? chi.primitive() : chi, s);
}

cplx eisenstein_L_denominator(const EisensteinBasisElement& e, cplx s) {
    return dirichlet_L(e.pair.chi1.conj() * e.pair.chi2, 1.0 + 2.0 * s);
}

namespace {

// sum_{k in Z} ((k+u)^2 + v^2)^{-sig}, Re sig > 1/2
cplx line_sum(double u, double v, cplx sig) {
    double K = std::ceil(4 * v + 30);
    i64 kmin = static_cast<i64>(std::ceil(-K - u)), kmax = static_cast<i64>(std::floor(K - u));
    cplx acc = 0;
    for (i64 k = kmin; k <= kmax; ++k) {
        double w = static_cast<double>(k) + u;
        acc += std::exp(-sig * std::log(w * w + v * v));
    }
    // |k+u| > K: binomial series in (v/(k+u))^2 with Hurwitz tails
    double ap = static_cast<double>(kmax + 1) + u, am = -(static_cast<double>(kmin - 1) + u);
    cplx binom = 1;
    double v2j = 1;
    for (int j = 0; j < 80; ++j) {
        cplx z = 2.0 * sig + 2.0 * j;
        cplx term = binom * v2j * (hurwitz_zeta(z, ap) + hurwitz_zeta(z, am));
        acc += term;
        if (j > 1 && std::abs(term) < 1e-18 * std::abs(acc)) break;
        binom *= -(sig + static_cast<double>(j)) / static_cast<double>(j + 1);
        v2j *= v * v;
    }
    return acc;
}

void check_pole(const EisensteinBasisElement& e, cplx s) {
    if (e.chi1_trivial() && e.chi2_trivial() && std::abs(s - 0.5) < 1e-4) {
        std::ostringstream os;
        os.precision(17);
        os << "eisenstein_eval: s within 1e-4 of the pole at 1/2 (residue " << residue_half(e) << ")";
        throw std::domain_error(os.str());
    }
}

cplx scaled_fourier(const EisensteinBasisElement& e, cplx s, cplx z) {
    check_pole(e, s);
    double x = z.real(), y = z.imag();
    cplx Lden = eisenstein_L_denominator(e, s);
    cplx out = e.N1 == 1 ? cpow(y, 0.5 + s) : 0.0;
    double M = static_cast<double>(e.M);
    cplx gs = gamma_complex(s), gh = gamma_complex(0.5 + s);
    if (e.chi2_trivial()) {
        out += cpow(y, 0.5 - s) * static_cast<double>(multiplicative_fn(e.M, MultFn::phi)) * std::sqrt(M_PI) * gs *
               dirichlet_L(e.chi1p.conj(), 2.0 * s) / (cpow(M, 1.0 + 2.0 * s) * gh * Lden);
    }
    cplx pref = 2 * std::sqrt(y) * cpow(M_PI, 0.5 + s) / (gh * Lden);
    cplx acc = 0;
    for (i64 m = 1;; ++m) {
        double arg = 2 * M_PI * static_cast<double>(m) * y;
        if (m > 1 && arg > 45 + 2 * M_PI * y) break;
        cplx k = bessel_K(s, arg) * cpow(static_cast<double>(m), s);
        acc += k * (sigma_s(e, m, s) * std::exp(cplx(0, 2 * M_PI * x * double(m))) +
                    sigma_s(e, -m, s) * std::exp(cplx(0, -2 * M_PI * x * double(m))));
    }
    return out + pref * acc;
}

// E for the scaled element as y^{1/2+s} [chi1'(0) + F / L(1+2s)], F the full lattice sum over c = M c', d in Z
cplx scaled_direct(const EisensteinBasisElement& e, cplx s, cplx z) {
    if (!(s.real() > 0.5)) throw std::domain_error("eisenstein_eval: direct mode needs Re s > 1/2");
    double x = z.real(), y = z.imag();
    cplx sig = 0.5 + s;
    double M = static_cast<double>(e.M);
    // for c' > C the nonzero Poisson modes in d are below exp(-2 pi c' y) < 1e-17
    i64 C = static_cast<i64>(std::ceil(40 / (2 * M_PI * y)));
    cplx F = 0;
    for (i64 cp = 1; cp <= C; ++cp) {
        cplx w1 = e.chi1p(cp);
        if (w1 == 0.0) continue;
        cplx R = 0;
        for (i64 r = 0; r < e.M; ++r) {
            cplx w2 = e.chi2M(r);
            if (w2 == 0.0) continue;
            double u = static_cast<double>(cp) * x + static_cast<double>(r) / M;
            R += w2 * line_sum(u, static_cast<double>(cp) * y, sig);
        }
        F += std::conj(w1) * R;
    }
    if (e.chi2_trivial()) {
        // zeroth Poisson mode for c' > C, then sum_{c' > C} conj chi1'(c') c'^{-2s} through Hurwitz
        double N1 = static_cast<double>(e.N1);
        cplx tail = 0;
        for (i64 r = 1; r <= e.N1; ++r) {
            cplx w1 = e.chi1p(C + r);
            if (w1 == 0.0) continue;
            tail += std::conj(w1) * hurwitz_zeta(2.0 * s, static_cast<double>(C + r) / N1);
        }
        tail *= cpow(N1, -2.0 * s);
        F += static_cast<double>(multiplicative_fn(e.M, MultFn::phi)) * std::sqrt(M_PI) * gamma_complex(s) /
             gamma_complex(0.5 + s) * cpow(y, -2.0 * s) * tail;
    }
    F *= cpow(M, -2.0 * sig);
    cplx head = e.N1 == 1 ? 1.0 : 0.0;
    return cpow(y, sig) * (head + F / eisenstein_L_denominator(e, s));
}

}  // namespace

cplx eisenstein_scaled(const EisensteinBasisElement& e, cplx s, cplx z, EisMode mode) {
    if (!(z.imag() > 0)) throw std::domain_error("eisenstein_eval: z must lie in the upper half-plane");
    return mode == EisMode::direct ? scaled_direct(e, s, z) : scaled_fourier(e, s, z);
}

cplx eisenstein_eval(const EisensteinBasisElement& e, cplx s, cplx z, EisMode mode) {
    cplx v = eisenstein_scaled(e, s, z, mode);
    return mode == EisMode::direct ? e.C * v : v;
}

double residue_half(const EisensteinBasisElement& e) {
    if (!e.chi1_trivial() || !e.chi2_trivial())
        throw std::domain_error("residue_half: no pole (chi1 and chi2 are not both trivial)");
    double M = static_cast<double>(e.M);
    double r = 3 * static_cast<double>(multiplicative_fn(e.M, MultFn::phi)) / (M_PI * M * M);
    for (auto [p, i] : e.tuple) {
        double pp = static_cast<double>(p);
        r /= i == ord_p(e.N, p) ? 1 - 1 / (pp * pp) : 1 + 1 / pp;
    }
    return r;
}

cplx residue_half_numeric(const EisensteinBasisElement& e, cplx z, double radius, int points) {
    cplx acc = 0;
    for (int k = 0; k < points; ++k) {
        cplx w = std::exp(cplx(0, 2 * M_PI * (k + 0.5) / points));
        acc += scaled_fourier(e, 0.5 + radius * w, z) * w;
    }
    return acc * radius / static_cast<double>(points);
}

void write_basis_csv(std::ostream& os, const std::vector<EisensteinBasisElement>& basis) {
    os << "chi1,chi2,tuple,M,norm_sq\n";
    for (const auto& e : basis)
        os << e.pair.chi1.label() << ',' << e.pair.chi2.label() << ',' << e.tuple_label() << ',' << e.M << ','
           << e.norm_num << '/' << e.norm_den << '\n';
}

}  // namespace ktf
