#include "ktf/expsums.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace ktf {

void CompensatedSum::add(cplx v) {
    auto step = [](double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    };
    step(re_, cre_, v.real());
    step(im_, cim_, v.imag());
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// e(k/L) for k in [0, L), tabulated for moderate L
class Roots {
public:
    explicit Roots(i64 L) : L_(L) {
        if (L <= (1 << 16)) {
            thread_local std::unordered_map<i64, std::vector<cplx>> cache;
            auto it = cache.find(L);
            if (it == cache.end()) {
                std::vector<cplx> t(static_cast<size_t>(L));
                for (i64 k = 0; k < L; ++k) t[static_cast<size_t>(k)] = unit_root(k, L);
                it = cache.emplace(L, std::move(t)).first;
            }
            table_ = &it->second;
        }
    }
    cplx operator()(i64 k) const {
        k = mod(k, L_);
        return table_ ? (*table_)[static_cast<size_t>(k)] : unit_root(k, L_);
    }

private:
    i64 L_;
    const std::vector<cplx>* table_ = nullptr;
};

int ord_or_inf(i64 x, i64 p) { return x == 0 ? kInf : ord_p(x, p); }

bool is_p_power(i64 m, i64 p) {
    while (m % p == 0) m /= p;
    return m == 1;
}

// chi viewed as a character mod p^l (its modulus must be a power of p dividing p^l)
DirichletCharacter lift_to(const DirichletCharacter& chi, i64 p, int l) {
    i64 q = ipow(p, l);
    if (chi.modulus() == q) return chi;
    if (chi.is_principal() && chi.modulus() > 1) return DirichletCharacter::principal(q);
    return chi.induce(q);
}

cplx kloosterman_direct(const KloostermanQuery& q) {
    const auto& chi = q.chi;
    i64 c = q.c;
    i64 L = lcm(chi.angle_den(), c);
    Roots R(L);
    i64 sc = L / c, sd = L / chi.angle_den();
    i64 a = mod(q.a, c), b = mod(q.b, c), nn = mod(q.n, c);
    CompensatedSum s;
    for (i64 x = 0; x < c; ++x) {
        i64 ang = chi.angle_num(x);
        if (ang < 0) continue;
        i64 g = gcd(x, c);
        if (nn % g != 0) continue;
        i64 cg = c / g;
        i64 x0 = cg == 1 ? 0 : mulmod(nn / g, invmod((x / g) % cg, cg), cg);
        i64 ax = mulmod(a, x, c);
        for (i64 t = 0; t < g; ++t) {
            i64 xp = x0 + t * cg;
            i64 phase = mod(ax + mulmod(b, xp, c), c);
            s.add(R(phase * sc - ang * sd));
        }
    }
    return s.value();
}

cplx unit_sum_dispatch(i64 a, i64 b, i64 p, int l, const DirichletCharacter& chi, bool use_salie) {
    if (use_salie && l >= 2 && (mod(a, p) != 0 || mod(b, p) != 0)) return salie_eval(a, b, p, l, lift_to(chi, p, l));
    return twisted_unit_sum(a, b, p, l, chi);
}

// sum over t in (Z/p^r)^* of e(a t/p^r)
i64 ramanujan_unit(int r, int ap, i64 p) {
    if (r == 0) return 1;
    if (r <= ap) return ipow(p, r) - ipow(p, r - 1);
    if (r == ap + 1) return -ipow(p, r - 1);
    return 0;
}

}  // namespace

cplx gauss_sum(const DirichletCharacter& chi, i64 m, GaussMode mode) {
    i64 M = chi.modulus();
    if (mode == GaussMode::direct) {
        i64 L = lcm(chi.angle_den(), M);
        Roots R(L);
        i64 sM = L / M, sd = L / chi.angle_den();
        i64 mm = mod(m, M);
        CompensatedSum s;
        for (i64 d = 0; d < M; ++d) {
            i64 ang = chi.angle_num(d);
            if (ang < 0) continue;
            s.add(R(ang * sd + mulmod(d, mm, M) * sM));
        }
        return s.value();
    }
    auto chi0 = chi.primitive();
    i64 cc = chi0.modulus();
    i64 ell = M / cc;
    cplx tau = gauss_sum(chi0, 1, GaussMode::direct);
    i64 g = gcd(ell, m < 0 ? -m : m);
    CompensatedSum s;
    for (i64 d : divisors(g)) {
        i64 mu = multiplicative_fn(ell / d, MultFn::mu);
        if (mu == 0) continue;
        s.add(double(d * mu) * chi0(ell / d) * std::conj(chi0(m / d)));
    }
    return tau * s.value();
}

void validate(const KloostermanQuery& q) {
    if (q.c < 1) throw std::invalid_argument("kloosterman: c must be positive");
    if (q.n == 0) throw std::invalid_argument("kloosterman: n must be nonzero");
    if (q.c % q.chi.modulus() != 0)
        throw std::invalid_argument("kloosterman: character modulus " + std::to_string(q.chi.modulus()) + " does not divide c=" +
                                    std::to_string(q.c));
}

cplx twisted_unit_sum(i64 a, i64 b, i64 p, int l, const DirichletCharacter& chi) {
    i64 q = ipow(p, l);
    if (q % chi.modulus() != 0 || !is_p_power(chi.modulus(), p))
        throw std::invalid_argument("twisted_unit_sum: character modulus must be a power of p dividing p^l");
    i64 L = lcm(chi.angle_den(), q);
    Roots R(L);
    i64 sc = L / q, sd = L / chi.angle_den();
    a = mod(a, q);
    b = mod(b, q);
    CompensatedSum s;
    for (i64 x = 1; x < q + (q == 1); ++x) {
        if (q > 1 && x % p == 0) continue;
        i64 xb = q == 1 ? 0 : invmod(x, q);
        i64 ang = chi.angle_num(x);
        if (ang < 0) continue;
        s.add(R(mod(mulmod(a, x, q) + mulmod(b, xb, q), q) * sc - ang * sd));
    }
    return s.value();
}

cplx kloosterman_classical(i64 a, i64 b, i64 c) {
    return kloosterman(KloostermanQuery{a, b, 1, c, DirichletCharacter()}, KlMode::factored);
}

cplx kloosterman_local(i64 a, i64 b, i64 p, int k, int l, const std::optional<DirichletCharacter>& chi_p, bool use_salie) {
    if (l < 1 || k < 0) throw std::invalid_argument("kloosterman_local: need l >= 1 and k >= 0");
    i64 q = ipow(p, l);
    a = mod(a, q);
    b = mod(b, q);
    if (chi_p) {
        i64 bb = k >= l ? 0 : mulmod(b, ipow(p, k), q);
        return unit_sum_dispatch(a, bb, p, l, *chi_p, use_salie);
    }
    int ap = ord_or_inf(a, p), bp = ord_or_inf(b, p);
    if (k < l) {
        if (static_cast<i64>(k) > static_cast<i64>(ap) + bp) return 0.0;
        auto principal = DirichletCharacter::principal(p);
        CompensatedSum s;
        for (int i = std::max(0, k - ap); i <= std::min(bp, k); ++i) {
            i64 ai = a / ipow(p, k - i), bi = b / ipow(p, i);
            s.add(unit_sum_dispatch(ai, bi, p, l - k, principal, use_salie));
        }
        return double(ipow(p, k)) * s.value();
    }
    if (static_cast<i64>(l) > static_cast<i64>(ap) + bp + 1) return 0.0;
    i64 total = 0;
    for (int i = 0; i <= l; ++i)
        if (i <= bp) total += ramanujan_unit(l - i, ap, p) * ipow(p, i);
    return double(total);
}

cplx kloosterman(const KloostermanQuery& q, KlMode mode) {
    validate(q);
    if (mode == KlMode::direct) return kloosterman_direct(q);
    i64 N = q.chi.modulus();
    cplx prod = 1.0;
    for (auto [p, cp] : factor(q.c)) {
        i64 pc = ipow(p, cp);
        i64 rest = q.c / pc;
        i64 inv = invmod(mod(rest, pc), pc);
        int np = ord_p(q.n, p);
        i64 nrest = q.n / ipow(p, np);
        i64 a = mulmod(mod(q.a, pc), inv, pc);
        i64 b = mulmod(mulmod(mod(q.b, pc), inv, pc), mod(nrest, pc), pc);
        std::optional<DirichletCharacter> chp;
        if (N % p == 0) chp = q.chi.project(ipow(p, ord_p(N, p)));
        prod *= kloosterman_local(a, b, p, np, cp, chp, mode == KlMode::salie);
        if (prod == 0.0) break;
    }
    return prod;
}

i64 salie_parameter(const DirichletCharacter& chi, i64 p, int l) {
    if (l < 2) throw std::invalid_argument("salie_parameter: need l >= 2");
    int alpha = l / 2;
    bool odd = l % 2 == 1;
    i64 P = ipow(p, odd ? alpha + 1 : alpha);
    i64 g = 1 + ipow(p, alpha);
    i64 ang = chi.angle_num(g);
    i64 den = chi.angle_den();
    if (ang < 0) throw std::invalid_argument("salie_parameter: character is not mod a power of p");
    if (mod(ang * P, den) != 0) throw std::logic_error("salie_parameter: unexpected order of chi(1+p^alpha)");
    i64 Bp = mod(-(ang * P / den), P);
    if (!odd || p == 2) return Bp;
    i64 h = (p + 1) / 2;
    return mulmod(Bp, 1 + h * ipow(p, alpha), P);
}

cplx salie_eval(i64 a, i64 b, i64 p, int l, const DirichletCharacter& chi_in) {
    if (l < 2) throw std::invalid_argument("salie_eval: need modulus p^l with l >= 2");
    if (mod(a, p) == 0 && mod(b, p) == 0)
        throw std::invalid_argument("salie_eval: p divides both a and b; split off the common p-power first");
    auto chi = lift_to(chi_in, p, l);
    if (p == 2 && l == 3) return twisted_unit_sum(a, b, p, l, chi);
    i64 c = ipow(p, l);
    int alpha = l / 2;
    i64 pa = ipow(p, alpha);
    a = mod(a, c);
    b = mod(b, c);
    i64 B = salie_parameter(chi, p, l);
    i64 L = lcm(chi.angle_den(), c);
    Roots R(L);
    i64 sc = L / c, sd = L / chi.angle_den();
    CompensatedSum s;
    for (i64 y = 1; y < pa; ++y) {
        if (y % p == 0) continue;
        i64 yb = invmod(y, c);
        i64 ang = chi.angle_num(y);
        cplx base = R(mod(mulmod(a, y, c) + mulmod(b, yb, c), c) * sc - ang * sd);
        if (l % 2 == 0) {
            if (mod(mulmod(a, y, pa) - mulmod(b, yb, pa) + B, pa) != 0) continue;
            s.add(base);
            continue;
        }
        i64 P = pa * p;
        cplx G = 0.0;
        if (p == 2) {
            i64 Lv = mod(mulmod(a, y, P) - mulmod(b, yb, P) + B + B * (pa / 2), P);
            if (Lv % pa != 0) continue;
            i64 t = Lv / pa;
            i64 Q = mod(2 * mulmod(b, yb, 4) - B, 4);
            G = 1.0 + unit_root(2 * t + Q, 4);
        } else {
            i64 Lv = mod(mulmod(a, y, P) - mulmod(b, yb, P) + B, P);
            if (Lv % pa != 0) continue;
            i64 t = Lv / pa;
            i64 h = (p + 1) / 2;
            i64 Q = mod(mulmod(b, yb, p) - mulmod(h, B, p), p);
            CompensatedSum gs;
            for (i64 u = 0; u < p; ++u) gs.add(unit_root(mod(u * t + u * u % p * Q, p), p));
            G = gs.value();
        }
        s.add(base * G);
    }
    return double(pa) * s.value();
}

double classical_weil_bound(i64 a, i64 b, i64 c) {
    double g = double(gcd(gcd(a, b), c));
    return double(multiplicative_fn(c, MultFn::tau)) * std::sqrt(g) * std::sqrt(double(c));
}

WeilCertificate weil_certificate(const KloostermanQuery& q) {
    WeilCertificate w;
    w.value = kloosterman(q, KlMode::factored);
    i64 an = q.a * q.n, bn = q.b * q.n;
    double g = double(gcd(gcd(an, bn), q.c));
    double base = double(multiplicative_fn(q.n < 0 ? -q.n : q.n, MultFn::tau)) * double(multiplicative_fn(q.c, MultFn::tau)) *
                  std::sqrt(g) * std::sqrt(double(q.c));
    double cc = double(q.chi.conductor());
    double rad = 1;
    for (auto [p, e] : factor(q.chi.conductor())) rad *= double(p);
    w.bound1 = base * std::sqrt(cc);
    w.bound2 = base * std::pow(cc, 0.25) * std::pow(rad, 0.25);
    double v = std::abs(w.value);
    w.ok1 = v <= w.bound1 * (1 + 1e-12) + 1e-9;
    w.ok2 = v <= w.bound2 * (1 + 1e-12) + 1e-9;
    return w;
}

cplx selberg_identity(const KloostermanQuery& q, Side side) {
    validate(q);
    i64 N = q.chi.modulus();
    if (gcd(N, q.n) != 1 && gcd(N, q.b) != 1)
        throw std::invalid_argument("selberg_identity: requires gcd(N, n) = 1 or gcd(N, b) = 1");
    if (side == Side::lhs) return kloosterman(q, KlMode::factored);
    CompensatedSum s;
    for (i64 d : divisors(gcd(gcd(q.n, q.b), q.c))) {
        KloostermanQuery r{q.a, q.b * (q.n / d) / d, 1, q.c / d, q.chi};
        s.add(std::conj(q.chi(d)) * double(d) * kloosterman(r, KlMode::factored));
    }
    return s.value();
}

std::array<cplx, 6> kloosterman_permutations(i64 a1, i64 a2, i64 a3, i64 c) {
    if (a1 == 0 || a2 == 0 || a3 == 0) throw std::invalid_argument("kloosterman_permutations: entries must be nonzero");
    std::array<i64, 3> v{a1, a2, a3};
    std::array<int, 3> idx{0, 1, 2};
    std::array<cplx, 6> out;
    int k = 0;
    do {
        out[k++] = kloosterman(KloostermanQuery{v[idx[0]], v[idx[1]], v[idx[2]], c, DirichletCharacter()}, KlMode::factored);
    } while (std::next_permutation(idx.begin(), idx.end()));
    return out;
}

i64 landau_count(i64 D, i64 p, int n) {
    if (mod(D, p) == 0) throw std::invalid_argument("landau_count: p divides D");
    if (n <= 0) return 1;
    if (p == 2) {
        if (n == 1) return 1;
        if (n == 2) return mod(D, 4) == 1 ? 2 : 0;
        return mod(D, 8) == 1 ? 4 : 0;
    }
    return 1 + legendre(D, p);
}

QuadCount quad_solution_count(i64 a, i64 B, i64 c0, i64 p, int n, QuadMode mode) {
    if (mod(a, p) == 0) throw std::invalid_argument("quad_solution_count: p divides the leading coefficient");
    if (n < 1) throw std::invalid_argument("quad_solution_count: n must be positive");
    QuadCount r;
    if (mode == QuadMode::brute) {
        i64 q = ipow(p, n);
        for (i64 x = 0; x < q; ++x) {
            i64 v = mod(mulmod(mod(a, q), mulmod(x, x, q), q) + mulmod(mod(B, q), x, q) + c0, q);
            if (v == 0) {
                ++r.count;
                if (x % p == 0) ++r.divisible;
            }
        }
        return r;
    }
    i64 D = B * B - 4 * a * c0;
    int delta = ord_or_inf(D, p);
    i64 Dp = D == 0 ? 1 : D / ipow(p, delta);
    if (p != 2) {
        if (delta >= n) {
            r.count = ipow(p, n / 2);
        } else if (delta % 2 == 0 && legendre(Dp, p) == 1) {
            r.count = 2 * ipow(p, delta / 2);
        }
        if (r.count == 0) return r;
        if (delta > 0) r.divisible = mod(B, p) == 0 ? r.count : 0;
        else r.divisible = mod(c0, p) == 0 ? 1 : 0;
        return r;
    }
    if (mod(B, 2) == 1) {
        if (mod(D, 8) == 1) r = {2, 1};
        return r;
    }
    if (delta >= n + 2) {
        r.count = ipow(2, n / 2);
    } else if (delta % 2 == 0 && mod(Dp, ipow(2, std::min(n - delta + 2, 3))) == 1) {
        r.count = ipow(2, std::min(n - delta + 1, 2)) * ipow(2, delta / 2 - 1);
    }
    r.divisible = mod(c0, 2) == 0 ? r.count : 0;
    return r;
}

std::vector<std::pair<i64, i64>> scan_pairs(i64 c, int count) {
    std::vector<std::pair<i64, i64>> out;
    for (i64 i = 0; i < count; ++i) out.push_back({mod(5 * i * i + 3 * i + 1, c), mod(i * i * i + 13 * i, c)});
    return out;
}

ScanSummary kloosterman_scan(i64 max_c, i64 max_N, i64 max_n, double tol, const std::function<void(const ScanRow&)>& on_row) {
    ScanSummary sum;
    for (i64 N = 1; N <= max_N; ++N) {
        for (const auto& chi : enumerate_characters(N)) {
            std::string label = chi.label();
            for (i64 c = N; c <= max_c; c += N) {
                for (auto [a, b] : scan_pairs(c)) {
                    for (i64 n = 1; n <= max_n; ++n) {
                        KloostermanQuery q{a, b, n, c, chi};
                        ScanRow row{N, label, a, b, n, c, kloosterman(q, KlMode::direct), 0.0, 0.0, 0, 0, false, false};
                        row.factored = kloosterman(q, KlMode::factored);
                        row.salie = kloosterman(q, KlMode::salie);
                        double d = std::max(std::abs(row.direct - row.factored), std::abs(row.direct - row.salie));
                        sum.max_delta = std::max(sum.max_delta, d);
                        row.agree = d <= tol;
                        auto w = weil_certificate(q);
                        row.bound1 = w.bound1;
                        row.bound2 = w.bound2;
                        row.ok = w.satisfied();
                        ++sum.queries;
                        if (!row.agree) ++sum.mismatches;
                        if (!row.ok) ++sum.violations;
                        if (on_row) on_row(row);
                    }
                }
            }
        }
    }
    return sum;
}

}  // namespace ktf
