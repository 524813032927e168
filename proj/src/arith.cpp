#include "ktf/arith.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ktf {

Factorization factor(i64 n) {
    if (n < 1) throw std::invalid_argument("factor: n must be positive, got " + std::to_string(n));
    Factorization f;
    for (i64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.push_back({p, e});
    }
    if (n > 1) f.push_back({n, 1});
    return f;
}

i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

i64 multiplicative_fn(i64 n, MultFn kind) {
    i64 r = 1;
    for (auto [p, e] : factor(n)) {
        switch (kind) {
        case MultFn::tau: r *= e + 1; break;
        case MultFn::sigma: r *= (ipow(p, e + 1) - 1) / (p - 1); break;
        case MultFn::phi: r *= ipow(p, e - 1) * (p - 1); break;
        case MultFn::mu:
            if (e > 1) return 0;
            r = -r;
            break;
        case MultFn::psi: r *= ipow(p, e - 1) * (p + 1); break;
        }
    }
    return r;
}

std::vector<i64> divisors(i64 n) {
    std::vector<i64> d{1};
    for (auto [p, e] : factor(n)) {
        size_t m = d.size();
        i64 pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < m; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

i64 gcd(i64 a, i64 b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) { i64 t = a % b; a = b; b = t; }
    return a;
}

i64 lcm(i64 a, i64 b) { return a / gcd(a, b) * b; }

i64 mod(i64 a, i64 m) {
    i64 r = a % m;
    return r < 0 ? r + m : r;
}

i64 mulmod(i64 a, i64 b, i64 m) {
    return static_cast<i64>(static_cast<__int128>(mod(a, m)) * mod(b, m) % m);
}

i64 powmod(i64 a, i64 e, i64 m) {
    if (m == 1) return 0;
    i64 r = 1;
    a = mod(a, m);
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 invmod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 r0 = m, r1 = mod(a, m), s0 = 0, s1 = 1;
    while (r1) {
        i64 q = r0 / r1;
        i64 t = r0 - q * r1; r0 = r1; r1 = t;
        t = s0 - q * s1; s0 = s1; s1 = t;
    }
    if (r0 != 1) throw std::invalid_argument("invmod: " + std::to_string(a) + " is not a unit mod " + std::to_string(m));
    return mod(s0, m);
}

int ord_p(i64 n, i64 p) {
    if (n == 0) throw std::invalid_argument("ord_p: n = 0");
    int e = 0;
    while (n % p == 0) { n /= p; ++e; }
    return e;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_prime_power(i64 n, i64* p, int* e) {
    if (n < 2) return false;
    auto f = factor(n);
    if (f.size() != 1) return false;
    if (p) *p = f[0].p;
    if (e) *e = f[0].e;
    return true;
}

bool is_square(i64 n, i64* root) {
    if (n < 0) return false;
    i64 r = static_cast<i64>(std::llround(std::sqrt(static_cast<double>(n))));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    if (root) *root = r;
    return r * r == n;
}

int legendre(i64 a, i64 p) {
    a = mod(a, p);
    if (a == 0) return 0;
    return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

namespace {

// smallest generator of (Z/p^k)^* for odd p
i64 primitive_root(i64 p, int k) {
    i64 phi = p - 1;
    auto fs = factor(phi);
    for (i64 g = 2;; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (auto [q, e] : fs)
            if (powmod(g, phi / q, p) == 1) { ok = false; break; }
        if (!ok) continue;
        if (k >= 2 && powmod(g, p - 1, p * p) == 1) continue;
        return g;
    }
}

// baby-step giant-step: smallest e in [0, ord) with g^e = x mod m
i64 bsgs(i64 g, i64 x, i64 ord, i64 m) {
    i64 s = static_cast<i64>(std::ceil(std::sqrt(static_cast<double>(ord))));
    std::unordered_map<i64, i64> baby;
    baby.reserve(static_cast<size_t>(s) * 2);
    i64 cur = 1;
    for (i64 j = 0; j < s; ++j) {
        baby.emplace(cur, j);
        cur = mulmod(cur, g, m);
    }
    i64 giant = invmod(powmod(g, s, m), m);
    cur = mod(x, m);
    for (i64 i = 0; i <= s; ++i) {
        auto it = baby.find(cur);
        if (it != baby.end()) return mod(i * s + it->second, ord);
        cur = mulmod(cur, giant, m);
    }
    throw std::invalid_argument("unit_log: discrete log does not exist");
}

}  // namespace

UnitGroupStructure unit_group(i64 p, int k) {
    if (!is_prime(p) || k < 1) throw std::invalid_argument("unit_group: need prime power");
    UnitGroupStructure g;
    g.p = p;
    g.k = k;
    g.modulus = ipow(p, k);
    if (p == 2) {
        if (k == 1) return g;  // trivial group
        g.generators.push_back(g.modulus - 1);
        g.orders.push_back(2);
        if (k >= 3) {
            g.generators.push_back(5);
            g.orders.push_back(ipow(2, k - 2));
        }
        return g;
    }
    g.generators.push_back(primitive_root(p, k));
    g.orders.push_back(ipow(p, k - 1) * (p - 1));
    return g;
}

std::vector<i64> unit_log(i64 x, const UnitGroupStructure& g) {
    x = mod(x, g.modulus);
    if (x % g.p == 0) throw std::invalid_argument("unit_log: " + std::to_string(x) + " is not a unit mod " + std::to_string(g.modulus));
    std::vector<i64> v(g.generators.size(), 0);
    if (g.p == 2) {
        if (g.k == 1) return v;
        if (g.k == 2) {
            v[0] = (x == 1) ? 0 : 1;
            return v;
        }
        v[0] = (x % 4 == 1) ? 0 : 1;
        i64 y = v[0] ? g.modulus - x : x;
        v[1] = bsgs(5, y, g.orders[1], g.modulus);
        return v;
    }
    v[0] = bsgs(g.generators[0], x, g.orders[0], g.modulus);
    return v;
}

i64 unit_exp(const std::vector<i64>& v, const UnitGroupStructure& g) {
    i64 r = 1 % g.modulus;
    for (size_t i = 0; i < v.size(); ++i) r = mulmod(r, powmod(g.generators[i], mod(v[i], g.orders[i]), g.modulus), g.modulus);
    return r;
}

std::pair<i64, i64> crt(const std::vector<std::pair<i64, i64>>& residues) {
    i64 x = 0, m = 1;
    for (auto [a, n] : residues) {
        if (n < 1) throw std::invalid_argument("crt: moduli must be positive");
        if (gcd(m, n) != 1) throw std::invalid_argument("crt: moduli are not pairwise coprime");
        // x + m*t = a mod n
        i64 t = mulmod(mod(a - x, n), invmod(m, n), n);
        x = x + m * t;
        m *= n;
        x = mod(x, m);
    }
    return {x, m};
}

}  // namespace ktf
