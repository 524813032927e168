#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ktf {

using i64 = std::int64_t;

struct PrimePower {
    i64 p;
    int e;
    bool operator==(const PrimePower&) const = default;
};

using Factorization = std::vector<PrimePower>;

enum class MultFn { tau, sigma, phi, mu, psi };

// (Z/p^k)^* as a product of cyclic groups.
struct UnitGroupStructure {
    i64 p = 2;
    int k = 1;
    i64 modulus = 2;
    std::vector<i64> generators;
    std::vector<i64> orders;
};

Factorization factor(i64 n);
i64 multiplicative_fn(i64 n, MultFn kind);
std::vector<i64> divisors(i64 n);

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
i64 mod(i64 a, i64 m);                 // representative in [0, m)
i64 mulmod(i64 a, i64 b, i64 m);
i64 powmod(i64 a, i64 e, i64 m);
i64 invmod(i64 a, i64 m);              // throws if not invertible
i64 ipow(i64 b, int e);
int ord_p(i64 n, i64 p);               // n != 0
bool is_prime(i64 n);
bool is_prime_power(i64 n, i64* p = nullptr, int* e = nullptr);
bool is_square(i64 n, i64* root = nullptr);
int legendre(i64 a, i64 p);            // odd prime p

UnitGroupStructure unit_group(i64 p, int k);
std::vector<i64> unit_log(i64 x, const UnitGroupStructure& g);
i64 unit_exp(const std::vector<i64>& v, const UnitGroupStructure& g);

// Residues (value, modulus) with pairwise coprime moduli; returns (x, prod).
std::pair<i64, i64> crt(const std::vector<std::pair<i64, i64>>& residues);

}  // namespace ktf
