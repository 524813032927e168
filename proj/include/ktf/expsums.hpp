#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ktf/characters.hpp"

namespace ktf {

// S_chi(a, b; n; c) with chi mod N, N | c.
struct KloostermanQuery {
    i64 a = 0;
    i64 b = 0;
    i64 n = 1;
    i64 c = 1;
    DirichletCharacter chi;
};

enum class GaussMode { direct, formula };
enum class KlMode { direct, factored, salie };
enum class QuadMode { formula, brute };
enum class Side { lhs, rhs };

struct WeilCertificate {
    cplx value;
    double bound1 = 0;
    double bound2 = 0;
    bool ok1 = true;
    bool ok2 = true;
    bool satisfied() const { return ok1 && ok2; }
};

// Number of roots of a x^2 + B x + c0 = 0 mod p^n and how many of them are divisible by p.
struct QuadCount {
    i64 count = 0;
    i64 divisible = 0;
    bool operator==(const QuadCount&) const = default;
};

// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(cplx v);
    cplx value() const { return {re_ + cre_, im_ + cim_}; }

private:
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

cplx gauss_sum(const DirichletCharacter& chi, i64 m, GaussMode mode = GaussMode::formula);

void validate(const KloostermanQuery& q);
cplx kloosterman(const KloostermanQuery& q, KlMode mode = KlMode::factored);
// classical S(a, b; c)
cplx kloosterman_classical(i64 a, i64 b, i64 c);

// Local factor S_{chi_p}(a, b; p^k; p^l). chi_p is a character mod a power of p,
// or std::nullopt for the constant function one.
cplx kloosterman_local(i64 a, i64 b, i64 p, int k, int l, const std::optional<DirichletCharacter>& chi_p,
                       bool use_salie = false);

// Twisted sum over units: sum_{x in (Z/p^l)^*} conj chi(x) e((a x + b xbar)/p^l), chi mod p^j, j <= l.
cplx twisted_unit_sum(i64 a, i64 b, i64 p, int l, const DirichletCharacter& chi);

// The parameter B of the stationary-phase evaluation for chi mod p^l, l >= 2.
i64 salie_parameter(const DirichletCharacter& chi, i64 p, int l);
cplx salie_eval(i64 a, i64 b, i64 p, int l, const DirichletCharacter& chi);

WeilCertificate weil_certificate(const KloostermanQuery& q);
double classical_weil_bound(i64 a, i64 b, i64 c);

cplx selberg_identity(const KloostermanQuery& q, Side side);
// S(a_s1, a_s2; a_s3; c) over the six permutations s of (a1, a2, a3), trivial character
std::array<cplx, 6> kloosterman_permutations(i64 a1, i64 a2, i64 a3, i64 c);

QuadCount quad_solution_count(i64 a, i64 B, i64 c0, i64 p, int n, QuadMode mode);
// Solutions of x^2 = D mod p^n, p not dividing D.
i64 landau_count(i64 D, i64 p, int n);

struct ScanRow {
    i64 N;
    std::string chi_label;
    i64 a, b, n, c;
    cplx direct, factored, salie;
    double bound1, bound2;
    bool agree, ok;
};

struct ScanSummary {
    i64 queries = 0;
    i64 mismatches = 0;
    i64 violations = 0;
    double max_delta = 0;
};

// Deterministic (a, b) sample used by the scans.
std::vector<std::pair<i64, i64>> scan_pairs(i64 c, int count = 20);

// Equivalence and Weil scan over c <= max_c with N | c, N <= max_N, all chi mod N, n in 1..max_n.
// on_row, when set, receives every row.
ScanSummary kloosterman_scan(i64 max_c, i64 max_N, i64 max_n, double tol,
                             const std::function<void(const ScanRow&)>& on_row = {});

}  // namespace ktf
