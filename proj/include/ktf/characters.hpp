#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ktf/arith.hpp"

namespace ktf {

using cplx = std::complex<double>;

// e(num/den) = exp(2 pi i num/den) with the angle reduced exactly first.
cplx unit_root(i64 num, i64 den);

// Dirichlet character mod N, stored as exponent vectors on the fixed unit-group
// generators of each prime power p^k || N.
class DirichletCharacter {
public:
    struct Part {
        UnitGroupStructure group;
        std::vector<i64> exps;
    };

    DirichletCharacter();  // trivial character mod 1
    DirichletCharacter(i64 modulus, std::vector<Part> parts);

    static DirichletCharacter principal(i64 modulus);
    // exps listed per prime power of modulus, in increasing p
    static DirichletCharacter from_exponents(i64 modulus, const std::vector<std::vector<i64>>& exps);

    i64 modulus() const { return modulus_; }
    i64 conductor() const { return conductor_; }
    const std::vector<Part>& parts() const { return parts_; }
    i64 angle_den() const { return den_; }
    // numerator of the angle of chi(n) over angle_den(), or -1 when gcd(n, N) > 1
    i64 angle_num(i64 n) const { return table_[static_cast<size_t>(mod(n, modulus_))]; }
    cplx operator()(i64 n) const;
    bool is_principal() const;
    bool is_real() const;
    int parity() const;  // chi(-1) = +1 or -1

    DirichletCharacter conj() const;
    DirichletCharacter operator*(const DirichletCharacter& o) const;  // same modulus
    bool operator==(const DirichletCharacter& o) const;

    // Character mod new_modulus (a multiple of conductor) agreeing on common units.
    DirichletCharacter induce(i64 new_modulus) const;
    // Product of the local components at primes dividing sub (sub must divide N).
    DirichletCharacter project(i64 sub) const;
    DirichletCharacter primitive() const { return induce(conductor_); }

    std::string label() const;
    std::string to_json() const;
    static DirichletCharacter from_json(const std::string& s);

private:
    i64 modulus_ = 1;
    std::vector<Part> parts_;
    i64 den_ = 1;
    i64 conductor_ = 1;
    std::vector<i64> table_;

    void build();
    i64 local_angle(size_t part, i64 x) const;  // over den_
};

struct CharacterPair {
    DirichletCharacter chi1, chi2;
};

std::vector<DirichletCharacter> enumerate_characters(i64 N);
cplx char_eval(const DirichletCharacter& chi, i64 n);
i64 conductor(const DirichletCharacter& chi);
DirichletCharacter local_component(const DirichletCharacter& chi, i64 p, i64 M);
std::vector<CharacterPair> pairs_with_product(const DirichletCharacter& omega);

}  // namespace ktf
