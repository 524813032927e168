#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ktf/arith.hpp"
#include "ktf/characters.hpp"
#include "ktf/expsums.hpp"

namespace ktf {

// Basis vector phi_(i_p) of the weight-0 Eisenstein space for (chi1, chi2), chi1 chi2 = omega' mod N.
struct EisensteinBasisElement {
    i64 N = 1;
    CharacterPair pair;                     // both mod N
    std::vector<std::pair<i64, int>> tuple; // (p, i_p) for p | N, increasing p
    i64 M = 1, N1 = 1, N2 = 1;
    DirichletCharacter chi1p;  // chi1' mod N1
    DirichletCharacter chi2p;  // chi2' mod N2
    DirichletCharacter chi2M;  // chi2' read mod M (c_chi2 | M)
    cplx C = 1;                // C_(i_p)
    i64 norm_num = 1, norm_den = 1;

    double norm_sq() const { return static_cast<double>(norm_num) / static_cast<double>(norm_den); }
    bool chi1_trivial() const { return pair.chi1.is_principal(); }
    bool chi2_trivial() const { return pair.chi2.is_principal(); }
    std::string tuple_label() const;  // "2^1.3^0", "-" for N = 1
};

// Empty for odd omega' (no weight-0 forms).
std::vector<EisensteinBasisElement> enumerate_basis(i64 N, const DirichletCharacter& omega);
EisensteinBasisElement make_basis_element(const CharacterPair& pair, const std::vector<int>& exps);

// (numerator, denominator) in lowest terms
std::pair<i64, i64> basis_norm_sq(const EisensteinBasisElement& e);

// phi_fin of [[a, b], [c, d]] in SL_2(Z); needs gcd(c, d) = 1.
cplx phi_fin_value(const EisensteinBasisElement& e, i64 c, i64 d);

// sigma_s(chi1', chi2', m); m = 0 needs Re s > 1/2.
cplx sigma_s(const EisensteinBasisElement& e, i64 m, cplx s, GaussMode mode = GaussMode::formula);

// n^s sum_{d | n} conj(chi1(d) chi2(n/d)) d^{-2s}, gcd(n, N) = 1.
cplx lambda_n_eis(i64 n, const CharacterPair& pair, cplx s);

// L(s, chi) for chi read mod its modulus (Euler factors at p | modulus absent). Pole at s = 1, chi principal.
cplx dirichlet_L(const DirichletCharacter& chi, cplx s);

enum class LVariant { full, partial };
// L(1 + 2it, chi): full uses the primitive character, partial the character mod its modulus.
cplx dirichlet_L_line(const DirichletCharacter& chi, double t, LVariant variant);

// L(1+2s, conj(chi1) chi2) mod N, the normalizing denominator of the scaled series.
cplx eisenstein_L_denominator(const EisensteinBasisElement& e, cplx s);

enum class EisMode { direct, fourier };

// direct: E_phi for phi = phi_(i_p) itself, Re s > 1/2.
// fourier: the scaled element phi_(i_p) / C_(i_p), continued; refuses |s - 1/2| < 1e-4 at the pole.
cplx eisenstein_eval(const EisensteinBasisElement& e, cplx s, cplx z, EisMode mode);
// both modes normalized to the scaled element
cplx eisenstein_scaled(const EisensteinBasisElement& e, cplx s, cplx z, EisMode mode);

// residue at s = 1/2 (chi1, chi2 both trivial)
double residue_half(const EisensteinBasisElement& e);
// (1/2 pi i) contour integral of the fourier mode around s = 1/2
cplx residue_half_numeric(const EisensteinBasisElement& e, cplx z, double radius = 0.01, int points = 64);

// rows chi1,chi2,tuple,M,norm_sq
void write_basis_csv(std::ostream& os, const std::vector<EisensteinBasisElement>& basis);

}  // namespace ktf
