#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ktf/eisenstein.hpp"
#include "ktf/transforms.hpp"

namespace ktf {

struct Tolerances {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
};

struct KtfRequest {
    i64 N = 1;
    DirichletCharacter omega;  // mod N, even
    i64 n = 1, m1 = 1, m2 = 1;
    TestFunction h = TestFunction::gaussian(1);
    Tolerances tol;
    // c-sum over c = N, 2N, ..., K N. Fixed K when set; otherwise the smallest K >= c_terms_min
    // whose tail bound meets max(abs_tol, rel_tol psi(N) |J|), failing past c_terms_max.
    std::optional<i64> c_terms;
    i64 c_terms_min = 1000;
    i64 c_terms_max = 200000;
};

void validate(const KtfRequest& req);

struct KtfReport {
    KtfRequest request;
    cplx geo_main, geo_kloosterman, spec_continuous, spec_cuspidal_inferred;
    i64 c_terms_used = 0;
    double tail_bound = 0;
    double t_quadrature_error = 0;
    double J = 0;    // (1/pi^2) int h(t) tanh(pi t) t dt
    double psi = 0;  // psi(N)
    cplx ratio() const { return spec_cuspidal_inferred / (J * psi); }
};

std::string report_to_json(const KtfReport& r);
// Re-verifies spec_cuspidal_inferred = geo_main + geo_kloosterman - spec_continuous.
KtfReport report_from_json(const std::string& s);

struct SpectralDatum {
    cplx t;  // real, or i y with |y| < 1/2
    cplx a_m1, a_m2;
    double norm_sq = 1;
    std::optional<cplx> lambda;
};

// Raised when a certified bound misses the requested tolerance.
class ToleranceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct TWitness {
    bool holds = false;
    i64 b = 0;
};
TWitness t_predicate(i64 m1, i64 m2, i64 n);

// sum_{k > K} tau(k) k^{-3/2} <= K^{-1/2}(2 ln K + 4 + 4 gamma) + 2.5/K, from the Dirichlet divisor
// problem with |Delta(x)| <= sqrt(x).
double divisor_tail_bound(i64 K);

// I(x) = int_R J_{2it}(x) h(t) t / cosh(pi t) dt
class BesselKernel {
public:
    explicit BesselKernel(const TestFunction& h);
    cplx operator()(double x) const;
    // sup over a log grid in (0, x_max] of |I(x)| / x, padded by 5%
    double slope_bound(double x_max) const;
    double t_max() const { return T_; }

private:
    TestFunction h_;
    double T_;
    mutable std::unordered_map<double, cplx> cache_;
};

struct SeriesResult {
    cplx value;
    i64 c_terms = 0;
    double tail_bound = 0;
    double abs_mass = 0;  // sum of |terms|
};

struct ContinuousResult {
    cplx value;
    double quad_error = 0;
    double abs_mass = 0;  // quadrature of |integrand|
};

struct CrosscheckDeltas {
    cplx main_direct, main_classical;
    cplx kl_direct, kl_classical;
    cplx cont_direct, cont_classical;
    // |direct - classical| over max(|direct|, |classical|, mass of the summands)
    double main = 0, kloosterman = 0, continuous = 0;
    double max() const;
};

// Everything that depends on (N, omega', h) only; requests differing in n, m1, m2 share it.
class KtfEngine {
public:
    KtfEngine(i64 N, DirichletCharacter omega, TestFunction h, Tolerances tol = {});

    i64 N() const { return N_; }
    const DirichletCharacter& omega() const { return omega_; }
    double psi() const { return psi_; }
    double J() const { return J_; }
    double J_error() const { return J_err_; }
    const BesselKernel& kernel() const { return kernel_; }
    const std::vector<EisensteinBasisElement>& basis() const { return basis_; }

    cplx geo_main(i64 n, i64 m1, i64 m2) const;
    // c_terms: fixed K, or nullopt for tolerance driven (see KtfRequest)
    SeriesResult geo_kloosterman(i64 n, i64 m1, i64 m2, std::optional<i64> c_terms, i64 c_min = 1000,
                                 i64 c_max = 200000) const;
    ContinuousResult spec_continuous(i64 n, i64 m1, i64 m2) const;
    KtfReport report(const KtfRequest& req) const;

    // term-by-term through the n = 1 formula at (n m1 / l^2, m2), l | (n, m1)
    CrosscheckDeltas crosscheck(i64 n, i64 m1, i64 m2, i64 c_terms) const;

    // bound on the Kloosterman tail past c = K N
    double kloosterman_tail(i64 n, i64 m1, i64 m2, i64 K) const;

private:
    i64 N_;
    DirichletCharacter omega_;
    TestFunction h_;
    Tolerances tol_;
    double psi_, J_, J_err_;
    BesselKernel kernel_;
    std::vector<EisensteinBasisElement> basis_;

    struct Node {
        double t, w;
    };
    std::vector<Node> fine_, coarse_;
    // per rule, per node, per basis element: w h(t) / (pi norm^2 |L(1+2it)|^2)
    std::vector<std::vector<double>> fine_weight_, coarse_weight_;
    std::vector<bool> pole_;  // conj(chi1) chi2 principal: |t| < 1e-6 excised
    mutable std::map<i64, double> slope_cache_;
    mutable std::map<std::pair<size_t, i64>, std::vector<std::pair<cplx, double>>> sigma_cache_;

    const std::vector<std::pair<cplx, double>>& sigma_terms(size_t e, i64 m) const;
    ContinuousResult continuous_on(const std::vector<Node>& rule, const std::vector<std::vector<double>>& weight, i64 n,
                                   i64 m1, i64 m2) const;
    SeriesResult kloosterman_partial(i64 n, i64 m1, i64 m2, i64 K) const;
    double slope(double x_max) const;
};

// Free-function forms; each builds a KtfEngine.
cplx geo_main(const KtfRequest& req);
SeriesResult geo_kloosterman(const KtfRequest& req);
ContinuousResult spec_continuous(const KtfRequest& req);
KtfReport cuspidal_inferred(const KtfRequest& req);
cplx cuspidal_from_data(const KtfRequest& req, const std::vector<SpectralDatum>& data);
CrosscheckDeltas classical_crosscheck(const KtfRequest& req);

// lambda_n(it) sigma_it(m) m^{it} against sum_{l | (n, m)} conj omega'(l) sigma_it(mn / l^2) (nm / l^2)^{it}
std::pair<cplx, cplx> hecke_sigma_identity(i64 n, i64 m, const EisensteinBasisElement& e, double t);

// sigma_it(e, m) = sum_k coef_k exp(-2 i t log_k)
std::vector<std::pair<cplx, double>> sigma_coefficients(const EisensteinBasisElement& e, i64 m);

}  // namespace ktf
