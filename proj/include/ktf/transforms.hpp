#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ktf/specfun.hpp"

namespace ktf {

enum class Family { gaussian, spectral_window, polynomial_gaussian, custom };

// Even test function h(t) holomorphic on |Im t| < A with |h| << (1+|t|)^-B there.
class TestFunction {
public:
    // exp(-t^2 / sigma^2)
    static TestFunction gaussian(double sigma);
    // exp(-((t^2 - R^2) / (2 R w))^2)
    static TestFunction spectral_window(double R, double width = 1.0);
    // (sum_k c_k t^{2k}) exp(-t^2)
    static TestFunction polynomial_gaussian(std::vector<double> coeffs);
    static TestFunction custom(std::function<cplx(cplx)> f, double A, double B, std::string name = "custom");
    // "gaussian:1", "spectral_window:5[,w]", "polynomial_gaussian:c0,c1,..."
    static TestFunction parse(const std::string& literal);

    cplx operator()(cplx t) const { return f_(t); }
    double operator()(double t) const { return f_(cplx(t, 0)).real(); }

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    std::string literal() const;
    double A() const { return A_; }
    double B() const { return B_; }
    // h(t) >= 0 for t real and for t in i(-1/2, 1/2)
    bool nonnegative() const { return nonneg_; }
    // symbolic evenness (true for the built-in families)
    bool even_by_construction() const { return family_ != Family::custom; }
    // |h(t)| < 1e-18 max|h| beyond this point on the real line
    double t_support() const { return t_support_; }

private:
    Family family_ = Family::gaussian;
    std::vector<double> params_;
    std::function<cplx(cplx)> f_;
    double A_ = 2, B_ = 12;
    bool nonneg_ = false;
    double t_support_ = 0;
    std::string name_;
    void finish();
};

struct AdmissibleReport {
    bool even = false;
    bool bounded = false;  // (1+|t|)^B |h| bounded on the sampled strip
    double sup_scaled = 0;
    double max_odd_defect = 0;
    std::string diagnostics;
    bool pass() const { return even && bounded; }
};

AdmissibleReport admissible_check(const TestFunction& h, double A_req, double B_req);

// g(v) = (1/2pi) int h(r) e^{-irv} dr and its derivatives (order 0, 1, 2).
double g_fourier(const TestFunction& h, double v, int deriv = 0);

// Function of u >= 0 sampled at nodes uniform in nu = 2 asinh(sqrt(u)/2), i.e. u = 4 sinh^2(nu/2).
// Cubic B-spline in nu, zero beyond nu_max.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double nu_max, std::vector<double> values, std::vector<double> dvalues = {});

    double operator()(double u) const { return at_nu(nu_of_u(u)); }
    double at_nu(double nu) const;
    // d/dnu, from the derivative samples when present, else from the spline
    double dnu(double nu) const;
    bool has_derivative_samples() const { return !dvalues_.empty(); }

    double nu_max() const { return nu_max_; }
    size_t size() const { return values_.size(); }
    double node_nu(size_t k) const { return nu_max_ * static_cast<double>(k) / static_cast<double>(size() - 1); }
    double node_u(size_t k) const { return u_of_nu(node_nu(k)); }
    const std::vector<double>& values() const { return values_; }

    static double nu_of_u(double u);
    static double u_of_nu(double nu);

private:
    double nu_max_ = 0;
    std::vector<double> values_, dvalues_;
    struct Splines;
    std::shared_ptr<const Splines> sp_;
};

constexpr size_t kGridNodes = 2048;

// Q(u) with Phi(y) = Q(y + 1/y - 2), carrying dQ/dnu from the differentiated integral.
GridFunction q_from_h(const TestFunction& h, size_t nodes = kGridNodes);
// V(u) = -(1/pi) int Q'(u + w^2) dw
GridFunction v_from_q(const GridFunction& Q);
// Q(u) = int V(u + x^2) dx
GridFunction q_from_v(const GridFunction& V);

// h -> Q -> V chain kept together.
struct Pipeline {
    TestFunction h;
    GridFunction Q, V;
    explicit Pipeline(TestFunction h_, size_t nodes = kGridNodes);
};

// Selberg transform of V at t: Q = int V(u + x^2) dx, then int_0^inf Phi(y) y^{it} dy/y.
class Roundtrip {
public:
    explicit Roundtrip(const GridFunction& V);
    cplx operator()(double t) const;

private:
    std::vector<double> nodes_, weights_;  // nu quadrature with weights already multiplied by Q
};
cplx roundtrip_h(const GridFunction& V, double t);

enum class V0Route { integral, pipeline };
double v_zero(const TestFunction& h, V0Route route);
double v_zero(const Pipeline& p, V0Route route);

// Z(t) = iint_H V(|z^2 + 1 - t^2/4|^2 / y^2) dy/y dx
double zagier_transform(const Pipeline& p, double t);
double zagier_transform(const TestFunction& h, double t);

enum class ZagierRoute { geometric, bessel };
cplx zagier_hat(const Pipeline& p, double a, ZagierRoute route);
cplx zagier_hat(const TestFunction& h, double a, ZagierRoute route);

// (int_0^inf rhat(w) dw, V(0)/2) with r(t) = V(t^2)
std::pair<double, double> selfdual_half_integral(const GridFunction& V);

// CSV rows u,Q,V at the grid nodes.
void write_grid_csv(std::ostream& os, const GridFunction& Q, const GridFunction& V);

}  // namespace ktf
