#include "ktf/transforms.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_quintic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ktf {

namespace {

namespace bq = boost::math::quadrature;
using Spline = boost::math::interpolators::cardinal_quintic_b_spline<double>;

double gk(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-15, int depth = 10) {
    if (a >= b) return 0;
    return integrate(f, a, b, {QuadScheme::gauss_kronrod, abs_tol, 1e-13, depth}).value;
}

std::vector<double> split_params(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t pos = 0;
        double v;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad test-function parameter '" + item + "'");
        }
        if (pos != item.size()) throw std::invalid_argument("bad test-function parameter '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

// sqrt(sinh(s^2/2) sinh(nu_u + s^2/2)) / s, the Abel kernel denominator in the tau variable
double abel_den(double nu_u, double tau) {
    double a = std::sinh(tau * tau / 2);
    return std::sqrt(a * std::sinh(nu_u + tau * tau / 2)) / tau;
}

}  // namespace

// ---------------------------------------------------------------- TestFunction

TestFunction TestFunction::gaussian(double sigma) {
    if (!(sigma > 0)) throw std::invalid_argument("gaussian scale must be positive");
    TestFunction h;
    h.family_ = Family::gaussian;
    h.params_ = {sigma};
    h.f_ = [sigma](cplx t) { return std::exp(-t * t / (sigma * sigma)); };
    h.nonneg_ = true;
    h.finish();
    return h;
}

TestFunction TestFunction::spectral_window(double R, double width) {
    if (!(R > 0) || !(width > 0)) throw std::invalid_argument("spectral_window needs R > 0 and width > 0");
    TestFunction h;
    h.family_ = Family::spectral_window;
    h.params_ = {R, width};
    h.f_ = [R, width](cplx t) {
        cplx q = (t * t - R * R) / (2 * R * width);
        return std::exp(-q * q);
    };
    h.nonneg_ = true;
    h.finish();
    return h;
}

TestFunction TestFunction::polynomial_gaussian(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("polynomial_gaussian needs at least one coefficient");
    TestFunction h;
    h.family_ = Family::polynomial_gaussian;
    h.params_ = coeffs;
    h.f_ = [coeffs](cplx t) {
        cplx t2 = t * t, p = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) p = p * t2 + *it;
        return p * std::exp(-t2);
    };
    bool nn = std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c >= 0; });
    for (double y = 0; nn && y < 0.5; y += 0.01) nn = h.f_(cplx(0, y)).real() >= 0;
    h.nonneg_ = nn;
    h.finish();
    return h;
}

TestFunction TestFunction::custom(std::function<cplx(cplx)> f, double A, double B, std::string name) {
    TestFunction h;
    h.family_ = Family::custom;
    h.f_ = std::move(f);
    h.A_ = A;
    h.B_ = B;
    h.name_ = std::move(name);
    h.finish();
    return h;
}

TestFunction TestFunction::parse(const std::string& literal) {
    auto colon = literal.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("test function literal must be family:params");
    std::string fam = literal.substr(0, colon);
    auto ps = split_params(literal.substr(colon + 1));
    if (fam == "gaussian") {
        if (ps.size() != 1) throw std::invalid_argument("gaussian takes one parameter");
        return gaussian(ps[0]);
    }
    if (fam == "spectral_window") {
        if (ps.empty() || ps.size() > 2) throw std::invalid_argument("spectral_window takes R[,width]");
        return spectral_window(ps[0], ps.size() == 2 ? ps[1] : 1.0);
    }
    if (fam == "polynomial_gaussian") return polynomial_gaussian(ps);
    throw std::invalid_argument("unknown test-function family '" + fam + "'");
}

std::string TestFunction::literal() const {
    std::string name;
    switch (family_) {
    case Family::gaussian: name = "gaussian"; break;
    case Family::spectral_window: name = "spectral_window"; break;
    case Family::polynomial_gaussian: name = "polynomial_gaussian"; break;
    case Family::custom: return name_;
    }
    std::string out = name + ":";
    for (size_t i = 0; i < params_.size(); ++i) out += (i ? "," : "") + fmt(params_[i]);
    return out;
}

void TestFunction::finish() {
    double hmax = 0;
    for (double t = 0; t <= 400; t += 0.01) hmax = std::max(hmax, std::abs(f_(cplx(t, 0))));
    t_support_ = 0;
    for (double t = 0; t <= 400; t += 0.01)
        if (std::abs(f_(cplx(t, 0))) > 1e-18 * hmax) t_support_ = t;
    t_support_ += 0.5;
}

AdmissibleReport admissible_check(const TestFunction& h, double A_req, double B_req) {
    AdmissibleReport r;
    std::ostringstream diag;
    double scale = 0;
    for (double x = 0; x <= 20; x += 0.1)
        for (double y : {0.0, A_req / 2, -A_req / 2}) {
            cplx t(x, y);
            scale = std::max(scale, std::abs(h(t)));
            r.max_odd_defect = std::max(r.max_odd_defect, std::abs(h(t) - h(-t)));
        }
    bool numeric_even = r.max_odd_defect <= 1e-12 * std::max(scale, 1e-300);
    r.even = h.even_by_construction() || numeric_even;
    if (!r.even) diag << "not even (max |h(t)-h(-t)| = " << r.max_odd_defect << "); ";

    const double X = 60;
    double head = 0, tail = 0;
    bool finite = true;
    for (double x = 0; x <= X; x += 0.05)
        for (int k = 0; k <= 8; ++k) {
            double y = 0.999 * A_req * (-1 + k / 4.0);
            cplx t(x, y);
            double v = std::abs(h(t)) * std::pow(1 + std::abs(t), B_req);
            if (!std::isfinite(v)) finite = false;
            (x <= X / 2 ? head : tail) = std::max(x <= X / 2 ? head : tail, v);
        }
    r.sup_scaled = std::max(head, tail);
    r.bounded = finite && tail <= head;
    if (!finite) diag << "non-finite values on the strip; ";
    if (finite && tail > head) diag << "(1+|t|)^B |h| still growing at |Re t| = " << X << "; ";
    r.diagnostics = diag.str();
    return r;
}

double g_fourier(const TestFunction& h, double v, int deriv) {
    double T = h.t_support();
    int panels = std::max(32, static_cast<int>(std::ceil(T * (1 + std::abs(v)) / 2)));
    std::function<double(double)> f;
    switch (deriv) {
    case 0: f = [&](double r) { return h(r) * std::cos(r * v); }; break;
    case 1: f = [&](double r) { return -h(r) * r * std::sin(r * v); }; break;
    case 2: f = [&](double r) { return -h(r) * r * r * std::cos(r * v); }; break;
    default: throw std::invalid_argument("g_fourier: derivative order 0..2");
    }
    return gauss_legendre(f, 0, T, panels) / M_PI;
}

// ---------------------------------------------------------------- GridFunction

struct GridFunction::Splines {
    Spline val;
    std::optional<Spline> der;
};

GridFunction::GridFunction(double nu_max, std::vector<double> values, std::vector<double> dvalues)
    : nu_max_(nu_max), values_(std::move(values)), dvalues_(std::move(dvalues)) {
    if (values_.size() < 8) throw std::invalid_argument("GridFunction needs at least 8 nodes");
    if (!dvalues_.empty() && dvalues_.size() != values_.size())
        throw std::invalid_argument("GridFunction derivative samples size mismatch");
    double step = nu_max_ / static_cast<double>(values_.size() - 1);
    auto s = std::make_shared<Splines>(Splines{Spline(values_, 0.0, step), std::nullopt});
    if (!dvalues_.empty()) s->der.emplace(dvalues_, 0.0, step);
    sp_ = s;
}

double GridFunction::nu_of_u(double u) { return 2 * std::asinh(std::sqrt(std::max(u, 0.0)) / 2); }
double GridFunction::u_of_nu(double nu) {
    double s = std::sinh(nu / 2);
    return 4 * s * s;
}

double GridFunction::at_nu(double nu) const {
    nu = std::abs(nu);
    if (nu >= nu_max_) return 0;
    return sp_->val(nu);
}

double GridFunction::dnu(double nu) const {
    double sgn = nu < 0 ? -1 : 1;
    nu = std::abs(nu);
    if (nu >= nu_max_) return 0;
    return sgn * (sp_->der ? (*sp_->der)(nu) : sp_->val.prime(nu));
}

// ---------------------------------------------------------------- pipeline

namespace {

double find_nu_max(const TestFunction& h) {
    double env0 = 0, last = 0;
    for (double nu = 0; nu <= 60; nu += 0.25) {
        double e = std::abs(g_fourier(h, nu)) + std::abs(g_fourier(h, nu, 1));
        env0 = std::max(env0, e);
        if (e > 1e-14 * env0) last = nu;
        else if (nu > last + 3) break;
    }
    return last + 0.5;
}

// V at nu_u from dQ/dnu
double v_at(const GridFunction& Q, double nu_u) {
    double tmax = std::sqrt(std::max(Q.nu_max() - nu_u, 0.0));
    auto f = [&](double tau) {
        if (tau == 0) return 0.0;
        return Q.dnu(nu_u + tau * tau) / abel_den(nu_u, tau);
    };
    return -gk(f, 0, tmax) / M_PI;
}

// forward Abel transform at nu_u
double q_at(const GridFunction& V, double nu_u) {
    double tmax = std::sqrt(std::max(V.nu_max() - nu_u, 0.0));
    auto f = [&](double tau) {
        if (tau == 0) return nu_u == 0 ? 0.0 : V.at_nu(nu_u) * std::sinh(nu_u) / std::sqrt(std::sinh(nu_u) / 2);
        double nu = nu_u + tau * tau;
        return V.at_nu(nu) * std::sinh(nu) / abel_den(nu_u, tau);
    };
    return 2 * gk(f, 0, tmax);
}

}  // namespace

GridFunction q_from_h(const TestFunction& h, size_t nodes) {
    if (!(h.B() > 1)) throw std::invalid_argument("q_from_h: decay exponent B must exceed 1");
    if (nodes < 8) throw std::invalid_argument("q_from_h: too few nodes");
    double nu_max = find_nu_max(h);
    std::vector<double> val(nodes), der(nodes);
    for (size_t k = 0; k < nodes; ++k) {
        double nu = nu_max * static_cast<double>(k) / static_cast<double>(nodes - 1);
        val[k] = g_fourier(h, nu);
        der[k] = g_fourier(h, nu, 1);
    }
    return GridFunction(nu_max, std::move(val), std::move(der));
}

GridFunction v_from_q(const GridFunction& Q) {
    if (!Q.has_derivative_samples())
        throw std::invalid_argument("v_from_q: Q must carry derivative samples (insufficient decay data)");
    std::vector<double> val(Q.size());
    for (size_t k = 0; k < Q.size(); ++k) val[k] = v_at(Q, Q.node_nu(k));
    return GridFunction(Q.nu_max(), std::move(val));
}

GridFunction q_from_v(const GridFunction& V) {
    std::vector<double> val(V.size());
    for (size_t k = 0; k < V.size(); ++k) val[k] = q_at(V, V.node_nu(k));
    return GridFunction(V.nu_max(), std::move(val));
}

Pipeline::Pipeline(TestFunction h_, size_t nodes) : h(std::move(h_)) {
    if (!(h.B() > 2) || !(h.A() > 1)) throw std::invalid_argument("pipeline needs A > 1 and B > 2");
    Q = q_from_h(h, nodes);
    V = v_from_q(Q);
}

Roundtrip::Roundtrip(const GridFunction& V) {
    auto rule = gauss_legendre_rule(0, V.nu_max(), 96);
    nodes_ = rule.x;
    weights_.resize(rule.x.size());
    for (size_t i = 0; i < rule.x.size(); ++i) weights_[i] = 2 * rule.w[i] * q_at(V, rule.x[i]);
}

cplx Roundtrip::operator()(double t) const {
    double s = 0;
    for (size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * std::cos(t * nodes_[i]);
    return s;
}

cplx roundtrip_h(const GridFunction& V, double t) { return Roundtrip(V)(t); }

double v_zero(const TestFunction& h, V0Route route) {
    if (route == V0Route::pipeline) return v_zero(Pipeline(h), route);
    double T = h.t_support();
    return gauss_legendre([&](double t) { return h(t) * std::tanh(M_PI * t) * t; }, 0, T,
                          std::max(16, static_cast<int>(4 * T))) /
           (2 * M_PI);
}

double v_zero(const Pipeline& p, V0Route route) {
    if (route == V0Route::integral) return v_zero(p.h, route);
    return v_at(p.Q, 0);
}

// ---------------------------------------------------------------- Zagier

namespace {

const GridFunction& forward_q(const Pipeline& p) {
    // cache keyed on the V grid identity
    thread_local const GridFunction* key = nullptr;
    thread_local std::vector<double> keyvals;
    thread_local GridFunction cached;
    if (key != &p.V || keyvals != p.V.values()) {
        cached = q_from_v(p.V);
        key = &p.V;
        keyvals = p.V.values();
    }
    return cached;
}

// last node where |f| exceeds 1e-15 of its peak
double effective_nu_max(const GridFunction& f) {
    const auto& v = f.values();
    double peak = 0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    size_t k = v.size();
    while (k > 1 && std::abs(v[k - 1]) <= 1e-15 * peak) --k;
    return f.node_nu(std::min(k, v.size() - 1));
}

double zagier_from(const GridFunction& Qv, double t) {
    double w = t * t / 4 - 1;
    if (w >= 0) return M_PI / 2 * Qv(4 * w);
    // int_0^{pi/2} Q(4|w| cot^2 phi) dphi with cot phi = c e^s, c = 1/(2 sqrt|w|), so the argument is e^{2s}
    double c = 1 / (2 * std::sqrt(-w));
    double lo = -std::log(c) - 40, hi = Qv.nu_max() / 2 + 1;
    int panels = static_cast<int>(std::ceil(hi - lo));
    return gauss_legendre(
        [&](double s) {
            double e = std::exp(s);
            return Qv.at_nu(GridFunction::nu_of_u(e * e)) * c * e / (1 + c * c * e * e);
        },
        lo, hi, panels);
}

}  // namespace

double zagier_transform(const Pipeline& p, double t) { return zagier_from(forward_q(p), t); }

double zagier_transform(const TestFunction& h, double t) { return zagier_transform(Pipeline(h), t); }

cplx zagier_hat(const Pipeline& p, double a, ZagierRoute route) {
    if (!(a > 0)) throw std::invalid_argument("zagier_hat: a must be positive");
    if (route == ZagierRoute::bessel) {
        double x = 4 * M_PI * a;
        double T = p.h.t_support();
        double I = gauss_legendre(
            [&](double t) {
                if (t == 0) return 0.0;
                return bessel_J_2it(t, x).imag() * p.h(t) * t / std::cosh(M_PI * t);
            },
            0, T, std::max(24, static_cast<int>(3 * T)));
        return -I / (2 * a);
    }
    const GridFunction& Qv = forward_q(p);
    // |t| < 2 with t = 2 sin(theta)
    double inner = gauss_legendre(
        [&](double th) {
            double t = 2 * std::sin(th);
            return zagier_from(Qv, t) * std::cos(2 * M_PI * a * t) * 2 * std::cos(th);
        },
        0, M_PI / 2, std::max(8, static_cast<int>(8 * a)));
    // |t| > 2 with t = 2 cosh(nu/2): Z = (pi/2) Q(nu)
    double outer = 0;
    double nu = 0, top = effective_nu_max(Qv);
    while (nu < top) {
        double rate = a * std::sinh(nu / 2) + 1e-12;
        double width = std::min({0.25, 2 / rate, top - nu});
        outer += gauss_legendre(
            [&](double v) { return Qv.at_nu(v) * std::cos(4 * M_PI * a * std::cosh(v / 2)) * std::sinh(v / 2); }, nu,
            nu + width, 1);
        nu += width;
    }
    outer *= M_PI / 2;
    return 2 * (inner + outer);
}

cplx zagier_hat(const TestFunction& h, double a, ZagierRoute route) { return zagier_hat(Pipeline(h), a, route); }

std::pair<double, double> selfdual_half_integral(const GridFunction& V) {
    double top = effective_nu_max(V);
    // rhat(w) = 2 int_0^inf V(nu) cos(4 pi w sinh(nu/2)) cosh(nu/2) dnu   (t = 2 sinh(nu/2))
    auto rhat = [&](double w) {
        double s = 0, nu = 0;
        while (nu < top) {
            double rate = w * std::cosh(nu / 2) + 1e-12;
            double width = std::min({0.25, 2 / rate, top - nu});
            s += gauss_legendre(
                [&](double v) { return V.at_nu(v) * std::cos(4 * M_PI * w * std::sinh(v / 2)) * std::cosh(v / 2); },
                nu, nu + width, 1);
            nu += width;
        }
        return 2 * s;
    };
    double r0 = std::abs(rhat(0));
    double W = 1;
    while (W < 40 && (std::abs(rhat(W)) > 1e-14 * r0 || std::abs(rhat(W - 0.5)) > 1e-14 * r0)) W += 1;
    // int_0^W rhat, w-integral done in closed form
    double lhs = 0, nu = 0;
    while (nu < top) {
        double width = std::min({0.25, 2 / (W * std::cosh(nu / 2)), top - nu});
        lhs += gauss_legendre(
            [&](double v) {
                double sh = std::sinh(v / 2);
                double k = sh == 0 ? W : std::sin(4 * M_PI * W * sh) / (4 * M_PI * sh);
                return V.at_nu(v) * k * std::cosh(v / 2);
            },
            nu, nu + width, 1);
        nu += width;
    }
    return {2 * lhs, V.at_nu(0) / 2};
}

void write_grid_csv(std::ostream& os, const GridFunction& Q, const GridFunction& V) {
    os << "u,Q,V\n" << std::setprecision(15);
    for (size_t k = 0; k < Q.size(); ++k) {
        double nu = Q.node_nu(k);
        os << GridFunction::u_of_nu(nu) << ',' << Q.at_nu(nu) << ',' << V.at_nu(nu) << '\n';
    }
}

}  // namespace ktf
