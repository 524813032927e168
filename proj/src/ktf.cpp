#include "ktf/ktf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace ktf {

namespace {

constexpr double kEuler = 0.57721566490153286061;
constexpr double kExcise = 1e-6;
constexpr double kPanelWidth = 0.25;

cplx expi(double phase) { return {std::cos(phase), std::sin(phase)}; }

double rel_delta(cplx a, cplx b, double mass) {
    double s = std::max({std::abs(a), std::abs(b), mass});
    return s == 0 ? 0 : std::abs(a - b) / s;
}

// J_{2it}(x) by its power series in long double
std::complex<long double> j_series_ld(double t, double x, cplx inv_gamma) {
    using C = std::complex<long double>;
    C nu(0, 2 * static_cast<long double>(t));
    long double q = static_cast<long double>(x) * x / 4;
    C term = 1, sum = 1;
    for (int k = 0; k < 400; ++k) {
        term *= -q / (static_cast<long double>(k + 1) * (nu + static_cast<long double>(k + 1)));
        sum += term;
        if (k > x / 2 && std::abs(term) <= 1e-21L * std::abs(sum)) break;
    }
    C pref = std::exp(nu * std::log(static_cast<long double>(x) / 2)) * C(inv_gamma.real(), inv_gamma.imag());
    return pref * sum;
}

}  // namespace

void validate(const KtfRequest& req) {
    if (req.N < 1) throw std::invalid_argument("N must be positive");
    if (req.omega.modulus() != req.N) throw std::invalid_argument("omega' must be a character mod N");
    if (req.omega.parity() != 1) throw std::invalid_argument("omega' must be even");
    if (req.n < 1 || req.m1 < 1 || req.m2 < 1) throw std::invalid_argument("n, m1, m2 must be positive");
    if (gcd(req.n, req.N) != 1) throw std::invalid_argument("n must be coprime to N");
    if (!(req.tol.abs_tol >= 0) || !(req.tol.rel_tol >= 0)) throw std::invalid_argument("tolerances must be nonnegative");
    if (req.c_terms && *req.c_terms < 1) throw std::invalid_argument("c_terms must be positive");
    if (req.c_terms_min < 1 || req.c_terms_max < req.c_terms_min)
        throw std::invalid_argument("need 1 <= c_terms_min <= c_terms_max");
}

TWitness t_predicate(i64 m1, i64 m2, i64 n) {
    TWitness w;
    if ((m1 * m2) % n != 0) return w;
    i64 b = 0;
    if (!is_square(m1 * m2 / n, &b)) return w;
    if (m1 % b != 0 || m2 % b != 0) return w;
    w.holds = true;
    w.b = b;
    return w;
}

double divisor_tail_bound(i64 K) {
    if (K < 1) return 6.8245451116208645;  // zeta(3/2)^2
    double k = static_cast<double>(K);
    return (2 * std::log(k) + 4 + 4 * kEuler) / std::sqrt(k) + 2.5 / k;
}

// ---------------------------------------------------------------- Bessel kernel

BesselKernel::BesselKernel(const TestFunction& h) : h_(h), T_(std::max(h.t_support(), 1.0)) {}

cplx BesselKernel::operator()(double x) const {
    if (!(x > 0)) throw std::domain_error("Bessel kernel needs x > 0");
    auto it = cache_.find(x);
    if (it != cache_.end()) return it->second;
    // phase of (x/2)^{2it} / Gamma(1+2it) moves at about 2|log(x/2)| + 2 log(2t)
    double rate = 2 * std::abs(std::log(x / 2)) + 2 * std::log(2 * T_ + 2) + 4;
    int panels = std::max(8, static_cast<int>(std::ceil(T_ * rate / 6)));
    auto rule = gauss_legendre_rule(0, T_, panels);
    cplx acc = 0;
    for (size_t k = 0; k < rule.x.size(); ++k) {
        double t = rule.x[k];
        double imj;
        if (x <= 20) {
            cplx g = 1.0 / gamma_complex(cplx(1, 2 * t));
            imj = static_cast<double>(j_series_ld(t, x, g).imag());
        } else {
            imj = bessel_J_2it(t, x).imag();
        }
        acc += rule.w[k] * imj * h_(cplx(t, 0)) * (t / std::cosh(M_PI * t));
    }
    // h even: J_{2it} - J_{-2it} = 2i Im J_{2it} on [0, T]
    cplx v = cplx(0, 2) * acc;
    cache_.emplace(x, v);
    return v;
}

double BesselKernel::slope_bound(double x_max) const {
    double best = 0;
    for (int j = 0; j <= 64; ++j) {
        double x = x_max * std::pow(10.0, -j / 8.0);
        best = std::max(best, std::abs((*this)(x)) / x);
    }
    return 1.05 * best;
}

// ---------------------------------------------------------------- sigma

std::vector<std::pair<cplx, double>> sigma_coefficients(const EisensteinBasisElement& e, i64 m) {
    if (m < 1) throw std::invalid_argument("sigma_coefficients: m must be positive");
    std::vector<std::pair<cplx, double>> out;
    double M = static_cast<double>(e.M);
    for (i64 c : divisors(m)) {
        cplx x = e.chi1p(c);
        if (x == 0.0) continue;
        cplx g = gauss_sum(e.chi2M, m / c, GaussMode::formula);
        if (std::abs(g) < 1e-13) continue;
        out.emplace_back(std::conj(x) * g / M, std::log(M * static_cast<double>(c)));
    }
    return out;
}

std::pair<cplx, cplx> hecke_sigma_identity(i64 n, i64 m, const EisensteinBasisElement& e, double t) {
    if (n < 1 || m < 1 || gcd(n * m, e.N) != 1)
        throw std::invalid_argument("hecke_sigma_identity: n, m positive and coprime to N");
    cplx s(0, t);
    cplx lhs = lambda_n_eis(n, e.pair, s) * sigma_s(e, m, s) * expi(t * std::log(double(m)));
    auto omega = e.pair.chi1 * e.pair.chi2;
    cplx rhs = 0;
    for (i64 l : divisors(gcd(n, m))) {
        i64 k = m * n / (l * l);
        rhs += std::conj(omega(l)) * sigma_s(e, k, s) * expi(t * std::log(double(k)));
    }
    return {lhs, rhs};
}

// ---------------------------------------------------------------- engine

KtfEngine::KtfEngine(i64 N, DirichletCharacter omega, TestFunction h, Tolerances tol)
    : N_(N), omega_(std::move(omega)), h_(std::move(h)), tol_(tol), kernel_(h_) {
    if (omega_.modulus() != N_) throw std::invalid_argument("omega' must be a character mod N");
    if (omega_.parity() != 1) throw std::invalid_argument("omega' must be even");
    psi_ = static_cast<double>(multiplicative_fn(N_, MultFn::psi));
    double T = kernel_.t_max();
    auto jr = integrate([&](double t) { return h_(t) * std::tanh(M_PI * t) * t; }, 0, T,
                        {QuadScheme::gauss_kronrod, 1e-16, 1e-14, 16});
    J_ = 2 * jr.value / (M_PI * M_PI);
    J_err_ = 2 * jr.error / (M_PI * M_PI);
    basis_ = enumerate_basis(N_, omega_);
    for (const auto& e : basis_) pole_.push_back((e.pair.chi1.conj() * e.pair.chi2).is_principal());

    int panels = 2 * static_cast<int>(std::ceil(T / kPanelWidth));
    auto build = [&](int p, std::vector<Node>& nodes, std::vector<std::vector<double>>& weight) {
        auto rule = gauss_legendre_rule(-T, T, p);
        for (size_t k = 0; k < rule.x.size(); ++k) {
            double t = rule.x[k];
            nodes.push_back({t, rule.w[k]});
            std::vector<double> w(basis_.size(), 0.0);
            for (size_t e = 0; e < basis_.size(); ++e)
                if (!pole_[e] || std::abs(t) >= kExcise)
                    w[e] = rule.w[k] * h_(t) /
                           (M_PI * basis_[e].norm_sq() * std::norm(eisenstein_L_denominator(basis_[e], cplx(0, t))));
            weight.push_back(std::move(w));
        }
    };
    build(panels, fine_, fine_weight_);
    build(panels / 2, coarse_, coarse_weight_);
}

cplx KtfEngine::geo_main(i64 n, i64 m1, i64 m2) const {
    auto w = t_predicate(m1, m2, n);
    if (!w.holds) return 0;
    return psi_ * std::conj(omega_(m1 / w.b)) * J_;
}

const std::vector<std::pair<cplx, double>>& KtfEngine::sigma_terms(size_t e, i64 m) const {
    auto key = std::make_pair(e, m);
    auto it = sigma_cache_.find(key);
    if (it == sigma_cache_.end()) it = sigma_cache_.emplace(key, sigma_coefficients(basis_[e], m)).first;
    return it->second;
}

ContinuousResult KtfEngine::continuous_on(const std::vector<Node>& rule,
                                          const std::vector<std::vector<double>>& weight, i64 n, i64 m1,
                                          i64 m2) const {
    double lr = std::log(double(m1) / double(m2));
    ContinuousResult out;
    for (size_t e = 0; e < basis_.size(); ++e) {
        const auto& s1 = sigma_terms(e, m1);
        const auto& s2 = sigma_terms(e, m2);
        if (s1.empty() || s2.empty()) continue;
        std::vector<std::pair<cplx, double>> lam;
        for (i64 d : divisors(n)) {
            cplx c = std::conj(basis_[e].pair.chi1(d) * basis_[e].pair.chi2(n / d));
            lam.emplace_back(c, std::log(double(n) / double(d * d)));
        }
        CompensatedSum acc;
        for (size_t k = 0; k < rule.size(); ++k) {
            double w = weight[k][e];
            if (w == 0) continue;
            double t = rule[k].t;
            cplx L = 0, a = 0, b = 0;
            for (auto [c, l] : lam) L += c * expi(t * l);
            for (auto [c, l] : s1) a += c * expi(-2 * t * l);
            for (auto [c, l] : s2) b += c * expi(-2 * t * l);
            cplx v = w * L * a * std::conj(b) * expi(t * lr);
            acc.add(v);
            out.abs_mass += std::abs(v);
        }
        out.value += acc.value();
    }
    return out;
}

ContinuousResult KtfEngine::spec_continuous(i64 n, i64 m1, i64 m2) const {
    if (gcd(n, N_) != 1) throw std::invalid_argument("n must be coprime to N");
    ContinuousResult r = continuous_on(fine_, fine_weight_, n, m1, m2);
    cplx coarse = continuous_on(coarse_, coarse_weight_, n, m1, m2).value;
    // excised window: integrand bounded by its values at the edges
    double edge = 0;
    for (double t : {-kExcise, kExcise}) {
        std::vector<Node> one{{t, 1.0}};
        std::vector<std::vector<double>> w(1, std::vector<double>(basis_.size()));
        for (size_t e = 0; e < basis_.size(); ++e)
            if (pole_[e])
                w[0][e] = h_(t) / (M_PI * basis_[e].norm_sq() * std::norm(eisenstein_L_denominator(basis_[e], cplx(0, t))));
        edge = std::max(edge, std::abs(continuous_on(one, w, n, m1, m2).value));
    }
    r.quad_error = std::abs(r.value - coarse) + 2 * kExcise * edge;
    return r;
}

SeriesResult KtfEngine::kloosterman_partial(i64 n, i64 m1, i64 m2, i64 K) const {
    double X = 4 * M_PI * std::sqrt(double(n) * double(m1) * double(m2));
    CompensatedSum acc;
    double mass = 0;
    for (i64 k = 1; k <= K; ++k) {
        i64 c = k * N_;
        cplx S = kloosterman(KloostermanQuery{m2, m1, n, c, omega_}, KlMode::factored);
        if (std::abs(S) < 1e-12) continue;
        cplx v = S / double(c) * kernel_(X / double(c));
        acc.add(v);
        mass += std::abs(v);
    }
    SeriesResult r;
    r.value = cplx(0, 2 * psi_ / M_PI) * acc.value();
    r.abs_mass = 2 * psi_ / M_PI * mass;
    r.c_terms = K;
    return r;
}

double KtfEngine::slope(double x_max) const {
    // keyed by x_max in units of 1e-12
    i64 key = static_cast<i64>(std::llround(x_max * 1e12));
    auto it = slope_cache_.find(key);
    if (it != slope_cache_.end()) return it->second;
    double s = kernel_.slope_bound(x_max);
    slope_cache_.emplace(key, s);
    return s;
}

double KtfEngine::kloosterman_tail(i64 n, i64 m1, i64 m2, i64 K) const {
    // |S(m2, m1; n; c)| <= tau(n) tau(c) gcd(m2 n, m1 n, c)^{1/2} c^{1/2} cond^{1/2}, tau(kN) <= tau(k) tau(N),
    // |I(x)| <= slope x on (0, X/N]
    double X = 4 * M_PI * std::sqrt(double(n) * double(m1) * double(m2));
    double G = static_cast<double>(gcd(m2 * n, m1 * n));
    double pref = 2 * psi_ / M_PI * double(multiplicative_fn(n, MultFn::tau)) *
                  double(multiplicative_fn(N_, MultFn::tau)) * std::sqrt(G * double(omega_.conductor()));
    return pref * slope(X / double(N_)) * X * std::pow(double(N_), -1.5) * divisor_tail_bound(K);
}

SeriesResult KtfEngine::geo_kloosterman(i64 n, i64 m1, i64 m2, std::optional<i64> c_terms, i64 c_min,
                                        i64 c_max) const {
    if (gcd(n, N_) != 1) throw std::invalid_argument("n must be coprime to N");
    SeriesResult r;
    if (c_terms) {
        r.c_terms = *c_terms;
    } else {
        double target = std::max(tol_.abs_tol, tol_.rel_tol * psi_ * std::abs(J_));
        double at_max = kloosterman_tail(n, m1, m2, c_max);
        if (at_max > target) {
            std::ostringstream os;
            os.precision(6);
            os << "Kloosterman tail bound " << at_max << " at c = " << c_max * N_ << " exceeds tolerance " << target
               << " (N = " << N_ << ", n = " << n << ", m1 = " << m1 << ", m2 = " << m2 << ")";
            throw ToleranceError(os.str());
        }
        i64 lo = c_min, hi = c_max;
        if (kloosterman_tail(n, m1, m2, lo) <= target) hi = lo;
        while (hi - lo > 1) {
            i64 mid = lo + (hi - lo) / 2;
            (kloosterman_tail(n, m1, m2, mid) <= target ? hi : lo) = mid;
        }
        r.c_terms = hi;
    }
    auto part = kloosterman_partial(n, m1, m2, r.c_terms);
    r.value = part.value;
    r.abs_mass = part.abs_mass;
    r.tail_bound = kloosterman_tail(n, m1, m2, r.c_terms);
    return r;
}

KtfReport KtfEngine::report(const KtfRequest& req) const {
    validate(req);
    if (req.N != N_) throw std::invalid_argument("request level differs from the engine");
    KtfReport r;
    r.request = req;
    r.J = J_;
    r.psi = psi_;
    r.geo_main = geo_main(req.n, req.m1, req.m2);
    auto kl = geo_kloosterman(req.n, req.m1, req.m2, req.c_terms, req.c_terms_min, req.c_terms_max);
    r.geo_kloosterman = kl.value;
    r.c_terms_used = kl.c_terms;
    r.tail_bound = kl.tail_bound;
    auto cont = spec_continuous(req.n, req.m1, req.m2);
    r.spec_continuous = cont.value;
    r.t_quadrature_error = cont.quad_error + psi_ * J_err_;
    r.spec_cuspidal_inferred = r.geo_main + r.geo_kloosterman - r.spec_continuous;
    if (req.m1 == req.m2 && req.n == 1 && h_.nonnegative()) {
        double slack = 10 * req.tol.abs_tol + r.tail_bound + r.t_quadrature_error;
        const cplx& v = r.spec_cuspidal_inferred;
        if (v.real() < -slack || std::abs(v.imag()) > slack) {
            std::ostringstream os;
            os.precision(15);
            os << "cuspidal side " << v << " violates positivity beyond " << slack;
            throw ToleranceError(os.str());
        }
    }
    return r;
}

double CrosscheckDeltas::max() const { return std::max({main, kloosterman, continuous}); }

CrosscheckDeltas KtfEngine::crosscheck(i64 n, i64 m1, i64 m2, i64 c_terms) const {
    if (gcd(n, N_) != 1) throw std::invalid_argument("n must be coprime to N");
    CrosscheckDeltas d;
    d.main_direct = geo_main(n, m1, m2);
    auto kl = kloosterman_partial(n, m1, m2, c_terms);
    auto cont = spec_continuous(n, m1, m2);
    d.kl_direct = kl.value;
    d.cont_direct = cont.value;
    double kl_mass = kl.abs_mass, cont_mass = cont.abs_mass;
    for (i64 l : divisors(gcd(n, m1))) {
        cplx w = std::conj(omega_(l));
        i64 m1l = n * m1 / (l * l);
        d.main_classical += w * geo_main(1, m1l, m2);
        // c = l c' keeps the c-range: c' <= c_terms N / l
        auto klc = kloosterman_partial(1, m1l, m2, c_terms / l);
        auto cc = spec_continuous(1, m1l, m2);
        d.kl_classical += w * klc.value;
        d.cont_classical += w * cc.value;
        kl_mass = std::max(kl_mass, klc.abs_mass);
        cont_mass = std::max(cont_mass, cc.abs_mass);
    }
    d.main = rel_delta(d.main_direct, d.main_classical, 0);
    d.kloosterman = rel_delta(d.kl_direct, d.kl_classical, kl_mass);
    d.continuous = rel_delta(d.cont_direct, d.cont_classical, cont_mass);
    return d;
}

// ---------------------------------------------------------------- free functions

namespace {
KtfEngine make_engine(const KtfRequest& req) {
    validate(req);
    return KtfEngine(req.N, req.omega, req.h, req.tol);
}
}  // namespace

cplx geo_main(const KtfRequest& req) { return make_engine(req).geo_main(req.n, req.m1, req.m2); }

SeriesResult geo_kloosterman(const KtfRequest& req) {
    return make_engine(req).geo_kloosterman(req.n, req.m1, req.m2, req.c_terms, req.c_terms_min, req.c_terms_max);
}

ContinuousResult spec_continuous(const KtfRequest& req) {
    return make_engine(req).spec_continuous(req.n, req.m1, req.m2);
}

KtfReport cuspidal_inferred(const KtfRequest& req) { return make_engine(req).report(req); }

CrosscheckDeltas classical_crosscheck(const KtfRequest& req) {
    validate(req);
    return make_engine(req).crosscheck(req.n, req.m1, req.m2, req.c_terms.value_or(req.c_terms_min));
}

cplx cuspidal_from_data(const KtfRequest& req, const std::vector<SpectralDatum>& data) {
    cplx acc = 0;
    for (size_t j = 0; j < data.size(); ++j) {
        const auto& d = data[j];
        std::string row = "spectral datum " + std::to_string(j) + ": ";
        if (!(d.norm_sq > 0) || !std::isfinite(d.norm_sq)) throw std::invalid_argument(row + "norm_sq must be positive");
        bool real_t = d.t.imag() == 0;
        bool exceptional = d.t.real() == 0 && std::abs(d.t.imag()) < 0.5;
        if (!real_t && !exceptional) throw std::invalid_argument(row + "t must be real or i y with |y| < 1/2");
        cplx lam = 1;
        if (d.lambda)
            lam = *d.lambda;
        else if (req.n != 1)
            throw std::invalid_argument(row + "lambda_n missing");
        acc += lam * d.a_m1 * std::conj(d.a_m2) * req.h(d.t) / (d.norm_sq * std::cosh(M_PI * d.t));
    }
    return acc;
}

// ---------------------------------------------------------------- JSON

namespace {
using nlohmann::json;

json cj(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }
cplx jc(const json& j) { return {j.at("re").get<double>(), j.at("im").get<double>()}; }
}  // namespace

std::string report_to_json(const KtfReport& r) {
    const auto& q = r.request;
    json req{{"N", q.N},
             {"omega", json::parse(q.omega.to_json())},
             {"n", q.n},
             {"m1", q.m1},
             {"m2", q.m2},
             {"h", q.h.literal()},
             {"abs_tol", q.tol.abs_tol},
             {"rel_tol", q.tol.rel_tol},
             {"c_terms", q.c_terms ? json(*q.c_terms) : json(nullptr)},
             {"c_terms_min", q.c_terms_min},
             {"c_terms_max", q.c_terms_max}};
    json j{{"request", req},
           {"geo_main", cj(r.geo_main)},
           {"geo_kloosterman", cj(r.geo_kloosterman)},
           {"spec_continuous", cj(r.spec_continuous)},
           {"spec_cuspidal_inferred", cj(r.spec_cuspidal_inferred)},
           {"c_terms_used", r.c_terms_used},
           {"tail_bound", r.tail_bound},
           {"t_quadrature_error", r.t_quadrature_error},
           {"J", r.J},
           {"psi", r.psi},
           {"ratio", cj(r.ratio())}};
    return j.dump(2);
}

KtfReport report_from_json(const std::string& s) {
    json j = json::parse(s);
    KtfReport r;
    const auto& q = j.at("request");
    r.request.N = q.at("N").get<i64>();
    r.request.omega = DirichletCharacter::from_json(q.at("omega").dump());
    r.request.n = q.at("n").get<i64>();
    r.request.m1 = q.at("m1").get<i64>();
    r.request.m2 = q.at("m2").get<i64>();
    r.request.h = TestFunction::parse(q.at("h").get<std::string>());
    r.request.tol = {q.at("abs_tol").get<double>(), q.at("rel_tol").get<double>()};
    if (!q.at("c_terms").is_null()) r.request.c_terms = q.at("c_terms").get<i64>();
    r.request.c_terms_min = q.at("c_terms_min").get<i64>();
    r.request.c_terms_max = q.at("c_terms_max").get<i64>();
    r.geo_main = jc(j.at("geo_main"));
    r.geo_kloosterman = jc(j.at("geo_kloosterman"));
    r.spec_continuous = jc(j.at("spec_continuous"));
    r.spec_cuspidal_inferred = jc(j.at("spec_cuspidal_inferred"));
    r.c_terms_used = j.at("c_terms_used").get<i64>();
    r.tail_bound = j.at("tail_bound").get<double>();
    r.t_quadrature_error = j.at("t_quadrature_error").get<double>();
    r.J = j.at("J").get<double>();
    r.psi = j.at("psi").get<double>();
    cplx want = r.geo_main + r.geo_kloosterman - r.spec_continuous;
    double scale = std::abs(r.geo_main) + std::abs(r.geo_kloosterman) + std::abs(r.spec_continuous);
    if (std::abs(want - r.spec_cuspidal_inferred) > 1e-13 * scale + 1e-300)
        throw std::runtime_error("report identity cuspidal = main + kloosterman - continuous fails");
    return r;
}

}  // namespace ktf
