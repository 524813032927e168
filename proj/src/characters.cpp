#include "ktf/characters.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ktf {

cplx unit_root(i64 num, i64 den) {
    num = mod(num, den);
    if (num == 0) return {1.0, 0.0};
    if (2 * num == den) return {-1.0, 0.0};
    if (4 * num == den) return {0.0, 1.0};
    if (4 * num == 3 * den) return {0.0, -1.0};
    // symmetric reduction keeps the argument of sin/cos small
    double f = static_cast<double>(num) / static_cast<double>(den);
    if (f > 0.5) f -= 1.0;
    double a = 2.0 * std::numbers::pi * f;
    return {std::cos(a), std::sin(a)};
}

namespace {

std::vector<i64> local_table(const DirichletCharacter::Part& part, i64 den) {
    const auto& g = part.group;
    std::vector<i64> t(static_cast<size_t>(g.modulus), -1);
    if (g.generators.empty()) {
        t[1 % g.modulus] = 0;
        return t;
    }
    if (g.p == 2) {
        i64 a0 = part.exps[0] * (den / 2);
        if (g.k == 2) {
            t[1] = 0;
            t[3] = mod(a0, den);
            return t;
        }
        i64 ord = g.orders[1];
        i64 step = part.exps[1] * (den / ord);
        i64 x = 1;
        for (i64 e = 0; e < ord; ++e) {
            t[static_cast<size_t>(x)] = mod(e * step, den);
            t[static_cast<size_t>(g.modulus - x)] = mod(e * step + a0, den);
            x = x * 5 % g.modulus;
        }
        return t;
    }
    i64 ord = g.orders[0];
    i64 step = part.exps[0] * (den / ord);
    i64 x = 1;
    for (i64 e = 0; e < ord; ++e) {
        t[static_cast<size_t>(x)] = mod(e * step, den);
        x = mulmod(x, g.generators[0], g.modulus);
    }
    return t;
}

}  // namespace

DirichletCharacter::DirichletCharacter() { build(); }

DirichletCharacter::DirichletCharacter(i64 modulus, std::vector<Part> parts) : modulus_(modulus), parts_(std::move(parts)) {
    if (modulus < 1) throw std::invalid_argument("DirichletCharacter: modulus must be positive");
    auto f = factor(modulus);
    if (f.size() != parts_.size()) throw std::invalid_argument("DirichletCharacter: part count does not match modulus");
    for (size_t i = 0; i < f.size(); ++i) {
        if (parts_[i].group.p != f[i].p || parts_[i].group.k != f[i].e)
            throw std::invalid_argument("DirichletCharacter: part does not match modulus");
        if (parts_[i].exps.size() != parts_[i].group.generators.size())
            throw std::invalid_argument("DirichletCharacter: exponent count mismatch");
        for (size_t j = 0; j < parts_[i].exps.size(); ++j) parts_[i].exps[j] = mod(parts_[i].exps[j], parts_[i].group.orders[j]);
    }
    build();
}

DirichletCharacter DirichletCharacter::principal(i64 modulus) {
    std::vector<Part> parts;
    for (auto [p, e] : factor(modulus)) {
        auto g = unit_group(p, e);
        parts.push_back({g, std::vector<i64>(g.generators.size(), 0)});
    }
    return DirichletCharacter(modulus, std::move(parts));
}

DirichletCharacter DirichletCharacter::from_exponents(i64 modulus, const std::vector<std::vector<i64>>& exps) {
    std::vector<Part> parts;
    auto f = factor(modulus);
    if (f.size() != exps.size()) throw std::invalid_argument("from_exponents: expected one exponent list per prime power");
    for (size_t i = 0; i < f.size(); ++i) parts.push_back({unit_group(f[i].p, f[i].e), exps[i]});
    return DirichletCharacter(modulus, std::move(parts));
}

void DirichletCharacter::build() {
    den_ = 1;
    for (const auto& part : parts_)
        for (i64 o : part.group.orders) den_ = lcm(den_, o);
    std::vector<std::vector<i64>> locals;
    conductor_ = 1;
    for (const auto& part : parts_) {
        locals.push_back(local_table(part, den_));
        const auto& t = locals.back();
        const auto& g = part.group;
        // smallest f with the local character trivial on 1 + p^f
        i64 pf = 1;
        for (int f = 0; f <= g.k; ++f, pf *= g.p) {
            bool trivial = true;
            for (i64 x = 1; x < g.modulus && trivial; x += pf)
                if (x % g.p != 0 && t[static_cast<size_t>(x)] != 0) trivial = false;
            if (f == g.k) trivial = true;
            if (trivial) {
                conductor_ *= pf;
                break;
            }
        }
    }
    table_.assign(static_cast<size_t>(modulus_), -1);
    for (i64 n = 0; n < modulus_; ++n) {
        i64 a = 0;
        bool unit = true;
        for (size_t i = 0; i < parts_.size() && unit; ++i) {
            i64 v = locals[i][static_cast<size_t>(n % parts_[i].group.modulus)];
            if (v < 0) unit = false;
            else a += v;
        }
        if (unit) table_[static_cast<size_t>(n)] = mod(a, den_);
    }
    if (modulus_ == 1) table_[0] = 0;
}

cplx DirichletCharacter::operator()(i64 n) const {
    i64 a = angle_num(n);
    if (a < 0) return {0.0, 0.0};
    return unit_root(a, den_);
}

bool DirichletCharacter::is_principal() const { return conductor_ == 1; }

bool DirichletCharacter::is_real() const {
    for (i64 a : table_)
        if (a > 0 && 2 * a != den_) return false;
    return true;
}

int DirichletCharacter::parity() const {
    if (modulus_ <= 2) return 1;
    return angle_num(-1) == 0 ? 1 : -1;
}

DirichletCharacter DirichletCharacter::conj() const {
    auto parts = parts_;
    for (auto& p : parts)
        for (auto& e : p.exps) e = -e;
    return DirichletCharacter(modulus_, std::move(parts));
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
    if (o.modulus_ != modulus_) throw std::invalid_argument("character product: moduli differ");
    auto parts = parts_;
    for (size_t i = 0; i < parts.size(); ++i)
        for (size_t j = 0; j < parts[i].exps.size(); ++j) parts[i].exps[j] += o.parts_[i].exps[j];
    return DirichletCharacter(modulus_, std::move(parts));
}

bool DirichletCharacter::operator==(const DirichletCharacter& o) const {
    if (modulus_ != o.modulus_) return false;
    for (size_t i = 0; i < parts_.size(); ++i)
        if (parts_[i].exps != o.parts_[i].exps) return false;
    return true;
}

i64 DirichletCharacter::local_angle(size_t part, i64 x) const {
    // evaluate the single local factor through the full table via CRT
    const auto& g = parts_[part].group;
    std::vector<std::pair<i64, i64>> res;
    for (size_t i = 0; i < parts_.size(); ++i)
        res.push_back({i == part ? mod(x, g.modulus) : 1, parts_[i].group.modulus});
    return angle_num(crt(res).first);
}

DirichletCharacter DirichletCharacter::induce(i64 new_modulus) const {
    if (new_modulus < 1 || new_modulus % conductor_ != 0)
        throw std::invalid_argument("induce: modulus " + std::to_string(new_modulus) + " is not a multiple of the conductor " +
                                    std::to_string(conductor_));
    std::vector<Part> parts;
    for (auto [q, m] : factor(new_modulus)) {
        auto g = unit_group(q, m);
        std::vector<i64> exps(g.generators.size(), 0);
        for (size_t i = 0; i < parts_.size(); ++i) {
            if (parts_[i].group.p != q) continue;
            for (size_t j = 0; j < g.generators.size(); ++j) {
                i64 a = local_angle(i, g.generators[j]);
                i64 num = a * g.orders[j];
                if (num % den_ != 0) throw std::logic_error("induce: inconsistent local order");
                exps[j] = num / den_;
            }
        }
        parts.push_back({g, exps});
    }
    return DirichletCharacter(new_modulus, std::move(parts));
}

DirichletCharacter DirichletCharacter::project(i64 sub) const {
    if (sub < 1 || modulus_ % sub != 0) throw std::invalid_argument("project: modulus must divide N");
    std::vector<Part> parts;
    i64 prod = 1;
    for (const auto& part : parts_) {
        if (sub % part.group.p != 0) continue;
        parts.push_back(part);
        prod *= part.group.modulus;
    }
    if (prod != sub) throw std::invalid_argument("project: " + std::to_string(sub) + " is not a unitary divisor of " + std::to_string(modulus_));
    return DirichletCharacter(sub, std::move(parts));
}

std::string DirichletCharacter::label() const {
    std::ostringstream os;
    os << modulus_ << ":";
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << "|";
        for (size_t j = 0; j < parts_[i].exps.size(); ++j) os << (j ? "." : "") << parts_[i].exps[j];
    }
    return os.str();
}

std::string DirichletCharacter::to_json() const {
    nlohmann::json j;
    j["modulus"] = modulus_;
    j["conductor"] = conductor_;
    auto arr = nlohmann::json::array();
    for (const auto& p : parts_) arr.push_back({p.group.p, p.group.k, p.exps});
    j["exponents"] = arr;
    return j.dump();
}

DirichletCharacter DirichletCharacter::from_json(const std::string& s) {
    auto j = nlohmann::json::parse(s);
    i64 N = j.at("modulus").get<i64>();
    std::vector<std::vector<i64>> exps;
    for (const auto& e : j.at("exponents")) exps.push_back(e.at(2).get<std::vector<i64>>());
    auto chi = from_exponents(N, exps);
    if (j.contains("conductor") && j["conductor"].get<i64>() != chi.conductor())
        throw std::invalid_argument("from_json: stored conductor does not match");
    return chi;
}

std::vector<DirichletCharacter> enumerate_characters(i64 N) {
    auto f = factor(N);
    std::vector<UnitGroupStructure> groups;
    std::vector<i64> orders;  // flattened
    for (auto [p, e] : f) {
        groups.push_back(unit_group(p, e));
        for (i64 o : groups.back().orders) orders.push_back(o);
    }
    std::vector<i64> idx(orders.size(), 0);
    std::vector<DirichletCharacter> out;
    while (true) {
        std::vector<DirichletCharacter::Part> parts;
        size_t pos = 0;
        for (const auto& g : groups) {
            std::vector<i64> e(idx.begin() + static_cast<long>(pos), idx.begin() + static_cast<long>(pos + g.generators.size()));
            pos += g.generators.size();
            parts.push_back({g, e});
        }
        out.emplace_back(N, std::move(parts));
        // odometer, last index fastest
        int i = static_cast<int>(idx.size()) - 1;
        while (i >= 0 && ++idx[static_cast<size_t>(i)] == orders[static_cast<size_t>(i)]) idx[static_cast<size_t>(i--)] = 0;
        if (i < 0) break;
    }
    return out;
}

cplx char_eval(const DirichletCharacter& chi, i64 n) { return chi(n); }

i64 conductor(const DirichletCharacter& chi) { return chi.conductor(); }

DirichletCharacter local_component(const DirichletCharacter& chi, i64 p, i64 M) {
    i64 q = 0;
    int m = 0;
    if (!is_prime_power(M, &q, &m) || q != p) throw std::invalid_argument("local_component: M must be a power of p");
    int Np = chi.modulus() % p == 0 ? ord_p(chi.modulus(), p) : 0;
    if (Np == 0) return DirichletCharacter::principal(M);
    auto loc = chi.project(ipow(p, Np));
    return loc.induce(M);
}

std::vector<CharacterPair> pairs_with_product(const DirichletCharacter& omega) {
    std::vector<CharacterPair> out;
    i64 N = omega.modulus();
    for (const auto& c1 : enumerate_characters(N)) {
        auto c2 = omega * c1.conj();
        if (N % (c1.conductor() * c2.conductor()) == 0) out.push_back({c1, c2});
    }
    return out;
}

}  // namespace ktf
