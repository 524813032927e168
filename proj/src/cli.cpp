#include "ktf/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "ktf/equidist.hpp"

namespace ktf {

using nlohmann::json;

std::string fmt15(double x) {
    if (x == 0) return "0";
    std::ostringstream os;
    os << std::setprecision(15) << x;
    return os.str();
}

namespace {

std::string fmt17(double x) {
    if (x == 0) return "0";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(static_cast<unsigned char>(s.back()))) s.pop_back();
    size_t i = 0;
    while (i < s.size() && issp(static_cast<unsigned char>(s[i]))) ++i;
    return s.substr(i);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* b = s.data();
    if (*b == '+') ++b;
    auto [p, ec] = std::from_chars(b, s.data() + s.size(), v);
    return ec == std::errc() && p == s.data() + s.size() && std::isfinite(v);
}

}  // namespace

std::vector<SpectralDatum> parse_spectral_data(std::istream& in) {
    std::vector<SpectralDatum> out;
    std::string line;
    long row = 0;
    bool have_header = false;
    auto fail = [&](const std::string& why) {
        throw InputDataError("spectral data row " + std::to_string(row) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++row;
        if (row == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!have_header) {
            if (t != kSpectralHeader) fail("expected header " + std::string(kSpectralHeader));
            have_header = true;
            continue;
        }
        auto f = split(t, ',');
        if (f.size() != 9) fail("expected 9 columns, got " + std::to_string(f.size()));
        double v[9];
        for (int k = 0; k < 7; ++k)
            if (!parse_double(f[static_cast<size_t>(k)], v[k])) fail("column " + std::to_string(k + 1) + " is not a finite number");
        SpectralDatum d;
        d.t = {v[0], v[1]};
        d.a_m1 = {v[2], v[3]};
        d.a_m2 = {v[4], v[5]};
        d.norm_sq = v[6];
        if (!(d.norm_sq > 0)) fail("norm_sq must be positive");
        if (v[1] != 0 && v[0] != 0) fail("t must be real or purely imaginary");
        if (std::abs(v[1]) >= 0.5) fail("imaginary t needs |t_im| < 1/2");
        if (f[7].empty() != f[8].empty()) fail("lambda needs both parts or neither");
        if (!f[7].empty()) {
            if (!parse_double(f[7], v[7]) || !parse_double(f[8], v[8])) fail("lambda is not a finite number");
            d.lambda = cplx(v[7], v[8]);
        }
        out.push_back(d);
    }
    if (!have_header) throw InputDataError("spectral data: missing header");
    return out;
}

std::vector<SpectralDatum> load_spectral_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputDataError("cannot open spectral data file " + path);
    return parse_spectral_data(in);
}

void write_spectral_data(std::ostream& os, const std::vector<SpectralDatum>& data) {
    os << kSpectralHeader << '\n';
    for (auto& d : data) {
        os << fmt17(d.t.real()) << ',' << fmt17(d.t.imag()) << ',' << fmt17(d.a_m1.real()) << ','
           << fmt17(d.a_m1.imag()) << ',' << fmt17(d.a_m2.real()) << ',' << fmt17(d.a_m2.imag()) << ','
           << fmt17(d.norm_sq) << ',';
        if (d.lambda) os << fmt17(d.lambda->real()) << ',' << fmt17(d.lambda->imag());
        else os << ',';
        os << '\n';
    }
}

DirichletCharacter resolve_character(i64 N, const std::string& key) {
    if (key.empty() || key == "principal") return DirichletCharacter::principal(N);
    auto all = enumerate_characters(N);
    if (key.find_first_not_of("0123456789") == std::string::npos) {
        size_t k = std::stoul(key);
        if (k >= all.size())
            throw std::invalid_argument("character index " + key + " out of range (" + std::to_string(all.size()) +
                                        " characters mod " + std::to_string(N) + ")");
        return all[k];
    }
    for (auto& c : all)
        if (c.label() == key) return c;
    throw std::invalid_argument("no character mod " + std::to_string(N) + " labelled " + key);
}

namespace {

json cjson(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// every float to 15 significant digits
void round15(json& j) {
    if (j.is_number_float()) {
        j = std::stod(fmt15(j.get<double>()));
    } else if (j.is_structured()) {
        for (auto& v : j) round15(v);
    }
}

std::string dump(json j) {
    round15(j);
    return j.dump(2) + "\n";
}

class Sink {
public:
    Sink(std::ostream& out, const std::string& path) : out_(out), path_(path) {}
    void write(const std::string& s) {
        if (path_.empty()) {
            out_ << s;
            return;
        }
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw InputDataError("cannot write " + path_);
        f << s;
    }

private:
    std::ostream& out_;
    std::string path_;
};

struct KtfOpts {
    i64 N = 1;
    std::string omega;
    i64 n = 1, m1 = 1, m2 = 1;
    std::string h = "gaussian:1";
    std::optional<double> abs_tol, rel_tol;
    std::optional<i64> c_terms;
    i64 c_terms_min = 1000, c_terms_max = 200000;
    std::string output;

    void add(CLI::App* s, bool need_nm = true) {
        s->add_option("--N", N, "level")->required();
        s->add_option("--omega", omega, "nebentypus: index, label or 'principal'");
        if (need_nm) {
            s->add_option("--n", n);
            s->add_option("--m1", m1);
            s->add_option("--m2", m2);
        }
        s->add_option("--h", h, "test function family:param[,param]");
        s->add_option("--abs-tol", abs_tol);
        s->add_option("--rel-tol", rel_tol);
        s->add_option("--c-terms", c_terms, "fixed number of moduli c = N, ..., K N");
        s->add_option("--c-terms-min", c_terms_min);
        s->add_option("--c-terms-max", c_terms_max);
        s->add_option("--output", output);
    }

    KtfRequest request(i64 default_terms) const {
        KtfRequest q;
        q.N = N;
        q.omega = resolve_character(N, omega);
        q.n = n;
        q.m1 = m1;
        q.m2 = m2;
        q.h = TestFunction::parse(h);
        if (abs_tol) q.tol.abs_tol = *abs_tol;
        if (rel_tol) q.tol.rel_tol = *rel_tol;
        if ((abs_tol && !(*abs_tol > 0)) || (rel_tol && !(*rel_tol > 0)))
            throw std::invalid_argument("tolerances must be positive");
        q.c_terms_min = c_terms_min;
        q.c_terms_max = c_terms_max;
        q.c_terms = c_terms;
        if (!c_terms && !abs_tol && !rel_tol) q.c_terms = default_terms;
        validate(q);
        return q;
    }
};

constexpr i64 kDefaultCTerms = 4000;

KlMode kl_mode(const std::string& s) {
    if (s == "direct") return KlMode::direct;
    if (s == "factored") return KlMode::factored;
    return KlMode::salie;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ktf-kit: Kloosterman sums, transforms, Eisenstein series and the Kuznetsov trace formula"};
    app.name(args.empty() ? "ktf-kit" : args[0]);
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "TOML file; options under a [subcommand] section");
    app.fallthrough();
    app.get_formatter()->column_width(24);

    std::function<void()> action;
    auto sub = [&](const std::string& name, const std::string& desc) {
        auto s = app.add_subcommand(name, desc);
        s->allow_config_extras(CLI::config_extras_mode::error);
        return s;
    };

    // kloosterman
    KloostermanQuery kq;
    i64 modulus = 1;
    std::string chr, mode = "factored", format = "text";
    {
        auto s = sub("kloosterman", "generalized twisted Kloosterman sum S_chi(a, b; n; c)");
        s->add_option("--a", kq.a)->required();
        s->add_option("--b", kq.b)->required();
        s->add_option("--n", kq.n)->required();
        s->add_option("--c", kq.c)->required();
        s->add_option("--modulus", modulus, "modulus N of chi; N | c")->required();
        s->add_option("--char", chr, "index, label or 'principal'");
        s->add_option("--mode", mode)->check(CLI::IsMember({"direct", "factored", "salie"}));
        s->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
        s->callback([&] {
            action = [&] {
                kq.chi = resolve_character(modulus, chr);
                validate(kq);
                cplx v = kloosterman(kq, kl_mode(mode));
                if (format == "json") {
                    auto cert = weil_certificate(kq);
                    out << dump({{"value", cjson(v)},
                                 {"chi", kq.chi.label()},
                                 {"bound1", cert.bound1},
                                 {"bound2", cert.bound2},
                                 {"ok", cert.satisfied()}});
                } else {
                    out << fmt15(v.real()) << ' ' << fmt15(v.imag()) << '\n';
                }
            };
        });
    }

    // gauss
    i64 gm = 0;
    std::string gmode = "formula";
    {
        auto s = sub("gauss", "Gauss sum tau(chi, m)");
        s->add_option("--modulus", modulus)->required();
        s->add_option("--char", chr);
        s->add_option("--m", gm)->required();
        s->add_option("--mode", gmode)->check(CLI::IsMember({"direct", "formula"}));
        s->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
        s->callback([&] {
            action = [&] {
                if (modulus < 1) throw std::invalid_argument("modulus must be positive");
                auto chi = resolve_character(modulus, chr);
                cplx v = gauss_sum(chi, gm, gmode == "direct" ? GaussMode::direct : GaussMode::formula);
                if (format == "json") out << dump({{"value", cjson(v)}, {"chi", chi.label()}, {"m", gm}});
                else out << fmt15(v.real()) << ' ' << fmt15(v.imag()) << '\n';
            };
        });
    }

    // weil-scan
    i64 max_c = 300, max_N = 36, max_n = 12;
    double scan_tol = 1e-9;
    std::string output;
    {
        auto s = sub("weil-scan", "Kloosterman mode agreement and Weil bounds over a grid");
        s->add_option("--max-c", max_c);
        s->add_option("--max-N", max_N);
        s->add_option("--max-n", max_n);
        s->add_option("--tol", scan_tol);
        s->add_option("--output", output);
        s->callback([&] {
            action = [&] {
                if (max_c < 1 || max_N < 1 || max_n < 1 || !(scan_tol > 0))
                    throw std::invalid_argument("scan limits and tolerance must be positive");
                std::ostringstream csv;
                csv << "N,chi,a,b,n,c,re,im,bound1,bound2,ok\n";
                auto sum = kloosterman_scan(max_c, max_N, max_n, scan_tol, [&](const ScanRow& r) {
                    csv << r.N << ',' << r.chi_label << ',' << r.a << ',' << r.b << ',' << r.n << ',' << r.c << ','
                        << fmt15(r.factored.real()) << ',' << fmt15(r.factored.imag()) << ',' << fmt15(r.bound1)
                        << ',' << fmt15(r.bound2) << ',' << (r.ok && r.agree ? "true" : "false") << '\n';
                });
                Sink(out, output).write(csv.str());
                err << "queries " << sum.queries << ", mismatches " << sum.mismatches << ", violations "
                    << sum.violations << ", max delta " << fmt15(sum.max_delta) << '\n';
                if (sum.mismatches || sum.violations) throw ToleranceError("weil-scan: mismatches or violations");
            };
        });
    }

    // transform-roundtrip
    std::string hlit = "gaussian:1", grid_output;
    double t_max = 10, rt_tol = 1e-6;
    int points = 101;
    {
        auto s = sub("transform-roundtrip", "h -> Q -> V -> h on a t grid");
        s->add_option("--h", hlit);
        s->add_option("--t-max", t_max);
        s->add_option("--points", points);
        s->add_option("--tol", rt_tol);
        s->add_option("--grid-output", grid_output, "write u,Q,V grid CSV here");
        s->add_option("--output", output);
        s->callback([&] {
            action = [&] {
                if (points < 2 || !(t_max > 0) || !(rt_tol > 0)) throw std::invalid_argument("need points >= 2, t-max > 0, tol > 0");
                Pipeline p(TestFunction::parse(hlit));
                Roundtrip rt(p.V);
                std::ostringstream csv;
                csv << "t,h,roundtrip_re,roundtrip_im,error\n";
                double worst = 0;
                for (int k = 0; k < points; ++k) {
                    double t = t_max * k / (points - 1);
                    double hv = p.h(t);
                    cplx r = rt(t);
                    double e = std::abs(r - hv);
                    worst = std::max(worst, e);
                    csv << fmt15(t) << ',' << fmt15(hv) << ',' << fmt15(r.real()) << ',' << fmt15(r.imag()) << ','
                        << fmt15(e) << '\n';
                }
                Sink(out, output).write(csv.str());
                if (!grid_output.empty()) {
                    std::ostringstream g;
                    write_grid_csv(g, p.Q, p.V);
                    Sink(out, grid_output).write(g.str());
                }
                err << "sup error " << fmt15(worst) << '\n';
                if (worst > rt_tol) throw ToleranceError("roundtrip error above tolerance");
            };
        });
    }

    // zagier
    std::vector<double> avals{0.5, 1, 2};
    {
        auto s = sub("zagier", "geometric and Bessel routes for the Zagier transform");
        s->add_option("--h", hlit);
        s->add_option("--a", avals)->delimiter(',');
        s->add_option("--output", output);
        s->callback([&] {
            action = [&] {
                Pipeline p(TestFunction::parse(hlit));
                std::ostringstream csv;
                csv << "a,geometric_re,geometric_im,bessel_re,bessel_im,rel_delta\n";
                for (double a : avals) {
                    if (!(a > 0)) throw std::invalid_argument("a must be positive");
                    cplx g = zagier_hat(p, a, ZagierRoute::geometric);
                    cplx b = zagier_hat(p, a, ZagierRoute::bessel);
                    double sc = std::max(std::abs(g), std::abs(b));
                    double d = sc > 0 ? std::abs(g - b) / sc : 0.0;
                    csv << fmt15(a) << ',' << fmt15(g.real()) << ',' << fmt15(g.imag()) << ',' << fmt15(b.real())
                        << ',' << fmt15(b.imag()) << ',' << fmt15(d) << '\n';
                }
                Sink(out, output).write(csv.str());
            };
        });
    }

    // eisenstein
    i64 eN = 1;
    std::string eomega, emode = "fourier";
    std::optional<double> es;
    double zre = 0, zim = 1;
    {
        auto s = sub("eisenstein", "basis listing, or values E(z, s) for every basis element");
        s->add_option("--N", eN)->required();
        s->add_option("--omega", eomega);
        s->add_option("--s", es, "evaluate at this real s > 1/2");
        s->add_option("--z-re", zre);
        s->add_option("--z-im", zim);
        s->add_option("--mode", emode)->check(CLI::IsMember({"fourier", "direct"}));
        s->add_option("--output", output);
        s->callback([&] {
            action = [&] {
                if (eN < 1) throw std::invalid_argument("N must be positive");
                auto basis = enumerate_basis(eN, resolve_character(eN, eomega));
                std::ostringstream csv;
                if (!es) {
                    write_basis_csv(csv, basis);
                } else {
                    if (!(zim > 0)) throw std::invalid_argument("z must lie in the upper half plane");
                    EisMode m = emode == "direct" ? EisMode::direct : EisMode::fourier;
                    csv << "element,tuple,mode,re,im\n";
                    for (size_t k = 0; k < basis.size(); ++k) {
                        cplx v = eisenstein_scaled(basis[k], cplx(*es, 0), cplx(zre, zim), m);
                        csv << k << ',' << basis[k].tuple_label() << ',' << emode << ',' << fmt15(v.real()) << ','
                            << fmt15(v.imag()) << '\n';
                    }
                }
                Sink(out, output).write(csv.str());
            };
        });
    }

    // ktf
    KtfOpts ko;
    std::string spectral;
    {
        auto s = sub("ktf", "computable sides of the trace formula; JSON report");
        ko.add(s);
        s->add_option("--spectral-data", spectral, "CSV of cusp-form data to compare against");
        s->callback([&] {
            action = [&] {
                auto q = ko.request(kDefaultCTerms);
                std::vector<SpectralDatum> data;
                if (!spectral.empty()) data = load_spectral_data(spectral);
                auto rep = cuspidal_inferred(q);
                json j = json::parse(report_to_json(rep));
                if (!spectral.empty()) {
                    cplx fd = cuspidal_from_data(q, data);
                    j["cuspidal_from_data"] = cjson(fd);
                    j["data_rows"] = data.size();
                    j["data_minus_inferred"] = cjson(fd - rep.spec_cuspidal_inferred);
                }
                Sink(out, ko.output).write(dump(j));
            };
        });
    }

    // crosscheck
    KtfOpts co;
    double cc_tol = 1e-8;
    {
        auto s = sub("crosscheck", "direct terms against the classical n = 1 route");
        co.add(s);
        s->add_option("--tol", cc_tol);
        s->callback([&] {
            action = [&] {
                if (!(cc_tol > 0)) throw std::invalid_argument("tolerance must be positive");
                auto q = co.request(1000);
                auto d = classical_crosscheck(q);
                json j = json::parse(report_to_json([&] {
                    KtfReport r;
                    r.request = q;
                    return r;
                }()))["request"];
                json o{{"request", j},
                       {"main", {{"direct", cjson(d.main_direct)}, {"classical", cjson(d.main_classical)}, {"delta", d.main}}},
                       {"kloosterman",
                        {{"direct", cjson(d.kl_direct)}, {"classical", cjson(d.kl_classical)}, {"delta", d.kloosterman}}},
                       {"continuous",
                        {{"direct", cjson(d.cont_direct)}, {"classical", cjson(d.cont_classical)}, {"delta", d.continuous}}},
                       {"max_delta", d.max()}};
                Sink(out, co.output).write(dump(o));
                if (d.max() > cc_tol) throw ToleranceError("crosscheck delta " + fmt15(d.max()) + " above tolerance");
            };
        });
    }

    // equidist
    i64 ep = 2, em = 1;
    std::vector<i64> eNs{101, 401, 1009};
    int l_max = 4;
    std::optional<i64> e_terms;
    std::optional<double> e_abs, e_rel;
    {
        auto s = sub("equidist", "moment ratios sum X_l(nu_p) w / sum w over a list of levels (trivial omega')");
        s->add_option("--p", ep)->required();
        s->add_option("--m", em);
        s->add_option("--h", hlit);
        s->add_option("--N", eNs, "comma-separated levels coprime to p")->delimiter(',');
        s->add_option("--l-max", l_max);
        s->add_option("--c-terms", e_terms);
        s->add_option("--abs-tol", e_abs);
        s->add_option("--rel-tol", e_rel);
        s->add_option("--output", output);
        s->callback([&] {
            action = [&] {
                Tolerances tol;
                if (e_abs) tol.abs_tol = *e_abs;
                if (e_rel) tol.rel_tol = *e_rel;
                if ((e_abs && !(*e_abs > 0)) || (e_rel && !(*e_rel > 0)))
                    throw std::invalid_argument("tolerances must be positive");
                std::optional<i64> terms = e_terms;
                if (!terms && !e_abs && !e_rel) terms = kDefaultCTerms;
                auto rows = equidist_scan(ep, em, TestFunction::parse(hlit), eNs, l_max, terms, tol);
                Sink(out, output).write(scan_to_csv(rows));
            };
        });
    }

    // load-check
    std::string lpath;
    {
        auto s = sub("load-check", "validate a spectral-data CSV");
        s->add_option("--path", lpath)->required();
        s->callback([&] {
            action = [&] {
                auto d = load_spectral_data(lpath);
                out << "rows " << d.size() << '\n';
            };
        });
    }

    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (action) action();
        return exit_ok;
    } catch (const InputDataError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input;
    } catch (const ToleranceError& e) {
        err << "tolerance failure: " << e.what() << '\n';
        return exit_tolerance;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_tolerance;
    }
}

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    return dispatch(args, out, err);
}

}  // namespace ktf
