#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "ktf/cli.hpp"
#include "ktf/equidist.hpp"
#include "ktf/ktf.hpp"

using namespace ktf;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "ktf-kit");
    std::ostringstream out, err;
    int code = dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

DirichletCharacter even_nontrivial(i64 N) {
    for (auto& c : enumerate_characters(N))
        if (!c.is_principal() && c.parity() == 1) return c;
    throw std::runtime_error("none");
}

}  // namespace

TEST_CASE("J from the trace-formula engine equals (4/pi) V(0) from the transform pipeline") {
    for (auto lit : {"gaussian:1", "gaussian:0.7", "spectral_window:3"}) {
        auto h = TestFunction::parse(lit);
        KtfEngine E(1, DirichletCharacter::principal(1), h);
        Pipeline p(h);
        double v0 = v_zero(p, V0Route::pipeline);
        CAPTURE(lit);
        CHECK(std::abs(E.J() - 4 / std::numbers::pi * v0) < 1e-8 * std::abs(E.J()));
    }
}

TEST_CASE("Kloosterman term assembled from direct sums and the Bessel kernel") {
    for (i64 N : {5, 7, 9}) {
        auto om = even_nontrivial(N);
        KtfEngine E(N, om, TestFunction::gaussian(1));
        for (auto [n, m1, m2] : {std::tuple<i64, i64, i64>{1, 1, 1}, {2, 3, 1}, {4, 2, 6}}) {
            const i64 K = 6;
            cplx acc = 0;
            for (i64 k = 1; k <= K; ++k) {
                i64 c = k * N;
                cplx S = kloosterman({m2, m1, n, c, om}, KlMode::direct);
                acc += S / double(c) * E.kernel()(4 * std::numbers::pi * std::sqrt(double(n * m1 * m2)) / double(c));
            }
            cplx want = cplx(0, 2 * E.psi() / std::numbers::pi) * acc;
            cplx got = E.geo_kloosterman(n, m1, m2, K).value;
            CAPTURE(N);
            CAPTURE(n);
            CHECK(std::abs(got - want) < 1e-12 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("main term against t_predicate, psi and the character") {
    auto om = even_nontrivial(13);
    KtfEngine E(13, om, TestFunction::gaussian(1));
    CHECK(E.psi() == 14.0);
    // m1 m2 / n = 9 = 3^2 with 3 | m1, 3 | m2: T = 1, b = 3, m1 / b = 4
    cplx want = E.psi() * std::conj(om(4)) * E.J();
    CHECK(std::abs(E.geo_main(4, 12, 3) - want) < 1e-14 * std::abs(want));
    CHECK(E.geo_main(2, 3, 5) == cplx(0, 0));
}

TEST_CASE("cli ktf report round-trips and carries spectral data") {
    auto dir = fs::temp_directory_path() / "ktf_integration";
    fs::create_directories(dir);
    std::vector<SpectralDatum> data{{cplx(9.53, 0), cplx(1, 0), cplx(1, 0), 2.0, cplx(-0.5, 0)},
                                    {cplx(0, 0.2), cplx(0.5, 0.5), cplx(0.5, -0.5), 1.5, cplx(1.25, 0)}};
    auto path = dir / "data.csv";
    {
        std::ofstream f(path);
        write_spectral_data(f, data);
    }
    auto om = even_nontrivial(9);
    auto r = run({"ktf", "--N", "9", "--omega", om.label(), "--n", "2", "--m1", "1", "--m2", "1", "--c-terms", "60",
                  "--spectral-data", path.string()});
    REQUIRE(r.code == 0);
    auto rep = report_from_json(r.out);
    CHECK(rep.request.omega == om);
    CHECK(rep.request.n == 2);
    CHECK(rep.c_terms_used == 60);

    KtfRequest q;
    q.N = 9;
    q.omega = om;
    q.n = 2;
    q.c_terms = 60;
    auto lib = cuspidal_inferred(q);
    CHECK(std::abs(rep.spec_cuspidal_inferred - lib.spec_cuspidal_inferred) <
          1e-13 * std::max(1.0, std::abs(lib.spec_cuspidal_inferred)));

    auto j = nlohmann::json::parse(r.out);
    cplx fd(j["cuspidal_from_data"]["re"].get<double>(), j["cuspidal_from_data"]["im"].get<double>());
    cplx want = 0;
    for (auto& d : data)
        want += *d.lambda * d.a_m1 * std::conj(d.a_m2) * std::exp(-d.t * d.t) / (d.norm_sq * std::cosh(std::numbers::pi * d.t));
    CHECK(std::abs(fd - want) < 1e-13);
    // same bytes twice
    CHECK(run({"ktf", "--N", "9", "--omega", om.label(), "--n", "2", "--m1", "1", "--m2", "1", "--c-terms", "60",
               "--spectral-data", path.string()})
              .out == r.out);
    CHECK(run({"load-check", "--path", path.string()}).out == "rows 2\n");
}

TEST_CASE("cli crosscheck matches the library") {
    auto r = run({"crosscheck", "--N", "10", "--n", "3", "--m1", "2", "--m2", "4", "--c-terms", "30"});
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    KtfRequest q;
    q.N = 10;
    q.omega = DirichletCharacter::principal(10);
    q.n = 3;
    q.m1 = 2;
    q.m2 = 4;
    q.c_terms = 30;
    auto d = classical_crosscheck(q);
    CHECK(j["kloosterman"]["direct"]["re"].get<double>() == doctest::Approx(d.kl_direct.real()).epsilon(1e-13));
    CHECK(j["max_delta"].get<double>() <= 1e-8);
}

TEST_CASE("cli equidist and weil-scan against the library") {
    auto r = run({"equidist", "--p", "3", "--m", "3", "--N", "7,5", "--l-max", "3", "--c-terms", "80"});
    REQUIRE(r.code == 0);
    CHECK(r.out == scan_to_csv(equidist_scan(3, 3, TestFunction::gaussian(1), {5, 7}, 3, 80)));
    CHECK(r.out.find("\n5,3,3,2,") != std::string::npos);
    // p | m: the l = 2 row predicts 1
    auto rows = equidist_scan(3, 3, TestFunction::gaussian(1), {5}, 2, 80);
    CHECK(rows[2].prediction == 1.0);
    CHECK(rows[2].prediction == doctest::Approx(measure_moment(Measure::modified(3, 3), 2)));

    auto w = run({"weil-scan", "--max-c", "30", "--max-N", "5", "--max-n", "3"});
    REQUIRE(w.code == 0);
    auto sum = kloosterman_scan(30, 5, 3, 1e-9);
    CHECK(std::count(w.out.begin(), w.out.end(), '\n') == sum.queries + 1);
    CHECK(w.err.find("violations 0") != std::string::npos);
}

TEST_CASE("tolerance-driven truncation meets its target or reports failure") {
    KtfRequest q;
    q.N = 11;
    q.omega = DirichletCharacter::principal(11);
    q.tol = {0.5, 0.5};  // the certified bound decays like K^{-1/2}; tight targets are out of reach
    q.c_terms_min = 10;
    auto rep = cuspidal_inferred(q);
    CHECK(rep.tail_bound <= std::max(q.tol.abs_tol, q.tol.rel_tol * rep.psi * std::abs(rep.J)));
    CHECK(rep.c_terms_used >= 10);
    auto r = run({"ktf", "--N", "11", "--abs-tol", "1e-10", "--rel-tol", "1e-10", "--c-terms-max", "5000"});
    CHECK(r.code == exit_tolerance);
}
