#include "oracles.hpp"

#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"
#include "smoothdist/reference.hpp"

#include "doctest.h"

#include "json.hpp"

#include <random>
#include <sstream>

using namespace smoothdist;

namespace {

ExperimentConfig base_config()
{
    ExperimentConfig c;
    c.alpha = QuadraticSurd::sqrt(2);
    c.beta = Rational::make(0, 1);
    c.epsilon = 0.1;
    return c;
}

std::string csv(const Table& t)
{
    std::ostringstream out;
    write_report(t, ReportFormat::csv, out);
    return out.str();
}

std::int64_t term(const DecompositionReport& r, const std::string& name)
{
    for (const auto& [k, v] : r.terms) {
        if (k == name) {
            return static_cast<std::int64_t>(v);
        }
    }
    FAIL("missing term " << name);
    return 0;
}

} // namespace

TEST_SUITE("experiments")
{
TEST_CASE("window parsing and resolution")
{
    const WindowSpec u = parse_window("u=8,3");
    CHECK(u.exponents);
    const SmoothnessWindow w = u.resolve(30913);
    CHECK(w.y == 4);
    CHECK(w.z == 31);
    CHECK(parse_window("1/8,1/3").resolve(30913) == w);
    const WindowSpec abs = parse_window("10,1000");
    CHECK_FALSE(abs.exponents);
    CHECK(abs.resolve(123456) == SmoothnessWindow(10, 1000));
    // exact integer roots
    CHECK(parse_window("u=2,1").resolve(1'000'000) == SmoothnessWindow(1000, 1'000'000));
    CHECK(parse_window("u=3,2").resolve(1'000'000) == SmoothnessWindow(100, 1000));
    CHECK_THROWS_AS(parse_window("1"), ConfigError);
    CHECK_THROWS_AS(parse_window("1,5"), ConfigError);
    CHECK_THROWS_AS(parse_window("a,b"), ConfigError);
}

TEST_CASE("list parsing")
{
    CHECK(parse_x_list("30913,1e5") == std::vector<std::uint64_t>{30913, 100000});
    CHECK(parse_index_list("8..11") == std::vector<std::size_t>{8, 9, 10, 11});
    CHECK(parse_index_list("8,10") == std::vector<std::size_t>{8, 10});
    CHECK_THROWS_AS(parse_x_list("1.5e0"), ConfigError);
    CHECK_THROWS_AS(parse_x_list(""), ConfigError);
    CHECK_THROWS_AS(parse_index_list("9..8"), ConfigError);
    CHECK(parse_format("json") == ReportFormat::json);
    CHECK_THROWS_AS(parse_format("xml"), ConfigError);
    CHECK(parse_region("mid") == PrimeRegion::mid);
    CHECK_THROWS_AS(parse_region("top"), ConfigError);
}

TEST_CASE("grid resolution")
{
    ExperimentConfig c = base_config();
    c.convergent_indices = {8};
    const auto g = resolve_grid(c);
    REQUIRE(g.size() == 1);
    CHECK(g[0].x == 30913);
    CHECK(g[0].q == 985);

    c.convergent_indices.clear();
    c.xs = {10'000};
    CHECK(resolve_grid(c)[0].q == 985);
    c.alpha = Rational::make(3, 7);
    CHECK(resolve_grid(c)[0].q == 7);

    CHECK(resolve_degree(base_config(), 30913) == 30913);
    CHECK(resolve_degree(base_config(), 10'000'000) == 100'000);
    CHECK(theorem_delta(base_config(), 30913) == doctest::Approx(std::pow(30913.0, -0.15)));
}

TEST_CASE("theorem row matches an independent count")
{
    ExperimentConfig c = base_config();
    c.convergent_indices = {8};
    const TheoremRow row = theorem_row(c, resolve_grid(c)[0], false);
    CHECK(row.window == SmoothnessWindow(4, 31));
    const double delta = std::pow(30913.0, -0.15);
    CHECK(row.delta == doctest::Approx(delta).epsilon(1e-15));

    const oracle::Float alpha = sqrt(oracle::Float(2));
    std::uint64_t psi = 0, observed = 0;
    for (const std::uint64_t n : oracle::smooth_set(30913, 4, 31, false)) {
        ++psi;
        observed += oracle::distance(alpha, n, oracle::Float(0)) < oracle::Float(row.delta);
    }
    CHECK(row.psi == psi);
    CHECK(row.boundary == 0);
    CHECK(row.observed == observed);
    CHECK(row.observed + row.out + row.boundary == row.psi);
    CHECK(row.main_term == doctest::Approx(2 * row.delta * static_cast<double>(psi)));
    CHECK(row.error == doctest::Approx(std::fabs(static_cast<double>(observed) - row.main_term)));
    CHECK(row.budget == doctest::Approx(10 * std::pow(30913.0, 0.8)));
    CHECK(row.within_budget());
    REQUIRE(row.lower_sum.has_value());
    CHECK(row.bracketed());
    CHECK(*row.lower_sum <= static_cast<double>(row.observed) + 1e-6);
    CHECK(*row.upper_sum >= static_cast<double>(row.observed) - 1e-6);
}

TEST_CASE("theorem rows agree with the BigInt classification path")
{
    ExperimentConfig c = base_config();
    c.beta = Rational::make(1, 3);
    c.xs = {20'000, 77'777};
    for (const TheoremRow& row : run_theorem(c)) {
        const auto ref = reference::classify_smooth(row.x, row.window, false, c.alpha, c.beta, row.delta, 128);
        CHECK(row.observed == ref.in);
        CHECK(row.out == ref.out);
        CHECK(row.boundary == ref.boundary);
    }
    // lower precision goes through the generic path
    c.frac_bits = 64;
    for (const TheoremRow& row : run_theorem(c)) {
        const auto ref = reference::classify_smooth(row.x, row.window, false, c.alpha, c.beta, row.delta, 64);
        CHECK(row.observed == ref.in);
    }
}

TEST_CASE("theorem configuration checks")
{
    ExperimentConfig c = base_config();
    c.xs = {10};
    c.window = parse_window("2,3");
    // delta = 10^(-0.15) > 1/2
    CHECK_THROWS_AS(run_theorem(c), ConfigError);
    c.xs = {1000};
    c.window = parse_window("40,100");
    CHECK_THROWS_AS(run_theorem(c), ConfigError);
    c.window = parse_window("10,5");
    CHECK_THROWS_AS(run_theorem(c), ConfigError);
}

TEST_CASE("window [2, x] equidistributes")
{
    ExperimentConfig c = base_config();
    c.xs = {200'000};
    c.window = parse_window("2,200000");
    c.degree = 200;
    const TheoremRow row = run_theorem(c).at(0);
    CHECK(row.psi == 200'000);
    CHECK(row.within_budget());
    CHECK(static_cast<double>(row.observed) / static_cast<double>(row.psi)
          == doctest::Approx(2 * row.delta).epsilon(0.02));
}

TEST_CASE("squarefree rows")
{
    ExperimentConfig c = base_config();
    c.xs = {10};
    c.window = parse_window("2,3");
    c.delta_override = 0.3;
    const TheoremRow tiny = run_squarefree_theorem(c).at(0);
    CHECK(tiny.psi == oracle::psi(10, 2, 3, true));
    CHECK(tiny.psi == 4);
    CHECK(tiny.main_term == doctest::Approx(2 * 0.3 * 4));

    ExperimentConfig d = base_config();
    d.convergent_indices = {8, 10};
    const auto plain = run_theorem(d);
    const auto sf = run_squarefree_theorem(d);
    REQUIRE(plain.size() == sf.size());
    for (std::size_t i = 0; i < sf.size(); ++i) {
        CHECK(sf[i].squarefree);
        CHECK(sf[i].psi <= plain[i].psi);
        CHECK(sf[i].observed <= plain[i].observed);
        CHECK(sf[i].psi == oracle::psi(sf[i].x, sf[i].window.y, sf[i].window.z, true));
        CHECK(sf[i].bracketed());
    }
}

TEST_CASE("Buchstab identity")
{
    ExperimentConfig c = base_config();
    c.window = parse_window("10,1000");
    for (const MemberSet set : {MemberSet::all, MemberSet::solutions}) {
        const auto r = run_buchstab_check(c, 100'000, set);
        CHECK(r.residual == 0);
        CHECK(r.holds);
        CHECK(term(r, "total") == term(r, "unit") + term(r, "prime") + term(r, "composite"));
    }
    const auto all = run_buchstab_check(c, 100'000, MemberSet::all);
    // B-side total is the window-smooth count without n = 1
    CHECK(term(all, "total") == static_cast<std::int64_t>(oracle::psi(100'000, 10, 1000, false)) - 1);

    c.window = parse_window("50,40");
    const auto empty = run_buchstab_check(c, 10'000, MemberSet::all);
    CHECK(empty.residual == 0);
    CHECK(term(empty, "total") == 0);

    c.window = parse_window("2,10");
    c.limits.desk_scale_x = 1000;
    CHECK_THROWS_AS(run_buchstab_check(c, 5000, MemberSet::all), PreconditionError);
}

TEST_CASE("role reversal")
{
    ExperimentConfig c = base_config();
    c.window = parse_window("20,10000");
    for (const MemberSet set : {MemberSet::all, MemberSet::solutions}) {
        const auto r = run_role_reversal_check(c, 10'000, set);
        CHECK(r.holds);
        CHECK(r.residual >= 0);
        CHECK(r.residual <= static_cast<std::int64_t>(oracle::tau(10'000)));
        CHECK(r.residual_bound == static_cast<std::int64_t>(oracle::tau(10'000)));
    }
    // z <= x^(3/4): no primes on the left
    c.window = parse_window("20,900");
    const auto small = run_role_reversal_check(c, 10'000, MemberSet::all);
    CHECK(small.residual == 0);
    CHECK(term(small, "lhs") == 0);
    CHECK(term(small, "rhs") == 0);
    // prime x
    c.window = parse_window("20,10007");
    CHECK(run_role_reversal_check(c, 10'007, MemberSet::all).residual == 0);
}

TEST_CASE("sieve lemma")
{
    ExperimentConfig c = base_config();
    c.window = parse_window("32,31622");
    const auto mid = run_sieve_lemma_check(c, 1'000'000, PrimeRegion::mid, false);
    CHECK(mid.holds);
    CHECK(term(mid, "primes") > 0);

    ExperimentConfig half = c;
    half.delta_override = 0.5;
    for (const bool sf : {false, true}) {
        const auto r = run_sieve_lemma_check(half, 100'000, PrimeRegion::mid, sf);
        CHECK(term(r, "a_side") == term(r, "b_side"));
        CHECK(term(r, "difference") == 0);
    }

    c.window = parse_window("50,40");
    const auto empty = run_sieve_lemma_check(c, 100'000, PrimeRegion::mid, false);
    CHECK(term(empty, "primes") == 0);
    CHECK(term(empty, "a_side") == 0);
}

TEST_CASE("sieve lemma A-side matches brute force")
{
    ExperimentConfig c = base_config();
    c.window = parse_window("3,200");
    c.delta_override = 0.2;
    const std::uint64_t x = 20'000;
    const oracle::Float alpha = sqrt(oracle::Float(2));
    for (const bool sf : {false, true}) {
        const auto r = run_sieve_lemma_check(c, x, PrimeRegion::mid, sf);
        // sum over window primes p with x^(1/4) <= p <= x^(3/4) of
        // #{ n = p k <= x : k smooth over [3, p] (squarefree: [3, p - 1]) }
        std::int64_t a_side = 0, b_side = 0;
        for (std::uint64_t p = 3; p <= 200; ++p) {
            const double pp = static_cast<double>(p);
            if (!oracle::is_prime(p) || pp * pp * pp * pp < static_cast<double>(x)
                || pp * pp * pp * pp > std::pow(static_cast<double>(x), 3)) {
                continue;
            }
            for (const std::uint64_t k : oracle::smooth_set(x / p, 3, sf ? p - 1 : p, sf)) {
                ++b_side;
                a_side += oracle::distance(alpha, p * k, oracle::Float(0)) < oracle::Float(0.2);
            }
        }
        CHECK(term(r, "a_side") == a_side);
        CHECK(term(r, "b_side") == b_side);
    }
}

TEST_CASE("lower-bound construction")
{
    ExperimentConfig c = base_config();
    c.epsilon = 0.3;
    c.xs = {1'000'000};
    const GridPoint point = resolve_grid(c).at(0);
    const LowerBoundReport r = run_lower_bound_demo(c, point);
    CHECK(r.count >= 1);
    CHECK(r.smooth_limit == 63);
    CHECK(r.threshold == doctest::Approx(std::pow(1e6, -1.0 / 3 + 0.3)));
    CHECK(r.target == doctest::Approx(2.0 / 3 + 0.3));
    CHECK(r.exponent == doctest::Approx(std::log(static_cast<double>(r.count)) / std::log(1e6)));

    // a in [100, 200) with every prime factor <= 3: 108, 128, 144, 162, 192
    ExperimentConfig tiny = c;
    tiny.epsilon = 0.1;
    const LowerBoundReport t = run_lower_bound_demo(tiny, point);
    CHECK(t.smooth_limit == 3);
    CHECK(t.a_count == 5);

    ExperimentConfig none = c;
    none.epsilon = 0.05;
    const LowerBoundReport z = run_lower_bound_demo(none, point);
    CHECK(z.smooth_limit == 1);
    CHECK(z.count == 0);
}

TEST_CASE("reports")
{
    ExperimentConfig c = base_config();
    c.convergent_indices = {8};
    const auto rows = run_theorem(c);
    const std::string text = csv(theorem_table(rows));
    CHECK(text.rfind("x,q,delta,psi,observed,boundary,main_term,error,error_exponent,budget,C,kappa\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
    CHECK(text.find("\n30913,985,") != std::string::npos);

    std::ostringstream js;
    write_report(theorem_table(rows), ReportFormat::json, js);
    const auto parsed = nlohmann::json::parse(js.str());
    REQUIRE(parsed.is_array());
    CHECK(parsed.size() == 1);
    CHECK(parsed[0]["x"] == 30913);
    CHECK(parsed[0]["q"] == 985);
    CHECK(parsed[0].contains("error_exponent"));

    CHECK_THROWS_AS(write_report(Table{{"a"}, {}}, ReportFormat::csv, js), PreconditionError);
    Table quoted{{"s"}, {{std::string("a,b")}}};
    CHECK(csv(quoted) == "s\n\"a,b\"\n");
    CHECK(csv(Table{{"v"}, {{0.1 + 0.2}}}) == "v\n0.3\n");
}

TEST_CASE("reports are reproducible across threads and segment sizes")
{
    ExperimentConfig c = base_config();
    c.beta = Rational::make(1, 3);
    c.convergent_indices = {8, 10};
    c.threads = 1;
    const auto a = run_theorem(c);
    c.threads = 3;
    c.limits.segment_length = 4096;
    const auto b = run_theorem(c);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].observed == b[i].observed);
        CHECK(*a[i].lower_sum == *b[i].lower_sum);
        CHECK(*a[i].upper_sum == *b[i].upper_sum);
    }
    CHECK(csv(theorem_table(a)) == csv(theorem_table(b)));
}
}
