// smoothdist: command-line driver for the experiments.
//
// Exit codes: 0 success, 1 invariant breach, 2 configuration error,
// 3 resource or precision limit.

#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"
#include "smoothdist/expsums.hpp"
#include "smoothdist/fourier.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>

using namespace smoothdist;

namespace {

struct CommonFlags {
    std::string alpha = "sqrt(2)";
    std::string beta = "0";
    double eps = 0.1;
    std::string window = "u=8,3";
    std::string xs;
    std::string convergents;
    bool squarefree = false;
    unsigned frac_bits = 128;
    std::string degree = "auto";
    std::optional<double> kappa;
    double C = 10.0;
    std::optional<double> delta;
    std::string out = "-";
    std::string format = "csv";
    int threads = 0;
    std::uint64_t seed = 1;

    void attach(CLI::App* app)
    {
        app->add_option("--alpha", alpha, "alpha: sqrt(D), (P+sqrt(D))/Q, p/q or 0xHH.HH")->capture_default_str();
        app->add_option("--beta", beta, "beta literal")->capture_default_str();
        app->add_option("--eps", eps, "epsilon; delta = x^(-1/4+eps)")->capture_default_str();
        app->add_option("--window", window, "y,z or u=u1,u2 or 1/u1,1/u2")->capture_default_str();
        app->add_option("--x", xs, "comma-separated x values");
        app->add_option("--convergents", convergents, "convergent indices s (k..m or list); x = floor(q_s^(3/2))");
        app->add_flag("--squarefree", squarefree, "restrict to squarefree n");
        app->add_option("--frac-bits", frac_bits, "fixed-point fractional bits")->capture_default_str();
        app->add_option("--L", degree, "sandwich degree L or auto")->capture_default_str();
        app->add_option("--kappa", kappa, "log-power in budgets and predictors");
        app->add_option("--C", C, "constant in the error budget")->capture_default_str();
        app->add_option("--delta", delta, "override delta");
        app->add_option("--out", out, "output path, - for stdout")->capture_default_str();
        app->add_option("--format", format, "csv or json")->capture_default_str();
        app->add_option("--threads", threads, "OpenMP threads (0: default)")->capture_default_str();
        app->add_option("--seed", seed, "seed for randomized suites")->capture_default_str();
    }

    ExperimentConfig config(double default_kappa) const
    {
        ExperimentConfig c;
        c.alpha = parse_literal(alpha);
        c.beta = parse_literal(beta);
        c.epsilon = eps;
        if (!(eps > 0.0)) {
            throw ConfigError("--eps must be positive");
        }
        c.window = parse_window(window);
        if (!xs.empty()) {
            c.xs = parse_x_list(xs);
        }
        if (!convergents.empty()) {
            c.convergent_indices = parse_index_list(convergents);
        }
        c.squarefree = squarefree;
        if (frac_bits < 1) {
            throw ConfigError("--frac-bits must be >= 1");
        }
        c.frac_bits = frac_bits;
        if (degree != "auto") {
            c.degree = parse_x_list(degree).at(0);
        }
        c.kappa = kappa.value_or(default_kappa);
        c.C = C;
        c.delta_override = delta;
        c.threads = threads;
        return c;
    }

    void emit(const Table& table) const { emit_report(table, parse_format(format), out); }
};

int report_breaches(std::size_t breaches, const std::string& what)
{
    if (breaches == 0) {
        return 0;
    }
    std::cerr << "smoothdist: " << breaches << ' ' << what << '\n';
    return 1;
}

int cmd_theorem(const CommonFlags& flags, bool squarefree)
{
    ExperimentConfig config = flags.config(0.0);
    const auto rows = squarefree ? run_squarefree_theorem(config) : run_theorem(config);
    flags.emit(theorem_table(rows));
    std::size_t breaches = 0;
    for (const TheoremRow& r : rows) {
        if (r.boundary > 0) {
            std::cerr << "warning: x = " << r.x << ": " << r.boundary << " undecided classifications\n";
        }
        if (!r.within_budget()) {
            std::cerr << "x = " << r.x << ": error " << r.error << " exceeds budget " << r.budget << '\n';
            ++breaches;
        }
        if (r.lower_sum && r.degree < r.x) {
            std::cerr << "note: x = " << r.x << ": bracketing uses L = " << r.degree << " < floor(x)\n";
        }
        if (!r.bracketed()) {
            std::cerr << "x = " << r.x << ": minorant sum " << *r.lower_sum << ", observed " << r.observed
                      << ", majorant sum " << *r.upper_sum << '\n';
            ++breaches;
        }
    }
    return report_breaches(breaches, "rows exceed the error budget or violate the bracketing");
}

std::vector<MemberSet> member_sets(const std::string& set)
{
    if (set == "A") {
        return {MemberSet::solutions};
    }
    if (set == "B") {
        return {MemberSet::all};
    }
    if (set == "both") {
        return {MemberSet::all, MemberSet::solutions};
    }
    throw ConfigError("--set must be A, B or both");
}

template <class Check>
int cmd_identity(const CommonFlags& flags, const std::string& set, Check check, const char* name)
{
    const ExperimentConfig config = flags.config(0.0);
    std::vector<DecompositionReport> reports;
    for (const GridPoint& p : resolve_grid(config)) {
        for (const MemberSet s : member_sets(set)) {
            reports.push_back(check(config, p.x, s));
        }
    }
    flags.emit(decomposition_table(reports));
    const auto failed = std::count_if(reports.begin(), reports.end(), [](const auto& r) { return !r.holds; });
    return report_breaches(static_cast<std::size_t>(failed), std::string(name) + " residuals out of bounds");
}

int cmd_sieve_lemma(const CommonFlags& flags, const std::string& region)
{
    const ExperimentConfig config = flags.config(0.0);
    std::vector<PrimeRegion> regions;
    if (region == "all") {
        regions = {PrimeRegion::low, PrimeRegion::mid, PrimeRegion::high};
    } else {
        regions = {parse_region(region)};
    }
    std::vector<DecompositionReport> reports;
    for (const GridPoint& p : resolve_grid(config)) {
        for (const PrimeRegion r : regions) {
            reports.push_back(run_sieve_lemma_check(config, p.x, r, config.squarefree));
        }
    }
    flags.emit(decomposition_table(reports));
    for (const auto& r : reports) {
        if (!r.holds) {
            std::cerr << "warning: " << r.kind << " at x = " << r.x << ": difference exponent above target + 0.1\n";
        }
    }
    return 0;
}

int cmd_lower_bound(const CommonFlags& flags)
{
    const ExperimentConfig config = flags.config(0.0);
    std::vector<LowerBoundReport> reports;
    for (const GridPoint& p : resolve_grid(config)) {
        reports.push_back(run_lower_bound_demo(config, p));
        if (reports.back().a_count == 0) {
            std::cerr << "warning: x = " << p.x << ": no x^eps-smooth a in [x^(1/3), 2x^(1/3))\n";
        }
    }
    flags.emit(lower_bound_table(reports));
    return 0;
}

struct SandwichFlags {
    std::vector<double> deltas{0.1};
    std::vector<std::size_t> degrees{100};
    std::size_t grid = 100'000;
    std::string coeffs;
};

int cmd_sandwich(const CommonFlags& flags, const SandwichFlags& sf)
{
    Table table;
    table.columns = {"delta", "L", "grid", "violations", "max_coeff_ratio", "mean_gap", "expected_gap"};
    std::size_t bad = 0;
    for (const double delta : sf.deltas) {
        for (const std::size_t degree : sf.degrees) {
            const SandwichPair pair = build_sandwich(delta, degree);
            const std::size_t violations = check_sandwich(pair, sf.grid);
            double ratio = 0.0;
            const double cap_const = 2.0 * delta + 1.0 / static_cast<double>(degree + 1);
            for (std::size_t l = 1; l <= degree; ++l) {
                const double cap = std::min(cap_const, 1.5 / static_cast<double>(l));
                for (const Side s : {Side::lower, Side::upper}) {
                    ratio = std::max(ratio, std::fabs(pair.coefficient(s, l)) / cap);
                }
            }
            const double gap = pair.constant(Side::upper) - pair.constant(Side::lower);
            table.rows.push_back({delta, static_cast<std::uint64_t>(degree), static_cast<std::uint64_t>(sf.grid),
                                  static_cast<std::uint64_t>(violations), ratio, gap,
                                  2.0 / static_cast<double>(degree + 1)});
            bad += violations > 0 || ratio > 1.0;
            if (!sf.coeffs.empty()) {
                std::ofstream out(sf.coeffs, std::ios::binary | std::ios::trunc);
                if (!out) {
                    throw ResourceError("cannot open '" + sf.coeffs + "'");
                }
                write_sandwich_csv(pair, out);
            }
        }
    }
    flags.emit(table);
    return report_breaches(bad, "sandwich configurations fail the pointwise or coefficient checks");
}

struct ExpsumFlags {
    std::string kind = "type1";
    std::vector<double> m_exponents;
    std::vector<std::uint64_t> ms;
    std::string a = "unit";
    std::string b = "moebius";
    std::string side = "upper";
    std::vector<double> gammas{0.0};
    double rho = 1.0;
    double t_max = 1000.0;
};

int cmd_expsum(const CommonFlags& flags, const ExpsumFlags& ef)
{
    ExperimentConfig config = flags.config(2.0);
    if (ef.kind == "perron") {
        Table table;
        table.columns = {"gamma", "rho", "T", "value", "indicator", "error", "bound"};
        for (const double g : ef.gammas) {
            const double value = perron_indicator(g, ef.rho, ef.t_max);
            const double indicator = std::fabs(g) < ef.rho ? 1.0 : 0.0;
            const double bound = 5.0 / (ef.t_max * std::fabs(std::fabs(g) - ef.rho));
            table.rows.push_back({g, ef.rho, ef.t_max, value, indicator, std::fabs(value - indicator), bound});
        }
        flags.emit(table);
        return 0;
    }
    if (ef.kind != "type1" && ef.kind != "type2") {
        throw ConfigError("--kind must be type1, type2 or perron");
    }
    const Side side = ef.side == "lower" ? Side::lower : Side::upper;
    if (ef.side != "lower" && ef.side != "upper") {
        throw ConfigError("--side must be lower or upper");
    }
    const CoefficientClass a = parse_coefficient_class(ef.a);
    const CoefficientClass b = parse_coefficient_class(ef.b);
    const FixedPointReal alpha = fixed_point_value(config.alpha, 128);
    std::vector<BoundReport> reports;
    for (const GridPoint& p : resolve_grid(config)) {
        const auto xd = static_cast<double>(p.x);
        std::vector<std::uint64_t> ms = ef.ms;
        for (const double e : ef.m_exponents) {
            ms.push_back(static_cast<std::uint64_t>(std::llround(std::pow(xd, e))));
        }
        if (ms.empty()) {
            throw ConfigError("give --M or --M-exp");
        }
        const double delta = theorem_delta(config, p.x);
        const std::size_t degree = resolve_degree(config, p.x);
        const SandwichPair pair = build_sandwich(delta, degree);
        if (degree < p.x) {
            std::cerr << "note: x = " << p.x << ": L = " << degree << " < floor(x); truncation error up to x/(L+1) = "
                      << xd / static_cast<double>(degree + 1) << " per term\n";
        }
        for (const std::uint64_t m : ms) {
            BoundReport r;
            r.kind = ef.kind == "type1" ? "type1/" + a.name() : "type2/" + a.name() + "," + b.name();
            r.x = p.x;
            r.m_base = std::max<std::uint64_t>(m, 1);
            r.q = p.q;
            r.delta = delta;
            r.degree = degree;
            r.kappa = config.kappa;
            const auto sum = ef.kind == "type1" ? type1_sum(alpha, p.x, r.m_base, a, pair, side)
                                                : type2_sum(alpha, p.x, r.m_base, a, b, pair, side);
            r.lhs_abs = std::abs(sum);
            const auto md = static_cast<double>(r.m_base);
            const auto qd = static_cast<double>(p.q);
            r.predictor = ef.kind == "type1"
                              ? type1_predictor(xd, md, qd, delta, config.kappa)
                              : type2_predictor(xd, md, qd, delta, natural_regime(xd, md), config.kappa);
            r.ratio = r.lhs_abs / r.predictor;
            reports.push_back(r);
        }
    }
    flags.emit(bound_table(reports));
    return 0;
}

struct PsiFlags {
    std::string method = "both";
    std::size_t random = 0;
};

int cmd_psi(const CommonFlags& flags, const PsiFlags& pf)
{
    const bool count = pf.method == "count" || pf.method == "both";
    const bool recursive = pf.method == "recursive" || pf.method == "both";
    if (!count && !recursive) {
        throw ConfigError("--method must be count, recursive or both");
    }
    std::vector<std::pair<std::uint64_t, SmoothnessWindow>> jobs;
    std::vector<bool> squarefree_flags;
    const std::vector<std::uint64_t> xs = flags.xs.empty() ? std::vector<std::uint64_t>{} : parse_x_list(flags.xs);
    if (xs.empty()) {
        throw ConfigError("psi needs --x");
    }
    if (pf.random > 0) {
        // random x <= max(--x) and random windows, both squarefree flags
        std::mt19937_64 rng(flags.seed);
        const std::uint64_t x_max = *std::max_element(xs.begin(), xs.end());
        for (std::size_t i = 0; i < pf.random; ++i) {
            const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(1, x_max)(rng);
            const std::uint64_t y = std::uniform_int_distribution<std::uint64_t>(2, std::max<std::uint64_t>(2, isqrt(x) + 2))(rng);
            const std::uint64_t z = std::uniform_int_distribution<std::uint64_t>(y - 1, std::max(y, x))(rng);
            for (const bool sf : {false, true}) {
                jobs.push_back({x, SmoothnessWindow(y, z)});
                squarefree_flags.push_back(sf);
            }
        }
    } else {
        const WindowSpec spec = parse_window(flags.window);
        for (const std::uint64_t x : xs) {
            jobs.push_back({x, spec.resolve(x)});
            squarefree_flags.push_back(flags.squarefree);
        }
    }
    Table table;
    table.columns = {"x", "y", "z", "squarefree"};
    if (count) {
        table.columns.push_back("psi_count");
    }
    if (recursive) {
        table.columns.push_back("psi_recursive");
    }
    std::size_t mismatches = 0;
    StreamOptions options;
    options.threads = flags.threads;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& [x, w] = jobs[i];
        const bool sf = squarefree_flags[i];
        std::vector<Cell> row{x, w.y, w.z, std::uint64_t{sf ? 1u : 0u}};
        std::uint64_t a = 0, b = 0;
        if (count) {
            a = psi_count(x, w, sf, options);
            row.emplace_back(a);
        }
        if (recursive) {
            b = psi_recursive(x, w, sf);
            row.emplace_back(b);
        }
        mismatches += count && recursive && a != b;
        table.rows.push_back(std::move(row));
    }
    flags.emit(table);
    return report_breaches(mismatches, "psi_count / psi_recursive mismatches");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Smooth numbers in Diophantine approximation windows: experiments"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string set = "both";
    std::string region = "all";
    SandwichFlags sandwich;
    ExpsumFlags expsum;
    PsiFlags psi;

    auto* theorem = app.add_subcommand("theorem", "count smooth n <= x with ||alpha n + beta|| < delta");
    auto* theorem_sf = app.add_subcommand("theorem-squarefree", "the same over squarefree smooth n");
    auto* buchstab = app.add_subcommand("buchstab", "exact largest-prime-factor decomposition");
    auto* role = app.add_subcommand("role-reversal", "role-reversal identity for primes above x^(3/4)");
    auto* lemma = app.add_subcommand("sieve-lemma", "sum_p S(A_p; y, p) against 2 delta sum_p S(B_p; y, p)");
    auto* lower = app.add_subcommand("lower-bound", "count n = ab with a ~ x^(1/3), ab x^eps-smooth");
    auto* sand = app.add_subcommand("sandwich-check", "verify minorant <= chi <= majorant on a grid");
    auto* exps = app.add_subcommand("expsum", "Type I / Type II sums against predictors; Perron quadrature");
    auto* psic = app.add_subcommand("psi", "Psi(x; y, z) by streaming and by recursion");

    for (auto* sub : {theorem, theorem_sf, buchstab, role, lemma, lower, sand, exps, psic}) {
        flags.attach(sub);
    }
    for (auto* sub : {buchstab, role}) {
        sub->add_option("--set", set, "A (solutions), B (all of [2, x]) or both")->capture_default_str();
    }
    lemma->add_option("--region", region, "low, mid, high or all")->capture_default_str();
    sand->add_option("--deltas", sandwich.deltas, "delta values")->delimiter(',');
    sand->add_option("--degrees", sandwich.degrees, "L values")->delimiter(',');
    sand->add_option("--grid", sandwich.grid, "uniform grid points")->capture_default_str();
    sand->add_option("--coeffs", sandwich.coeffs, "write l,c_minus,c_plus CSV of the last pair");
    exps->add_option("--kind", expsum.kind, "type1, type2 or perron")->capture_default_str();
    exps->add_option("--M", expsum.ms, "M values")->delimiter(',');
    exps->add_option("--M-exp", expsum.m_exponents, "M = x^e for these e")->delimiter(',');
    exps->add_option("--a", expsum.a, "a_m class: unit, moebius, divisor, prime")->capture_default_str();
    exps->add_option("--b", expsum.b, "b_n class (type2)")->capture_default_str();
    exps->add_option("--side", expsum.side, "lower or upper sandwich coefficients")->capture_default_str();
    exps->add_option("--gamma", expsum.gammas, "Perron gamma values")->delimiter(',');
    exps->add_option("--rho", expsum.rho, "Perron rho")->capture_default_str();
    exps->add_option("--T", expsum.t_max, "Perron truncation T")->capture_default_str();
    psic->add_option("--method", psi.method, "count, recursive or both")->capture_default_str();
    psic->add_option("--random", psi.random, "random configs up to max --x, both squarefree flags");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (flags.threads > 0) {
            omp_set_num_threads(flags.threads);
        }
        if (theorem->parsed()) {
            return cmd_theorem(flags, flags.squarefree);
        }
        if (theorem_sf->parsed()) {
            return cmd_theorem(flags, true);
        }
        if (buchstab->parsed()) {
            return cmd_identity(flags, set, run_buchstab_check, "buchstab");
        }
        if (role->parsed()) {
            return cmd_identity(flags, set, run_role_reversal_check, "role-reversal");
        }
        if (lemma->parsed()) {
            return cmd_sieve_lemma(flags, region);
        }
        if (lower->parsed()) {
            return cmd_lower_bound(flags);
        }
        if (sand->parsed()) {
            return cmd_sandwich(flags, sandwich);
        }
        if (exps->parsed()) {
            return cmd_expsum(flags, expsum);
        }
        if (psic->parsed()) {
            return cmd_psi(flags, psi);
        }
    } catch (const AssertionFailure& e) {
        std::cerr << "smoothdist: assertion failed: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "smoothdist: " << e.what() << '\n';
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "smoothdist: " << e.what() << '\n';
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "smoothdist: resource limit: " << e.what() << '\n';
        return 3;
    } catch (const PrecisionError& e) {
        std::cerr << "smoothdist: precision limit: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "smoothdist: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
