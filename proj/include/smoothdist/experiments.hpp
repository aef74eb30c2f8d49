#pragma once

// Experiment drivers: counting smooth n <= x with ||alpha n + beta|| < delta
// against 2 delta Psi, the exact decomposition identities behind that
// count, and CSV/JSON report emission.

#include "smoothdist/diophantine.hpp"
#include "smoothdist/expsums.hpp"
#include "smoothdist/sieve.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace smoothdist {

// Either an absolute window [y, z] or exponents with y = ceil(x^(1/u1)),
// z = floor(x^(1/u2)).
struct WindowSpec {
    bool exponents = true;
    std::uint64_t y = 0;
    std::uint64_t z = 0;
    double u1 = 8.0;
    double u2 = 3.0;

    SmoothnessWindow resolve(std::uint64_t x) const;
    std::string to_string() const;
};

// "y,z" (absolute), "u=8,3" or "1/8,1/3" (exponents). Throws ConfigError.
WindowSpec parse_window(const std::string& text);

struct ExperimentConfig {
    RealLiteral alpha = QuadraticSurd::sqrt(2);
    RealLiteral beta = Rational{0, 1};
    double epsilon = 0.1;
    WindowSpec window{};
    std::vector<std::uint64_t> xs;               // explicit x values
    std::vector<std::size_t> convergent_indices; // or x = floor(q_s^(3/2))
    bool squarefree = false;
    std::optional<std::size_t> degree;           // L; nullopt = auto
    unsigned frac_bits = 128;
    double kappa = 0.0;
    double C = 10.0;
    int threads = 0;
    std::optional<double> delta_override;
    // rows with x above this skip the minorant/majorant sums
    std::uint64_t bracket_max_x = 1'000'000;
    SieveLimits limits{};
};

// "30913,1e5,..." Throws ConfigError.
std::vector<std::uint64_t> parse_x_list(const std::string& text);
// "8..14" or "8,10,12". Throws ConfigError.
std::vector<std::size_t> parse_index_list(const std::string& text);

struct GridPoint {
    std::uint64_t x = 0;
    std::uint64_t q = 0;
};

// The x grid with the denominator q attached to each x: q_s itself for
// convergent-driven x, select_denominator(x) for a surd, the denominator
// for a rational alpha.
std::vector<GridPoint> resolve_grid(const ExperimentConfig& config);

// x^(-1/4 + eps), or the override.
double theorem_delta(const ExperimentConfig& config, std::uint64_t x);

// L = min(floor(x), 10^5) unless fixed by the config.
std::size_t resolve_degree(const ExperimentConfig& config, std::uint64_t x);

// Checks 2 <= y, y^2 < x, y < z <= x and delta < 1/2. Throws ConfigError.
void validate_theorem_point(const ExperimentConfig& config, std::uint64_t x);

struct TheoremRow {
    std::uint64_t x = 0;
    std::uint64_t q = 0;
    double delta = 0;
    std::uint64_t psi = 0;
    std::uint64_t observed = 0;
    std::uint64_t out = 0;
    std::uint64_t boundary = 0;
    double main_term = 0;
    double error = 0;
    double error_exponent = 0;
    double budget = 0;
    double C = 0;
    double kappa = 0;
    SmoothnessWindow window{};
    bool squarefree = false;
    // sums of the degree-L minorant / majorant over the stream
    std::size_t degree = 0;
    std::optional<double> lower_sum;
    std::optional<double> upper_sum;

    bool within_budget() const { return error <= budget; }
    // lower_sum <= observed <= upper_sum with boundary slack; true when
    // the sums were not computed
    bool bracketed() const;
};

std::vector<TheoremRow> run_theorem(const ExperimentConfig& config);
// run_theorem with squarefree streams regardless of config.squarefree
std::vector<TheoremRow> run_squarefree_theorem(const ExperimentConfig& config);

// A single row; exposed for tests.
TheoremRow theorem_row(const ExperimentConfig& config, GridPoint point, bool squarefree);

struct DecompositionReport {
    std::string kind;
    std::uint64_t x = 0;
    SmoothnessWindow window{};
    double delta = 0;
    std::vector<std::pair<std::string, double>> terms;
    std::int64_t residual = 0;
    std::int64_t residual_bound = 0;
    bool holds = false;
};

enum class MemberSet {
    all,      // B = [2, x]
    solutions // A = { n in B : ||alpha n + beta|| < delta }
};

std::string to_string(MemberSet set);

// Buchstab split of the window-smooth members; residual must be 0.
DecompositionReport run_buchstab_check(const ExperimentConfig& config, std::uint64_t x, MemberSet set);

// Both sides of the role-reversal identity for primes p > x^(3/4); the
// residual must equal the number of composite m with mn = x, which is at
// most tau(x).
DecompositionReport run_role_reversal_check(const ExperimentConfig& config, std::uint64_t x,
                                            MemberSet set);

enum class PrimeRegion {
    low,  // p < x^(1/4)
    mid,  // x^(1/4) <= p <= x^(3/4)
    high  // p > x^(3/4)
};

PrimeRegion parse_region(const std::string& text);
std::string to_string(PrimeRegion region);

// sum_p S(A_p; y, p) (squarefree: T(A_p; y, p-1)) against
// 2 delta sum_p S(B_p; y, p) over window primes in the region.
DecompositionReport run_sieve_lemma_check(const ExperimentConfig& config, std::uint64_t x,
                                          PrimeRegion region, bool squarefree);

struct LowerBoundReport {
    std::uint64_t x = 0;
    std::uint64_t q = 0;
    double epsilon = 0;
    double threshold = 0;         // x^(-1/3 + eps)
    std::uint64_t smooth_limit = 0; // largest integer < x^eps
    std::uint64_t a_count = 0;    // smooth a with x <= a^3 < 8x
    std::uint64_t count = 0;      // distinct n = ab in the construction
    std::uint64_t boundary = 0;
    double exponent = 0;          // ln(count) / ln x
    double target = 0;            // 2/3 + eps
};

LowerBoundReport run_lower_bound_demo(const ExperimentConfig& config, GridPoint point);

// Tabular report shared by every subcommand.
using Cell = std::variant<std::uint64_t, std::int64_t, double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

enum class ReportFormat { csv, json };

ReportFormat parse_format(const std::string& text);

Table theorem_table(const std::vector<TheoremRow>& rows);
Table decomposition_table(const std::vector<DecompositionReport>& reports);
Table bound_table(const std::vector<BoundReport>& reports);
Table lower_bound_table(const std::vector<LowerBoundReport>& reports);

// Reals use %.12g, integers are printed bare. JSON is an array of objects
// keyed by column name. Throws PreconditionError for an empty table.
void write_report(const Table& table, ReportFormat format, std::ostream& out);
// path "-" writes to stdout. Throws ResourceError on I/O failure.
void emit_report(const Table& table, ReportFormat format, const std::string& path);

} // namespace smoothdist
