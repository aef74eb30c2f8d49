#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"
#include "smoothdist/fourier.hpp"

#include <omp.h>

#include <cmath>
#include <limits>

namespace smoothdist {

namespace {

// bracket sums are folded per block of 2^16 consecutive integers, each
// block summed in ascending n, so the result does not depend on how the
// stream was chunked
constexpr unsigned kBlockShift = 16;

struct Tally {
    std::uint64_t in = 0;
    std::uint64_t out = 0;
    std::uint64_t boundary = 0;
};

class Classifier {
public:
    Classifier(const ExperimentConfig& config, double delta)
        : alpha_(fixed_point_value(config.alpha, config.frac_bits)),
          beta_(fixed_point_value(config.beta, config.frac_bits)),
          fast_(config.frac_bits == 128),
          // phases for the sandwich sums always come from 128 bits
          phases_(fixed_point_value(config.alpha, 128), fixed_point_value(config.beta, 128), delta),
          delta_(delta)
    {
    }

    ChiOutcome classify(std::uint64_t n) const
    {
        if (fast_) {
            return phases_.classify(n);
        }
        return chi_indicator(nearest_distance(alpha_, n, beta_, 0), delta_);
    }

    double phase(std::uint64_t n) const { return phases_.phase(n); }

    // The certified error grows with n, so a PrecisionError surfaces here
    // rather than inside a parallel region.
    void preflight(std::uint64_t max_n) const
    {
        if (!fast_) {
            nearest_distance(alpha_, max_n, beta_, 0);
        }
    }

private:
    FixedPointReal alpha_;
    FixedPointReal beta_;
    bool fast_;
    PhaseClassifier phases_;
    double delta_;
};

struct BracketFold {
    std::uint64_t block = std::numeric_limits<std::uint64_t>::max();
    double carry_lo = 0;
    double carry_hi = 0;
    double total_lo = 0;
    double total_hi = 0;

    void close()
    {
        total_lo += carry_lo;
        total_hi += carry_hi;
        carry_lo = carry_hi = 0;
    }
};

void fold_brackets(std::span<const std::uint64_t> chunk, const Classifier& cls, const SandwichPair& pair,
                   int threads, BracketFold& fold)
{
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
        if (i == 0 || (chunk[i] >> kBlockShift) != (chunk[i - 1] >> kBlockShift)) {
            starts.push_back(i);
        }
    }
    const auto segments = static_cast<std::int64_t>(starts.size());
    starts.push_back(chunk.size());
    std::vector<double> lo(starts.size()), hi(starts.size());
    const bool continues = !chunk.empty() && (chunk[0] >> kBlockShift) == fold.block;

#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (std::int64_t s = 0; s < segments; ++s) {
        double acc_lo = 0, acc_hi = 0;
        if (s == 0 && continues) {
            acc_lo = fold.carry_lo;
            acc_hi = fold.carry_hi;
        }
        for (std::size_t i = starts[static_cast<std::size_t>(s)]; i < starts[static_cast<std::size_t>(s) + 1]; ++i) {
            const auto [l, u] = eval_both(pair, cls.phase(chunk[i]));
            acc_lo += l;
            acc_hi += u;
        }
        lo[static_cast<std::size_t>(s)] = acc_lo;
        hi[static_cast<std::size_t>(s)] = acc_hi;
    }

    for (std::int64_t s = 0; s < segments; ++s) {
        const auto idx = static_cast<std::size_t>(s);
        const std::uint64_t block = chunk[starts[idx]] >> kBlockShift;
        if (block != fold.block) {
            fold.close();
            fold.block = block;
        }
        fold.carry_lo = lo[idx];
        fold.carry_hi = hi[idx];
    }
}

} // namespace

bool TheoremRow::bracketed() const
{
    if (!lower_sum || !upper_sum) {
        return true;
    }
    const double slack = 1e-8 * static_cast<double>(psi) + 1e-6;
    const auto obs = static_cast<double>(observed);
    return *lower_sum <= obs + static_cast<double>(boundary) + slack && *upper_sum >= obs - slack;
}

TheoremRow theorem_row(const ExperimentConfig& config, GridPoint point, bool squarefree)
{
    validate_theorem_point(config, point.x);
    const std::uint64_t x = point.x;
    const double delta = theorem_delta(config, x);
    const int threads = config.threads > 0 ? config.threads : omp_get_max_threads();

    TheoremRow row;
    row.x = x;
    row.q = point.q;
    row.delta = delta;
    row.C = config.C;
    row.kappa = config.kappa;
    row.window = config.window.resolve(x);
    row.squarefree = squarefree;
    row.degree = resolve_degree(config, x);

    const Classifier cls(config, delta);
    cls.preflight(x);
    const bool brackets = x <= config.bracket_max_x;
    std::optional<SandwichPair> pair;
    if (brackets) {
        pair = build_sandwich(delta, row.degree);
    }
    BracketFold fold;

    StreamOptions options;
    options.limits = config.limits;
    options.threads = threads;
    SmoothStream stream(x, row.window, squarefree, options);
    Tally tally;
    for (auto chunk = stream.next_chunk(); !chunk.empty(); chunk = stream.next_chunk()) {
        const auto count = static_cast<std::int64_t>(chunk.size());
        std::uint64_t in = 0, out = 0, boundary = 0;
#pragma omp parallel for schedule(static) num_threads(threads) reduction(+ : in, out, boundary)
        for (std::int64_t i = 0; i < count; ++i) {
            switch (cls.classify(chunk[static_cast<std::size_t>(i)])) {
            case ChiOutcome::in:
                ++in;
                break;
            case ChiOutcome::out:
                ++out;
                break;
            case ChiOutcome::boundary:
                ++boundary;
                break;
            }
        }
        tally.in += in;
        tally.out += out;
        tally.boundary += boundary;
        if (brackets) {
            fold_brackets(chunk, cls, *pair, threads, fold);
        }
    }

    row.psi = tally.in + tally.out + tally.boundary;
    row.observed = tally.in;
    row.out = tally.out;
    row.boundary = tally.boundary;
    row.main_term = 2.0 * delta * static_cast<double>(row.psi);
    row.error = std::fabs(static_cast<double>(row.observed) - row.main_term);
    const double logx = std::log(static_cast<double>(x));
    row.error_exponent = std::log(std::max(row.error, 1.0)) / logx;
    row.budget = config.C * std::pow(static_cast<double>(x), 0.75 + config.epsilon / 2.0)
                 * std::pow(logx, config.kappa);
    if (brackets) {
        fold.close();
        row.lower_sum = fold.total_lo;
        row.upper_sum = fold.total_hi;
    }
    return row;
}

std::vector<TheoremRow> run_theorem(const ExperimentConfig& config)
{
    const auto grid = resolve_grid(config);
    for (const GridPoint& p : grid) {
        validate_theorem_point(config, p.x);
    }
    std::vector<TheoremRow> rows;
    for (const GridPoint& p : grid) {
        rows.push_back(theorem_row(config, p, config.squarefree));
    }
    return rows;
}

std::vector<TheoremRow> run_squarefree_theorem(const ExperimentConfig& config)
{
    ExperimentConfig sf = config;
    sf.squarefree = true;
    return run_theorem(sf);
}

} // namespace smoothdist
