#include "smoothdist/diophantine.hpp"
#include "smoothdist/errors.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

namespace smoothdist {

namespace {

using i128 = __int128;

i128 isqrt64(std::int64_t n)
{
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), BigInt(static_cast<long>(n)).get_mpz_t());
    return static_cast<i128>(r.get_si());
}

i128 floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
        --q;
    }
    return q;
}

// floor((P + sqrt(D)) / Q) for nonsquare D with root = floor(sqrt(D)).
i128 surd_floor(i128 p, i128 q, i128 root)
{
    if (q > 0) {
        return floor_div(p + root, q);
    }
    // (P + sqrt D) lies strictly between P + root and P + root + 1
    return -(floor_div(p + root, -q) + 1);
}

} // namespace

ContinuedFraction::ContinuedFraction(std::int64_t a0, std::vector<std::int64_t> preperiod,
                                     std::vector<std::int64_t> period)
    : a0_(a0), preperiod_(std::move(preperiod)), period_(std::move(period))
{
    if (period_.empty()) {
        throw PreconditionError("continued fraction: period must be nonempty");
    }
    const auto positive = [](std::int64_t a) { return a >= 1; };
    if (!std::all_of(preperiod_.begin(), preperiod_.end(), positive)
        || !std::all_of(period_.begin(), period_.end(), positive)) {
        throw PreconditionError("continued fraction: partial quotients a_j (j >= 1) must be >= 1");
    }
}

std::int64_t ContinuedFraction::partial_quotient(std::size_t j) const
{
    if (j == 0) {
        return a0_;
    }
    if (j - 1 < preperiod_.size()) {
        return preperiod_[j - 1];
    }
    return period_[(j - 1 - preperiod_.size()) % period_.size()];
}

ContinuedFraction cf_expand(const QuadraticSurd& surd, std::size_t max_terms)
{
    const i128 d = surd.d();
    const i128 root = isqrt64(surd.d());
    i128 p = surd.p();
    i128 q = surd.q();

    std::vector<std::int64_t> terms;
    std::map<std::pair<i128, i128>, std::size_t> seen;
    terms.push_back(static_cast<std::int64_t>(surd_floor(p, q, root)));

    for (std::size_t i = 1; i <= max_terms; ++i) {
        const i128 a = terms.back();
        p = a * q - p;
        q = (d - p * p) / q;
        const auto [it, fresh] = seen.emplace(std::make_pair(p, q), i);
        if (!fresh) {
            const std::size_t j = it->second;
            std::vector<std::int64_t> pre(terms.begin() + 1, terms.begin() + static_cast<std::ptrdiff_t>(j));
            std::vector<std::int64_t> period(terms.begin() + static_cast<std::ptrdiff_t>(j), terms.end());
            return ContinuedFraction(terms.front(), std::move(pre), std::move(period));
        }
        terms.push_back(static_cast<std::int64_t>(surd_floor(p, q, root)));
    }
    throw PreconditionError("cf_expand: no period found within " + std::to_string(max_terms) + " terms");
}

std::int64_t max_partial_quotient(const ContinuedFraction& cf)
{
    std::int64_t best = *std::max_element(cf.period().begin(), cf.period().end());
    for (const auto a : cf.preperiod()) {
        best = std::max(best, a);
    }
    return best;
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, std::size_t count)
{
    if (count < 1) {
        throw PreconditionError("convergents: count must be >= 1");
    }
    std::vector<Convergent> out;
    out.reserve(count);
    BigInt p_prev2 = 0, p_prev = 1;
    BigInt q_prev2 = 1, q_prev = 0;
    for (std::size_t s = 0; s < count; ++s) {
        const BigInt a(static_cast<long>(cf.partial_quotient(s)));
        BigInt p = a * p_prev + p_prev2;
        BigInt q = a * q_prev + q_prev2;
        out.push_back(Convergent{s, p, q});
        p_prev2 = std::move(p_prev);
        p_prev = std::move(p);
        q_prev2 = std::move(q_prev);
        q_prev = std::move(q);
    }
    return out;
}

Convergent select_denominator(std::uint64_t x, const ContinuedFraction& cf)
{
    if (x < 2) {
        throw PreconditionError("select_denominator: x must be >= 2");
    }
    BigInt x2;
    mpz_set_ui(x2.get_mpz_t(), x);
    x2 *= x2;
    BigInt p_prev2 = 0, p_prev = 1;
    BigInt q_prev2 = 1, q_prev = 0;
    for (std::size_t s = 0;; ++s) {
        const BigInt a(static_cast<long>(cf.partial_quotient(s)));
        BigInt p = a * p_prev + p_prev2;
        BigInt q = a * q_prev + q_prev2;
        if (q * q * q >= x2) {
            return Convergent{s, p, q};
        }
        p_prev2 = std::move(p_prev);
        p_prev = std::move(p);
        q_prev2 = std::move(q_prev);
        q_prev = std::move(q);
    }
}

BigInt x_from_q(const BigInt& q)
{
    if (q < 1) {
        throw PreconditionError("x_from_q: q must be >= 1");
    }
    BigInt cube = q * q * q;
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), cube.get_mpz_t());
    return root;
}

std::uint64_t x_from_q(std::uint64_t q)
{
    BigInt big;
    mpz_set_ui(big.get_mpz_t(), q);
    const BigInt x = x_from_q(big);
    if (!x.fits_ulong_p()) {
        throw ResourceError("x_from_q: result exceeds 64 bits");
    }
    return x.get_ui();
}

} // namespace smoothdist
