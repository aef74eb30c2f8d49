#include "smoothdist/diophantine.hpp"
#include "smoothdist/errors.hpp"

#include <cmath>
#include <regex>
#include <sstream>

namespace smoothdist {

namespace {

bool is_perfect_square(std::int64_t d)
{
    if (d < 0) {
        return false;
    }
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(d)));
    while (r > 0 && static_cast<__int128>(r) * r > d) {
        --r;
    }
    while (static_cast<__int128>(r + 1) * (r + 1) <= d) {
        ++r;
    }
    return static_cast<__int128>(r) * r == d;
}

std::int64_t narrow(__int128 v, const char* what)
{
    if (v > INT64_MAX || v < INT64_MIN) {
        throw PreconditionError(std::string("quadratic surd: ") + what + " overflows 64 bits");
    }
    return static_cast<std::int64_t>(v);
}

std::int64_t parse_int(const std::string& text)
{
    try {
        std::size_t used = 0;
        const auto v = std::stoll(text, &used);
        if (used != text.size()) {
            throw ConfigError("bad integer '" + text + "'");
        }
        return v;
    } catch (const std::out_of_range&) {
        throw ConfigError("integer out of range '" + text + "'");
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad integer '" + text + "'");
    }
}

std::string strip(std::string_view text)
{
    std::string out;
    for (const char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            out.push_back(c);
        }
    }
    return out;
}

} // namespace

QuadraticSurd QuadraticSurd::make(std::int64_t p, std::int64_t d, std::int64_t q)
{
    if (q == 0) {
        throw PreconditionError("quadratic surd: Q must be nonzero");
    }
    if (d <= 0) {
        throw PreconditionError("quadratic surd: D must be positive");
    }
    if (is_perfect_square(d)) {
        throw PreconditionError("quadratic surd: D = " + std::to_string(d)
                                + " is a perfect square (rational value)");
    }
    const __int128 rem = (static_cast<__int128>(d) - static_cast<__int128>(p) * p) % q;
    if (rem == 0) {
        return QuadraticSurd(p, d, q);
    }
    const __int128 aq = q < 0 ? -static_cast<__int128>(q) : q;
    return QuadraticSurd(narrow(p * aq, "P"), narrow(static_cast<__int128>(d) * q * q, "D"),
                         narrow(q * aq, "Q"));
}

long double QuadraticSurd::approx() const
{
    return (static_cast<long double>(p_) + std::sqrt(static_cast<long double>(d_)))
           / static_cast<long double>(q_);
}

std::string QuadraticSurd::to_string() const
{
    if (p_ == 0 && q_ == 1) {
        return "sqrt(" + std::to_string(d_) + ")";
    }
    return "(" + std::to_string(p_) + "+sqrt(" + std::to_string(d_) + "))/" + std::to_string(q_);
}

Rational Rational::make(BigInt num, BigInt den)
{
    if (den == 0) {
        throw PreconditionError("rational: zero denominator");
    }
    mpq_class v(num, den);
    v.canonicalize();
    return Rational{v.get_num(), v.get_den()};
}

long double Rational::approx() const
{
    // mpq -> double keeps 53 bits, plenty for display and coarse checks
    return static_cast<long double>(mpq_class(num, den).get_d());
}

bool Rational::is_dyadic() const
{
    return mpz_popcount(den.get_mpz_t()) == 1;
}

std::string Rational::to_string() const
{
    if (den == 1) {
        return num.get_str();
    }
    return num.get_str() + "/" + den.get_str();
}

RealLiteral parse_literal(std::string_view text)
{
    const std::string s = strip(text);
    std::smatch m;

    static const std::regex sqrt_only(R"(^sqrt\((\d+)\)(?:/([+-]?\d+))?$)");
    static const std::regex surd(R"(^\(([+-]?\d+)([+-])sqrt\((\d+)\)\)(?:/([+-]?\d+))?$)");
    static const std::regex hex(R"(^([+-]?)0[xX]([0-9a-fA-F]+)(?:\.([0-9a-fA-F]*))?$)");
    static const std::regex ratio(R"(^([+-]?\d+)(?:/(\d+))?$)");

    try {
        if (std::regex_match(s, m, sqrt_only)) {
            const auto q = m[2].matched ? parse_int(m[2]) : 1;
            return QuadraticSurd::make(0, parse_int(m[1]), q);
        }
        if (std::regex_match(s, m, surd)) {
            auto p = parse_int(m[1]);
            auto q = m[4].matched ? parse_int(m[4]) : 1;
            if (m[2] == "-") {
                // (P - sqrt D)/Q = (-P + sqrt D)/(-Q)
                p = -p;
                q = -q;
            }
            return QuadraticSurd::make(p, parse_int(m[3]), q);
        }
        if (std::regex_match(s, m, hex)) {
            const std::string frac = m[3].matched ? m[3].str() : std::string();
            BigInt num(m[2].str() + frac, 16);
            BigInt den = 1;
            den <<= static_cast<mp_bitcnt_t>(4 * frac.size());
            if (m[1] == "-") {
                num = -num;
            }
            return Rational::make(num, den);
        }
        if (std::regex_match(s, m, ratio)) {
            const BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
            return Rational::make(BigInt(m[1].str()), den);
        }
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("literal '") + s + "': " + e.what());
    }
    throw ConfigError("unrecognized real literal '" + std::string(text) + "'");
}

std::string to_string(const RealLiteral& value)
{
    return std::visit([](const auto& v) { return v.to_string(); }, value);
}

long double approx(const RealLiteral& value)
{
    return std::visit([](const auto& v) { return v.approx(); }, value);
}

} // namespace smoothdist
