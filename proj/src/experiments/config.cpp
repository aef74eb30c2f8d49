#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace smoothdist {

namespace {

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        parts.push_back(b == std::string::npos ? std::string() : item.substr(b, e - b + 1));
    }
    return parts;
}

std::uint64_t parse_count(const std::string& token)
{
    std::uint64_t v = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, v);
    if (ec == std::errc() && ptr == end) {
        return v;
    }
    // scientific shorthand such as 1e6, accepted only when exact
    double d = 0;
    auto [dptr, dec] = std::from_chars(token.data(), end, d);
    if (dec != std::errc() || dptr != end || !(d >= 0) || d > 1.8e19 || std::floor(d) != d) {
        throw ConfigError("not a nonnegative integer: '" + token + "'");
    }
    return static_cast<std::uint64_t>(d);
}

double parse_real(const std::string& token)
{
    double d = 0;
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, d);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("not a number: '" + token + "'");
    }
    return d;
}

// u in "1/u" or plain "u"
double parse_exponent(const std::string& token)
{
    if (token.rfind("1/", 0) == 0) {
        return parse_real(token.substr(2));
    }
    return parse_real(token);
}

// floor(x^(1/u)) exactly for integer u, with an integer correction step
// for fractional u
std::uint64_t floor_root(std::uint64_t x, double u)
{
    if (std::floor(u) == u && u <= 64) {
        return iroot(x, static_cast<unsigned>(u));
    }
    auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(x), 1.0L / u));
    auto powl_at = [u](std::uint64_t v) { return std::pow(static_cast<long double>(v), static_cast<long double>(u)); };
    while (r > 0 && powl_at(r) > static_cast<long double>(x)) {
        --r;
    }
    while (powl_at(r + 1) <= static_cast<long double>(x)) {
        ++r;
    }
    return r;
}

bool exact_root(std::uint64_t x, double u, std::uint64_t r)
{
    if (std::floor(u) != u) {
        return false;
    }
    unsigned __int128 p = 1;
    for (unsigned i = 0; i < static_cast<unsigned>(u); ++i) {
        p *= r;
        if (p > x) {
            return false;
        }
    }
    return p == x;
}

std::uint64_t to_u64(const BigInt& v, const char* what)
{
    if (v < 0 || !v.fits_ulong_p()) {
        throw ConfigError(std::string(what) + " does not fit in 64 bits: " + v.get_str());
    }
    return v.get_ui();
}

} // namespace

SmoothnessWindow WindowSpec::resolve(std::uint64_t x) const
{
    if (!exponents) {
        return SmoothnessWindow(y, z);
    }
    const std::uint64_t r1 = floor_root(x, u1);
    const std::uint64_t lo = exact_root(x, u1, r1) ? r1 : r1 + 1;
    const std::uint64_t hi = floor_root(x, u2);
    return SmoothnessWindow(std::max<std::uint64_t>(lo, 2), hi);
}

std::string WindowSpec::to_string() const
{
    std::ostringstream out;
    if (exponents) {
        out << "u=" << u1 << ',' << u2;
    } else {
        out << y << ',' << z;
    }
    return out.str();
}

WindowSpec parse_window(const std::string& text)
{
    WindowSpec spec;
    std::string body = text;
    bool exponent_form = false;
    if (body.rfind("u=", 0) == 0) {
        body = body.substr(2);
        exponent_form = true;
    }
    const auto parts = split(body, ',');
    if (parts.size() != 2) {
        throw ConfigError("window must be 'y,z', 'u=u1,u2' or '1/u1,1/u2': '" + text + "'");
    }
    if (parts[0].rfind("1/", 0) == 0 || parts[1].rfind("1/", 0) == 0) {
        exponent_form = true;
    }
    if (exponent_form) {
        spec.exponents = true;
        spec.u1 = parse_exponent(parts[0]);
        spec.u2 = parse_exponent(parts[1]);
        if (!(spec.u1 >= 1.0) || !(spec.u2 >= 1.0)) {
            throw ConfigError("window exponents must be >= 1: '" + text + "'");
        }
    } else {
        spec.exponents = false;
        spec.y = parse_count(parts[0]);
        spec.z = parse_count(parts[1]);
        if (spec.y < 2) {
            throw ConfigError("window: y must be >= 2");
        }
    }
    return spec;
}

std::vector<std::uint64_t> parse_x_list(const std::string& text)
{
    std::vector<std::uint64_t> xs;
    for (const auto& token : split(text, ',')) {
        const std::uint64_t x = parse_count(token);
        if (x < 1) {
            throw ConfigError("x must be >= 1");
        }
        xs.push_back(x);
    }
    if (xs.empty()) {
        throw ConfigError("empty x list");
    }
    return xs;
}

std::vector<std::size_t> parse_index_list(const std::string& text)
{
    std::vector<std::size_t> out;
    const auto range = text.find("..");
    if (range != std::string::npos) {
        const std::uint64_t a = parse_count(text.substr(0, range));
        const std::uint64_t b = parse_count(text.substr(range + 2));
        if (b < a || b - a > 10'000) {
            throw ConfigError("bad convergent range '" + text + "'");
        }
        for (std::uint64_t s = a; s <= b; ++s) {
            out.push_back(static_cast<std::size_t>(s));
        }
        return out;
    }
    for (const auto& token : split(text, ',')) {
        out.push_back(static_cast<std::size_t>(parse_count(token)));
    }
    if (out.empty()) {
        throw ConfigError("empty convergent list");
    }
    return out;
}

std::vector<GridPoint> resolve_grid(const ExperimentConfig& config)
{
    if (config.xs.empty() && config.convergent_indices.empty()) {
        throw ConfigError("no x values: give --x or --convergents");
    }
    const auto* surd = std::get_if<QuadraticSurd>(&config.alpha);
    std::optional<ContinuedFraction> cf;
    if (surd != nullptr) {
        cf = cf_expand(*surd);
    }

    std::vector<GridPoint> grid;
    if (!config.convergent_indices.empty()) {
        if (!cf) {
            throw ConfigError("--convergents needs a quadratic irrational alpha");
        }
        const std::size_t top = *std::max_element(config.convergent_indices.begin(),
                                                  config.convergent_indices.end());
        const auto convs = convergents(*cf, top + 1);
        for (const std::size_t s : config.convergent_indices) {
            const BigInt& q = convs[s].q;
            grid.push_back({to_u64(x_from_q(q), "x"), to_u64(q, "q")});
        }
    }
    for (const std::uint64_t x : config.xs) {
        std::uint64_t q = 0;
        if (cf) {
            q = to_u64(select_denominator(x, *cf).q, "q");
        } else {
            q = to_u64(std::get<Rational>(config.alpha).den, "q");
        }
        grid.push_back({x, q});
    }
    return grid;
}

double theorem_delta(const ExperimentConfig& config, std::uint64_t x)
{
    if (config.delta_override) {
        return *config.delta_override;
    }
    return std::pow(static_cast<double>(x), -0.25 + config.epsilon);
}

std::size_t resolve_degree(const ExperimentConfig& config, std::uint64_t x)
{
    if (config.degree) {
        if (*config.degree < 1) {
            throw ConfigError("L must be >= 1");
        }
        return *config.degree;
    }
    return static_cast<std::size_t>(std::clamp<std::uint64_t>(x, 1, 100'000));
}

void validate_theorem_point(const ExperimentConfig& config, std::uint64_t x)
{
    if (!(config.epsilon > 0.0)) {
        throw ConfigError("eps must be positive");
    }
    const SmoothnessWindow w = config.window.resolve(x);
    const std::string where = " at x = " + std::to_string(x) + " (window [" + std::to_string(w.y) + ", "
                              + std::to_string(w.z) + "])";
    if (w.y < 2 || static_cast<unsigned __int128>(w.y) * w.y >= x) {
        throw ConfigError("theorem needs 2 <= y < x^(1/2)" + where);
    }
    if (!(w.y < w.z && w.z <= x)) {
        throw ConfigError("theorem needs y < z <= x" + where);
    }
    const double delta = theorem_delta(config, x);
    if (!(delta > 0.0 && delta < 0.5)) {
        throw ConfigError("delta = " + std::to_string(delta) + " is not below 1/2" + where
                          + "; x is too small for this eps");
    }
}

ReportFormat parse_format(const std::string& text)
{
    if (text == "csv") {
        return ReportFormat::csv;
    }
    if (text == "json") {
        return ReportFormat::json;
    }
    throw ConfigError("format must be csv or json");
}

PrimeRegion parse_region(const std::string& text)
{
    if (text == "low") {
        return PrimeRegion::low;
    }
    if (text == "mid") {
        return PrimeRegion::mid;
    }
    if (text == "high") {
        return PrimeRegion::high;
    }
    throw ConfigError("region must be low, mid or high");
}

std::string to_string(PrimeRegion region)
{
    switch (region) {
    case PrimeRegion::low:
        return "low";
    case PrimeRegion::mid:
        return "mid";
    case PrimeRegion::high:
        return "high";
    }
    return "?";
}

std::string to_string(MemberSet set)
{
    return set == MemberSet::all ? "B" : "A";
}

} // namespace smoothdist
