#include "smoothdist/errors.hpp"
#include "smoothdist/experiments.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace smoothdist {

namespace {

std::string format_real(double v)
{
    if (!std::isfinite(v)) {
        return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"') {
            out += '"';
        }
        out += ch;
    }
    return out + "\"";
}

std::string render(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                return format_real(v);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return csv_field(v);
            } else {
                return std::to_string(v);
            }
        },
        cell);
}

nlohmann::ordered_json to_json(const Cell& cell)
{
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
                if (!std::isfinite(v)) {
                    return nullptr;
                }
                // same 12 significant digits as the CSV
                return std::stod(format_real(v));
            } else {
                return v;
            }
        },
        cell);
}

} // namespace

Table theorem_table(const std::vector<TheoremRow>& rows)
{
    Table t;
    t.columns = {"x", "q", "delta", "psi", "observed", "boundary", "main_term", "error", "error_exponent",
                 "budget", "C", "kappa"};
    for (const TheoremRow& r : rows) {
        t.rows.push_back({r.x, r.q, r.delta, r.psi, r.observed, r.boundary, r.main_term, r.error,
                          r.error_exponent, r.budget, r.C, r.kappa});
    }
    return t;
}

Table decomposition_table(const std::vector<DecompositionReport>& reports)
{
    Table t;
    t.columns = {"kind", "x", "y", "z", "delta", "residual", "residual_bound", "holds"};
    if (reports.empty()) {
        return t;
    }
    for (const auto& [name, value] : reports.front().terms) {
        t.columns.push_back(name);
    }
    for (const DecompositionReport& r : reports) {
        if (r.terms.size() != reports.front().terms.size()) {
            throw PreconditionError("decomposition_table: reports of different kinds");
        }
        std::vector<Cell> row{r.kind,     r.x,        r.window.y,       r.window.z,
                              r.delta,    r.residual, r.residual_bound, std::uint64_t{r.holds ? 1u : 0u}};
        for (std::size_t i = 0; i < r.terms.size(); ++i) {
            if (r.terms[i].first != reports.front().terms[i].first) {
                throw PreconditionError("decomposition_table: reports of different kinds");
            }
            row.emplace_back(r.terms[i].second);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table bound_table(const std::vector<BoundReport>& reports)
{
    Table t;
    t.columns = {"kind", "x", "M", "q", "delta", "L", "kappa", "lhs_abs", "predictor", "ratio"};
    for (const BoundReport& r : reports) {
        t.rows.push_back({r.kind, r.x, r.m_base, r.q, r.delta, static_cast<std::uint64_t>(r.degree), r.kappa,
                          r.lhs_abs, r.predictor, r.ratio});
    }
    return t;
}

Table lower_bound_table(const std::vector<LowerBoundReport>& reports)
{
    Table t;
    t.columns = {"x", "q", "eps", "threshold", "smooth_limit", "a_count", "count", "boundary", "exponent",
                 "target"};
    for (const LowerBoundReport& r : reports) {
        t.rows.push_back({r.x, r.q, r.epsilon, r.threshold, r.smooth_limit, r.a_count, r.count, r.boundary,
                          r.exponent, r.target});
    }
    return t;
}

void write_report(const Table& table, ReportFormat format, std::ostream& out)
{
    if (table.rows.empty()) {
        throw PreconditionError("emit_report: no rows");
    }
    if (format == ReportFormat::csv) {
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            out << (i ? "," : "") << csv_field(table.columns[i]);
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << render(row[i]);
            }
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            obj[table.columns[i]] = to_json(row[i]);
        }
        doc.push_back(std::move(obj));
    }
    out << doc.dump(2) << '\n';
}

void emit_report(const Table& table, ReportFormat format, const std::string& path)
{
    if (path.empty() || path == "-") {
        write_report(table, format, std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw ResourceError("cannot open report file '" + path + "'");
    }
    write_report(table, format, file);
    file.close();
    if (!file) {
        throw ResourceError("failed writing report file '" + path + "'");
    }
}

} // namespace smoothdist
