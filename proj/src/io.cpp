#include "capeig/io.hpp"

#include <cmath>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace capeig::io {

using nlohmann::json;

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

double parse_number(std::string_view text, std::string_view context) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw Error(ErrorKind::InvalidConfig, "cannot parse " + std::string(context) + " '" + s + "'");
    return v;
}

} // namespace

double parse_angle(std::string_view text) {
    const auto pos = text.find("pi");
    if (pos == std::string_view::npos)
        return parse_number(text, "angle");
    std::string_view head = text.substr(0, pos);
    std::string_view tail = text.substr(pos + 2);
    if (!head.empty() && head.back() == '*')
        head.remove_suffix(1);
    const double factor = head.empty() ? 1.0 : parse_number(head, "angle factor");
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/')
            throw Error(ErrorKind::InvalidConfig, "cannot parse angle '" + std::string(text) + "'");
        divisor = parse_number(tail.substr(1), "angle divisor");
    }
    return factor * M_PI / divisor;
}

std::vector<int> parse_int_list(std::string_view text) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const double v = parse_number(text.substr(start, end - start), "integer list item");
        if (v != std::floor(v))
            throw Error(ErrorKind::InvalidConfig, "expected integers in '" + std::string(text) + "'");
        out.push_back(int(v));
        start = end + 1;
    }
    return out;
}

namespace {

std::string json_real(double value) { return std::isfinite(value) ? format_real(value) : "null"; }

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

[[noreturn]] void schema_fail(const std::string& what) { throw Error(ErrorKind::SchemaError, what); }

const json& require(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end())
        schema_fail(std::string("missing field '") + key + "'");
    return *it;
}

long long require_int(const json& obj, const char* key, long long min) {
    const json& v = require(obj, key);
    if (!v.is_number_integer())
        schema_fail(std::string("field '") + key + "' must be an integer");
    const auto x = v.get<long long>();
    if (x < min)
        schema_fail(std::string("field '") + key + "' below " + std::to_string(min));
    return x;
}

double require_real(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number())
        schema_fail(std::string("field '") + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        schema_fail(std::string("field '") + key + "' must be finite");
    return x;
}

} // namespace

std::string spectrum_to_json(const Spectrum& s) {
    std::ostringstream out;
    out << "{\"schema\":\"spectrum/1\",\"n\":" << s.config.n << ",\"p\":" << s.config.p
        << ",\"theta0\":" << json_real(s.config.theta0) << ",\"problem\":" << json_string(to_string(s.config.problem))
        << ",\"entries\":[";
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
        const auto& e = s.entries[i];
        out << (i ? "," : "") << "{\"value\":" << json_real(e.value) << ",\"l\":" << e.l
            << ",\"radial_index\":" << e.radial_index << ",\"multiplicity\":" << e.multiplicity << "}";
    }
    out << "],\"meta\":{\"basis_size\":" << s.config.basis_size << ",\"l_max\":" << s.l_max
        << ",\"quad_size\":" << s.quad_size << ",\"count\":" << s.config.count << ",\"convergence\":[";
    for (std::size_t i = 0; i < s.entries.size(); ++i)
        out << (i ? "," : "") << json_real(s.entries[i].convergence);
    out << "]}}\n";
    return out.str();
}

Spectrum spectrum_from_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::exception& e) {
        schema_fail(std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object())
        schema_fail("top level must be an object");
    const json& tag = require(doc, "schema");
    if (!tag.is_string() || tag.get<std::string>() != "spectrum/1")
        schema_fail("schema tag must be \"spectrum/1\"");

    Spectrum s;
    s.config.n = int(require_int(doc, "n", 2));
    s.config.p = int(require_int(doc, "p", 1));
    s.config.theta0 = require_real(doc, "theta0");
    if (!(s.config.theta0 > 0 && s.config.theta0 < M_PI))
        schema_fail("theta0 must lie in (0, pi)");
    const json& prob = require(doc, "problem");
    if (!prob.is_string() || (prob != "clamped" && prob != "buckling"))
        schema_fail("problem must be \"clamped\" or \"buckling\"");
    s.config.problem = parse_problem(prob.get<std::string>());
    if (s.config.problem == Problem::Buckling && s.config.p < 2)
        schema_fail("buckling spectra need p >= 2");

    const json& entries = require(doc, "entries");
    if (!entries.is_array() || entries.empty())
        schema_fail("entries must be a non-empty array");
    std::uint64_t total = 0;
    for (const json& e : entries) {
        if (!e.is_object())
            schema_fail("each entry must be an object");
        SpectrumEntry entry;
        entry.value = require_real(e, "value");
        if (!(entry.value > 0))
            schema_fail("entry values must be positive");
        entry.l = int(require_int(e, "l", 0));
        entry.radial_index = int(require_int(e, "radial_index", 0));
        entry.multiplicity = std::uint64_t(require_int(e, "multiplicity", 1));
        if (!s.entries.empty() && entry.value < s.entries.back().value)
            schema_fail("entries must be ascending by value");
        total += entry.multiplicity;
        s.entries.push_back(entry);
    }
    s.config.count = int(total);

    if (auto it = doc.find("meta"); it != doc.end()) {
        const json& meta = *it;
        if (!meta.is_object())
            schema_fail("meta must be an object");
        if (meta.contains("basis_size"))
            s.config.basis_size = int(require_int(meta, "basis_size", 1));
        if (meta.contains("l_max"))
            s.l_max = int(require_int(meta, "l_max", 0));
        if (meta.contains("quad_size"))
            s.quad_size = int(require_int(meta, "quad_size", 0));
        if (meta.contains("count")) {
            const auto count = require_int(meta, "count", 1);
            if (std::uint64_t(count) > total)
                schema_fail("meta.count exceeds the expanded entry count");
            s.config.count = int(count);
        }
        if (meta.contains("convergence")) {
            const json& conv = meta["convergence"];
            if (!conv.is_array() || conv.size() != s.entries.size())
                schema_fail("meta.convergence must have one number per entry");
            for (std::size_t i = 0; i < conv.size(); ++i) {
                if (!conv[i].is_number())
                    schema_fail("meta.convergence entries must be numbers");
                s.entries[i].convergence = conv[i].get<double>();
            }
        }
    }
    return s;
}

std::vector<BoundRow> bound_rows(const VerificationReport& report) {
    std::vector<BoundRow> rows;
    for (const auto& r : report.rows)
        rows.push_back({r.k, r.actual, r.result, r.holds});
    return rows;
}

std::string bounds_csv(const std::vector<BoundRow>& rows) {
    std::ostringstream out;
    out << kReportHeader << '\n';
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    for (const auto& r : rows) {
        std::optional<double> margin = r.result.margin;
        if (!margin && r.actual)
            margin = r.result.bound - *r.actual;
        std::optional<double> delta = r.result.delta_star;
        if (!delta && r.result.family.kind == FamilyKind::WangXia)
            delta = r.result.family.delta;
        out << r.k << ',' << opt(r.actual) << ',' << family_name(r.result.family.kind) << ','
            << format_real(r.result.bound) << ',' << opt(margin) << ','
            << (r.holds ? (*r.holds ? "true" : "false") : "") << ',' << opt(r.result.S) << ','
            << opt(r.result.T) << ',' << opt(delta) << '\n';
    }
    return out.str();
}

std::string summary_json(const VerificationReport& report) {
    std::ostringstream out;
    out << "{\"schema\":\"verify-summary/1\",\"n\":" << report.n << ",\"p\":" << report.p
        << ",\"problem\":" << json_string(to_string(report.problem))
        << ",\"theta0\":" << (report.theta0 ? json_real(*report.theta0) : "null") << ",\"families\":[";
    for (std::size_t i = 0; i < report.families.size(); ++i)
        out << (i ? "," : "") << json_string(family_name(report.families[i]));
    out << "],\"rows\":" << report.rows.size() << ",\"min_margin\":" << json_real(report.summary.min_margin)
        << ",\"violations\":" << report.summary.violations
        << ",\"converged\":" << (report.summary.converged ? "true" : "false") << ",\"tightest\":{";
    bool first = true;
    for (const auto& [kind, count] : report.summary.tightest) {
        out << (first ? "" : ",") << json_string(family_name(kind)) << ':' << count;
        first = false;
    }
    out << "}}\n";
    return out.str();
}

std::string sharpness_csv(const SharpnessReport& report) {
    std::ostringstream out;
    out << "k,thm,hlc,wangxia_opt,delta_star,thm_hlc_gap,worst_grid_excess,equal,dominated\n";
    for (const auto& r : report.rows)
        out << r.k << ',' << format_real(r.thm) << ',' << format_real(r.hlc) << ','
            << format_real(r.wang_xia_opt) << ',' << format_real(r.delta_star) << ','
            << format_real(r.thm_hlc_gap) << ',' << format_real(r.worst_grid_excess) << ','
            << (r.equal ? "true" : "false") << ',' << (r.dominated ? "true" : "false") << '\n';
    return out.str();
}

std::string sharpness_summary_json(const SharpnessReport& report) {
    std::ostringstream out;
    out << "{\"schema\":\"compare-summary/1\",\"rows\":" << report.rows.size()
        << ",\"grid_points\":" << report.delta_grid.size() << ",\"violations\":" << report.violations
        << "}\n";
    return out.str();
}

std::string convergence_csv(const ConvergenceTable& table) {
    std::ostringstream out;
    out << "index";
    for (int n : table.basis_sizes)
        out << ",N_" << n;
    out << ",estimate\n";
    for (std::size_t k = 0; k < table.values.size(); ++k) {
        out << (k + 1);
        for (double v : table.values[k])
            out << ',' << format_real(v);
        out << ',' << format_real(table.estimates[k]) << '\n';
    }
    return out.str();
}

void write_report(const VerificationReport& report, const std::filesystem::path& path, ReportFormat format) {
    write_file(path, format == ReportFormat::Csv ? bounds_csv(bound_rows(report)) : summary_json(report));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out)
        throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

} // namespace capeig::io
