// capeig: solve cap spectra, evaluate universal bounds, verify and compare.
//
// Exit codes: 0 ok, 1 violation found by verify/compare, 2 usage or
// validation error, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "capeig/io.hpp"

namespace {

using namespace capeig;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kNumerical = 3;

std::vector<std::string> split(const std::string& list) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto end = std::min(list.find(',', start), list.size());
        if (end > start)
            out.push_back(list.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::optional<int> parse_auto(const std::string& v, const char* what) {
    if (v == "auto")
        return std::nullopt;
    const auto list = io::parse_int_list(v);
    if (list.size() != 1)
        throw Error(ErrorKind::InvalidConfig, std::string("bad ") + what + " '" + v + "'");
    return list.front();
}

std::vector<BoundFamily> parse_families(const std::string& list, double delta) {
    std::vector<BoundFamily> out;
    for (const auto& name : split(list)) {
        BoundFamily f{parse_family(name)};
        f.delta = delta;
        out.push_back(f);
    }
    if (out.empty())
        throw Error(ErrorKind::InvalidConfig, "empty family list");
    return out;
}

Spectrum load_spectrum(const std::string& path) {
    return io::spectrum_from_json(io::read_file(path));
}

struct SolveArgs {
    int n = 2;
    int p = 1;
    std::string theta0 = "pi/2";
    std::string problem = "clamped";
    int count = 8;
    int basis = 32;
    std::string modes = "auto";
    std::string quad = "auto";
    std::string out;
    std::string basis_list;
};

SolverConfig make_config(const SolveArgs& a) {
    SolverConfig cfg;
    cfg.n = a.n;
    cfg.p = a.p;
    cfg.theta0 = io::parse_angle(a.theta0);
    cfg.problem = parse_problem(a.problem);
    cfg.count = a.count;
    cfg.basis_size = a.basis;
    cfg.mode_cap = parse_auto(a.modes, "--modes");
    cfg.quad_size = parse_auto(a.quad, "--quad");
    cfg.validate();
    return cfg;
}

int run_solve(const SolveArgs& a) {
    const auto spectrum = solve_spectrum(make_config(a));
    io::write_file(a.out, io::spectrum_to_json(spectrum));
    std::printf("%-4s %-24s %-4s %-6s %-12s %s\n", "#", "value", "l", "radial", "multiplicity", "convergence");
    for (std::size_t i = 0; i < spectrum.entries.size(); ++i) {
        const auto& e = spectrum.entries[i];
        std::printf("%-4zu %-24s %-4d %-6d %-12llu %.2e\n", i + 1, io::format_real(e.value).c_str(), e.l,
                    e.radial_index, static_cast<unsigned long long>(e.multiplicity), e.convergence);
    }
    if (spectrum.below_buckling_guard())
        std::cerr << "warning: Lambda_1 <= n - 2; sphere buckling bounds will refuse this spectrum\n";
    return kOk;
}

int run_bounds(const std::string& in, const std::string& families, double delta, const std::string& out) {
    const auto seq = load_spectrum(in).sequence();
    const auto list = parse_families(families, delta);
    for (const auto& f : list)
        check_compatibility(f, seq);
    std::vector<io::BoundRow> rows;
    for (std::size_t k = 1; k <= seq.size(); ++k) {
        const auto prefix = seq.prefix(k);
        for (const auto& f : list) {
            io::BoundRow row{k, std::nullopt, evaluate_bound(f, prefix), std::nullopt};
            if (k < seq.size()) {
                row.actual = seq.values[k];
                row.result.margin = row.result.bound - *row.actual;
                row.holds = *row.result.margin >= -1e-8 * *row.actual;
            }
            std::printf("k=%-3zu %-12s bound %s\n", k, std::string(family_name(f.kind)).c_str(),
                        io::format_real(row.result.bound).c_str());
            rows.push_back(row);
        }
    }
    io::write_file(out, io::bounds_csv(rows));
    return kOk;
}

int run_verify(const std::string& in, const std::string& families, double delta, const std::string& out,
               std::string summary) {
    const auto spectrum = load_spectrum(in);
    std::vector<BoundFamily> list;
    if (families.empty()) {
        for (auto kind : default_sphere_families(spectrum.config.problem, spectrum.config.p))
            list.push_back({kind});
    } else {
        list = parse_families(families, delta);
    }
    const auto report = check_spectrum(spectrum, list);
    io::write_report(report, out, io::ReportFormat::Csv);
    if (summary.empty())
        summary = out + ".summary.json";
    io::write_report(report, summary, io::ReportFormat::Json);
    for (const auto& r : report.rows)
        std::printf("k=%-3zu %-12s bound %-24s actual %-24s %s\n", r.k,
                    std::string(family_name(r.result.family.kind)).c_str(), io::format_real(r.result.bound).c_str(),
                    io::format_real(r.actual).c_str(), r.holds ? "holds" : "VIOLATED");
    std::printf("violations: %zu\n", report.summary.violations);
    return report.summary.violations == 0 ? kOk : kViolation;
}

int run_compare(const std::string& in, const std::string& grid, const std::string& out) {
    const auto seq = load_spectrum(in).sequence();
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (start <= grid.size()) {
        const auto end = std::min(grid.find(':', start), grid.size());
        fields.push_back(grid.substr(start, end - start));
        start = end + 1;
    }
    if (fields.size() != 3)
        throw Error(ErrorKind::InvalidConfig, "--delta-grid expects LO:HI:COUNT");
    const auto count = io::parse_int_list(fields[2]);
    const auto deltas = log_grid(io::parse_angle(fields[0]), io::parse_angle(fields[1]), count.front());
    const auto report = compare_sharpness(seq, deltas);
    io::write_file(out, io::sharpness_csv(report));
    for (const auto& r : report.rows)
        std::printf("k=%-3zu thm %-24s hlc %-24s wangxia-opt %-24s %s\n", r.k, io::format_real(r.thm).c_str(),
                    io::format_real(r.hlc).c_str(), io::format_real(r.wang_xia_opt).c_str(),
                    r.equal && r.dominated ? "ok" : "VIOLATED");
    return report.violations == 0 ? kOk : kViolation;
}

int run_convergence(const SolveArgs& a) {
    const auto sizes = io::parse_int_list(a.basis_list);
    const auto table = convergence_study(make_config(a), sizes);
    io::write_file(a.out, io::convergence_csv(table));
    std::cout << io::convergence_csv(table);
    return kOk;
}

void add_solver_options(CLI::App* cmd, SolveArgs& a) {
    cmd->add_option("--n", a.n, "sphere dimension")->required();
    cmd->add_option("--p", a.p, "operator order")->required();
    cmd->add_option("--theta0", a.theta0, "cap radius in radians (or pi/K)")->required();
    cmd->add_option("--problem", a.problem, "clamped | buckling")->required();
    cmd->add_option("--out", a.out, "output file")->required();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Poly-Laplacian spectra on spherical caps and universal eigenvalue bounds"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve = app.add_subcommand("solve", "compute a spectrum and write it as JSON");
    add_solver_options(solve, solve_args);
    solve->add_option("--count", solve_args.count, "eigenvalues to report")->required();
    solve->add_option("--basis", solve_args.basis, "radial basis size");
    solve->add_option("--modes", solve_args.modes, "angular mode cap L or auto");
    solve->add_option("--quad", solve_args.quad, "quadrature size or auto");

    std::string in, families, out, summary, grid = "1e-3:1e3:32";
    double delta = 1.0;
    auto* bounds = app.add_subcommand("bounds", "evaluate bound families on a spectrum file");
    bounds->add_option("--in", in)->required();
    bounds->add_option("--family", families, "comma-separated family list")->required();
    bounds->add_option("--delta", delta, "Wang-Xia parameter");
    bounds->add_option("--out", out)->required();

    auto* verify = app.add_subcommand("verify", "check bounds against the spectrum itself");
    verify->add_option("--in", in)->required();
    verify->add_option("--families", families, "comma-separated family list");
    verify->add_option("--delta", delta, "Wang-Xia parameter");
    verify->add_option("--out", out)->required();
    verify->add_option("--summary", summary, "JSON summary path (default OUT.summary.json)");

    auto* compare = app.add_subcommand("compare", "p = 2 sharpness comparison");
    compare->add_option("--in", in)->required();
    compare->add_option("--delta-grid", grid, "LO:HI:COUNT log grid");
    compare->add_option("--out", out)->required();

    SolveArgs conv_args;
    auto* conv = app.add_subcommand("convergence", "Rayleigh-Ritz convergence study");
    add_solver_options(conv, conv_args);
    conv->add_option("--basis-list", conv_args.basis_list, "ascending basis sizes, e.g. 8,16,32")->required();
    conv->add_option("--count", conv_args.count, "eigenvalues to track");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*solve)
            return run_solve(solve_args);
        if (*bounds)
            return run_bounds(in, families, delta, out);
        if (*verify)
            return run_verify(in, families, delta, out, summary);
        if (*compare)
            return run_compare(in, grid, out);
        if (*conv)
            return run_convergence(conv_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return is_numerical(e.kind()) ? kNumerical : kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
