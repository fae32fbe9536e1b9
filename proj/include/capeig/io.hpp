#pragma once

// File formats: spectrum JSON ("spectrum/1"), bound report CSV, JSON summaries.
// Reals are written with 17 significant digits, '.' separator, '\n' endings.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "capeig/spectral.hpp"
#include "capeig/verify.hpp"

namespace capeig::io {

std::string format_real(double value);

/// Radians as a plain number, or a multiple of pi: "pi", "pi/2", "2pi/3", "2*pi/3".
double parse_angle(std::string_view text);
/// "8,16,32" -> {8, 16, 32}
std::vector<int> parse_int_list(std::string_view text);

std::string spectrum_to_json(const Spectrum& spectrum);
/// Validates the schema before touching any field; throws SchemaError.
Spectrum spectrum_from_json(std::string_view text);

struct BoundRow {
    std::size_t k = 0;
    std::optional<double> actual;
    BoundResult result;
    std::optional<bool> holds;
};

inline constexpr std::string_view kReportHeader = "k,actual,family,bound,margin,holds,aux_S,aux_T,aux_delta";

std::vector<BoundRow> bound_rows(const VerificationReport& report);
std::string bounds_csv(const std::vector<BoundRow>& rows);
std::string summary_json(const VerificationReport& report);
std::string sharpness_csv(const SharpnessReport& report);
std::string sharpness_summary_json(const SharpnessReport& report);
std::string convergence_csv(const ConvergenceTable& table);

enum class ReportFormat { Csv, Json };

void write_report(const VerificationReport& report, const std::filesystem::path& path, ReportFormat format);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

} // namespace capeig::io
