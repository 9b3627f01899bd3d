#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "shiftgate/experiments.hpp"

namespace shiftgate {

enum class ReportFormat { kCsv, kSvg };

struct SvgOptions {
  int width = 800;
  int height = 480;
  /// Draws vertical markers at -safe_shift and +safe_shift when > 0.
  int safe_shift = 40;
  std::string title;
};

// CSV writers use LF line endings, a header row and shortest round-trip
// float formatting; infinite values are written as `inf`.

/// `shift,space,hi,kl,db`
void write_sweep_csv(std::ostream& out, const std::vector<SweepResult>& results);
std::vector<SweepResult> read_sweep_csv(std::istream& in);

/// `ID1,ID2,<shift>...`
void write_pair_table_csv(std::ostream& out, const PairTable& table);
/// Metric and space are not carried by the CSV and must be supplied.
PairTable read_pair_table_csv(std::istream& in, Metric metric, ColorSpace space);
/// Fixed-width text rendering rounded to two decimals.
std::string format_pair_table(const PairTable& table);

/// `frame,truth,prediction,residual`
void write_residuals_csv(std::ostream& out, const std::vector<Residual>& residuals);
std::vector<Residual> read_residuals_csv(std::istream& in);

void write_sweep_svg(std::ostream& out, const std::vector<SweepResult>& results,
                     const SvgOptions& options = {});
void write_pair_table_svg(std::ostream& out, const PairTable& table,
                          const SvgOptions& options = {});
void write_residuals_svg(std::ostream& out, const std::vector<Residual>& residuals,
                         const SvgOptions& options = {});

/// Writes a report file. Throws kEmptyResults for empty input and
/// kUnwritablePath when the file cannot be created.
void emit_report(const std::vector<SweepResult>& results, ReportFormat format,
                 const std::filesystem::path& path, const SvgOptions& options = {});
void emit_report(const PairTable& table, ReportFormat format,
                 const std::filesystem::path& path, const SvgOptions& options = {});
void emit_report(const ErrorEvaluation& evaluation, ReportFormat format,
                 const std::filesystem::path& path, const SvgOptions& options = {});

}  // namespace shiftgate
