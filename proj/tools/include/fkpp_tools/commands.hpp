#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fkpp/convergence.hpp"
#include "fkpp/ensemble.hpp"
#include "fkpp/etd_solver.hpp"
#include "fkpp_tools/config.hpp"

namespace fkpp::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kUsageError = 2 };

/// Writes the x, t, mean[, mc_standard_error] surface, rows ordered by time level then node.
void write_mean_csv(const std::string& path, const Grid1D& grid, const TimeMesh& mesh, const EnsembleStats& stats);
void write_std_csv(const std::string& path, const Grid1D& grid, const TimeMesh& mesh, const EnsembleStats& stats);
void write_refinement_csv(const std::string& path, const std::vector<RefinementRow>& rows);

/// 12 significant digits, "%.12g".
std::string format_number(double v);

std::string describe_model(const Model& model);
nlohmann::json report_json(const StepSizeReport& report);

int cmd_check(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const RunConfig& config, std::ostream& out, std::ostream& err);
/// `tolerance` bounds both the max mean error and the max std error.
int cmd_validate(const RunConfig& config, double tolerance, std::ostream& out, std::ostream& err);
/// `kind` is "spatial", "temporal" or "both".
int cmd_converge(const RunConfig& config, int levels, const std::string& kind, std::ostream& out,
                 std::ostream& err);

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fkpp::cli
