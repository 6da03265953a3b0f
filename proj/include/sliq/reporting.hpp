#pragma once

#include <string>

#include "sliq/config.hpp"
#include "sliq/verify.hpp"

namespace sliq {

// Simulates one common impact path (path_index 0) and writes one trajectory
// CSV per strategy plus a units sidecar. Columns: t,a,b,S,Q,X,nu at 17
// significant digits. Returns the written file names.
std::vector<std::string> cmd_path(const ExperimentConfig& cfg,
                                  const std::string& out_dir);

// Runs the batch experiment and writes montecarlo_summary.json plus the
// untrimmed per-path CSV. Returns the summary.
PerformanceSummary cmd_montecarlo(const ExperimentConfig& cfg,
                                  const std::string& out_dir);

// Runs the oracle suite at the config's parameters and writes
// verify_report.json. Returns the reports; the caller maps failures to a
// nonzero exit status.
std::vector<ResidualReport> cmd_verify(const ExperimentConfig& cfg,
                                       const std::string& out_dir);

std::string summary_to_json(const PerformanceSummary& summary);
std::string reports_to_json(const std::vector<ResidualReport>& reports);

}  // namespace sliq
