#pragma once

#include <iosfwd>

#include "rankdiff/config.hpp"

namespace rankdiff {

// Exit-code contract shared by all commands:
//   0 success, 2 config/validation error, 3 Laplace-domain error,
//   4 numerical or statistical failure.
struct RunOptions {
  bool strict = false;
  int workers = 1;
};

int cmd_validate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_laplace_table(const ExperimentConfig& cfg, const RunOptions& opt,
                      std::ostream& log);
int cmd_chaoticity_scan(const ExperimentConfig& cfg, const RunOptions& opt,
                        std::ostream& log);
int cmd_sample(const ExperimentConfig& cfg, const RunOptions& opt,
               std::ostream& log);
int cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opt,
                 std::ostream& log);
int cmd_wasserstein_report(const ExperimentConfig& cfg, const RunOptions& opt,
                           std::ostream& log);
int cmd_selfcheck(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace rankdiff
