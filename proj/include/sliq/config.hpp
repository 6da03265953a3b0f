#pragma once

#include <string>
#include <vector>

#include "sliq/montecarlo.hpp"

namespace sliq {

// Everything a run needs, parsed from one JSON config file.
struct ExperimentConfig {
    MarketModel model;
    PenaltyParams penalties;
    SimConfig sim;
    std::size_t paths = 0;  // M
    InitState init;
    std::vector<StrategyKind> strategies;
    std::vector<std::string> warnings;  // e.g. Feller violations
};

// Parses and fully validates a config file. Unknown keys are rejected.
// Throws ParseError (with line/column) or ValidationError (with field path).
ExperimentConfig load_config(const std::string& path);

}  // namespace sliq
