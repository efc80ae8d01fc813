#pragma once

// Core library: channel models, link simulation, detectors, Monte-Carlo
// harness, presets and CSV output. The YAML loader (scenario_file.hpp) and
// the command line (cli.hpp) are included separately since they pull in
// yaml-cpp and CLI11.

#include "ook_bcc/csv.hpp"
#include "ook_bcc/detectors.hpp"
#include "ook_bcc/distributions.hpp"
#include "ook_bcc/errors.hpp"
#include "ook_bcc/experiment.hpp"
#include "ook_bcc/link.hpp"
#include "ook_bcc/montecarlo.hpp"
#include "ook_bcc/random.hpp"
