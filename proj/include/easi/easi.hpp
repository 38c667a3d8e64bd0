#pragma once

// Umbrella for the core library: streaming adaptive source separation, the
// synthetic signal model, separation metrics, and the pipeline throughput
// model. The benchmark-harness layer lives under easi/bench/ and is included
// by the tools that need it.

#include "easi/linalg.hpp"
#include "easi/metrics.hpp"
#include "easi/pipeline.hpp"
#include "easi/rng.hpp"
#include "easi/separator.hpp"
#include "easi/signal.hpp"
