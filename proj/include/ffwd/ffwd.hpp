#pragma once

#include "container.hpp"
#include "gapfill.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "profile.hpp"
#include "report.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "scenario_config.hpp"
#include "smoother.hpp"
#include "synth.hpp"
#include "types.hpp"
