#pragma once

#include "baselines.hpp"
#include "config.hpp"
#include "eagp.hpp"
#include "energy.hpp"
#include "kernel.hpp"
#include "metrics.hpp"
#include "protocol.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "scenario.hpp"
#include "topology.hpp"
#include "types.hpp"
