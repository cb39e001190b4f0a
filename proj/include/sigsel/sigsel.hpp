#pragma once

#include "sigsel/baselines.hpp"
#include "sigsel/benchmark.hpp"
#include "sigsel/config.hpp"
#include "sigsel/io.hpp"
#include "sigsel/mcmc.hpp"
#include "sigsel/parallel.hpp"
#include "sigsel/plot.hpp"
#include "sigsel/rng.hpp"
#include "sigsel/score_target.hpp"
#include "sigsel/sigkernel.hpp"
#include "sigsel/transforms.hpp"
#include "sigsel/wf.hpp"
