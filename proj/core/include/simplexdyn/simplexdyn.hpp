#pragma once

#include "simplexdyn/aitchison.hpp"
#include "simplexdyn/errors.hpp"
#include "simplexdyn/jko.hpp"
#include "simplexdyn/payoff.hpp"
#include "simplexdyn/replicator.hpp"
#include "simplexdyn/sde.hpp"
#include "simplexdyn/seeding.hpp"
#include "simplexdyn/stats.hpp"
