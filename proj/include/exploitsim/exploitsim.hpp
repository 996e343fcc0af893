#pragma once

#include "exploitsim/agents.hpp"
#include "exploitsim/config.hpp"
#include "exploitsim/environment.hpp"
#include "exploitsim/inference.hpp"
#include "exploitsim/model.hpp"
#include "exploitsim/random.hpp"
#include "exploitsim/report.hpp"
#include "exploitsim/scenario.hpp"
#include "exploitsim/simulator.hpp"
