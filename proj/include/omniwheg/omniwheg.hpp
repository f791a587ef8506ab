#pragma once

#include "omniwheg/actions.hpp"
#include "omniwheg/cli.hpp"
#include "omniwheg/climb_model.hpp"
#include "omniwheg/errors.hpp"
#include "omniwheg/executor.hpp"
#include "omniwheg/geometry.hpp"
#include "omniwheg/kinematics.hpp"
#include "omniwheg/log_analysis.hpp"
#include "omniwheg/planner.hpp"
#include "omniwheg/scenario.hpp"
#include "omniwheg/simulator.hpp"
#include "omniwheg/statics.hpp"
