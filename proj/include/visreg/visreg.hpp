#pragma once

#include "visreg/config.hpp"
#include "visreg/diagnostics.hpp"
#include "visreg/eos.hpp"
#include "visreg/errors.hpp"
#include "visreg/grid.hpp"
#include "visreg/initial_conditions.hpp"
#include "visreg/io.hpp"
#include "visreg/linalg.hpp"
#include "visreg/regularization.hpp"
#include "visreg/scenario.hpp"
#include "visreg/solver.hpp"
