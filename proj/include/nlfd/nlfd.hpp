#pragma once

#include "nlfd/grid.hpp"
#include "nlfd/linalg.hpp"
#include "nlfd/operators.hpp"
#include "nlfd/properties.hpp"
#include "nlfd/problems.hpp"
#include "nlfd/assembly.hpp"
#include "nlfd/solvers.hpp"
#include "nlfd/study.hpp"
#include "nlfd/presets.hpp"
