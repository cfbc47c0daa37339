#pragma once

#include "srk/conditions.hpp"
#include "srk/errors.hpp"
#include "srk/forests.hpp"
#include "srk/harness.hpp"
#include "srk/matrix.hpp"
#include "srk/randvars.hpp"
#include "srk/stepper.hpp"
#include "srk/tableau.hpp"
