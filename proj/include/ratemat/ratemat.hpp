#pragma once

#include "ratemat/error.hpp"
#include "ratemat/matrix.hpp"
#include "ratemat/path.hpp"
#include "ratemat/simulator.hpp"
#include "ratemat/ct_estimators.hpp"
#include "ratemat/dt_estimators.hpp"
#include "ratemat/convergence.hpp"
#include "ratemat/lower_operator.hpp"
