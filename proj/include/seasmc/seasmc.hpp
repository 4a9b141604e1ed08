#pragma once

#include "seasmc/analysis.hpp"
#include "seasmc/bundled.hpp"
#include "seasmc/control.hpp"
#include "seasmc/integrate.hpp"
#include "seasmc/observer.hpp"
#include "seasmc/plant.hpp"
#include "seasmc/scenario.hpp"
#include "seasmc/signals.hpp"
#include "seasmc/sim.hpp"
#include "seasmc/trace.hpp"
#include "seasmc/verify.hpp"
