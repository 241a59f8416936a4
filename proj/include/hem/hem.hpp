#pragma once

// Umbrella header for the whole library.

#include "hem/collocation.hpp"
#include "hem/csv.hpp"
#include "hem/discrete_lagrangian.hpp"
#include "hem/dual.hpp"
#include "hem/errors.hpp"
#include "hem/harness.hpp"
#include "hem/hermite.hpp"
#include "hem/integrator.hpp"
#include "hem/jet.hpp"
#include "hem/linalg.hpp"
#include "hem/oracle.hpp"
#include "hem/prolongation.hpp"
#include "hem/scalar.hpp"
#include "hem/systems.hpp"
