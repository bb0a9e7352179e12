#pragma once

#include "eqsrc/equilibrium.hpp"

// Shared lazily-built equilibrium fixtures (building one costs ~1 s).
const eqsrc::EquilibriumData& fixture_quad1();
const eqsrc::EquilibriumData& fixture_quartic0();
