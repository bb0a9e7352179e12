#include "fixtures.hpp"

const eqsrc::EquilibriumData& fixture_quad1() {
  static eqsrc::EquilibriumData eq =
      eqsrc::EquilibriumData::build(eqsrc::FieldSpec::quadratic(1.0));
  return eq;
}

const eqsrc::EquilibriumData& fixture_quartic0() {
  static eqsrc::EquilibriumData eq =
      eqsrc::EquilibriumData::build(eqsrc::FieldSpec::quartic(0.0));
  return eq;
}
