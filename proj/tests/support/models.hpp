#pragma once

#include "pax/model.hpp"

namespace paxtest {

// symmetric contest: uniform types on [0,1]^2, p1 = 1/2 + (t1 - t2)/2, equal
// constant citizen costs, zero audience costs
inline pax::CrisisModel baseline_model(double c, double gamma = 1.0, double lambda1 = 1.0,
                                       double lambda2 = 1.0) {
  pax::CrisisModel m;
  const pax::TypeSpace unit{0.0, 1.0};
  for (int i = 0; i < 2; ++i) {
    m.states[i].types = unit;
    m.states[i].belief = pax::BeliefDistribution::uniform(unit);
    m.states[i].gamma = gamma;
    m.states[i].lambda = i == 0 ? lambda1 : lambda2;
    m.states[i].audience = pax::AudienceCostRule::zero();
  }
  m.tech.kind = pax::WarTechnology::Kind::two_sided_difference;
  for (int i = 0; i < 2; ++i) {
    m.tech.h[i] = pax::ComponentFn::affine(0.5, 0.0);
    m.tech.g[i] = pax::ComponentFn::affine(0.5, 0.0);
    m.tech.base[i] = 0.5;
    m.tech.citizen_cost[i] = c;
  }
  return m;
}

// fixed winning probabilities, type = negated fighting cost on [lo, hi]
inline pax::CrisisModel one_sided_model(double p1, double lam1 = 1.0, double lam2 = 1.0,
                                        double lo = -0.5, double hi = 0.0) {
  pax::CrisisModel m;
  const pax::TypeSpace space{lo, hi};
  for (int i = 0; i < 2; ++i) {
    m.states[i].types = space;
    m.states[i].belief = pax::BeliefDistribution::uniform(space);
    m.states[i].gamma = 1.0;
    m.states[i].lambda = i == 0 ? lam1 : lam2;
    m.states[i].audience = pax::AudienceCostRule::zero();
  }
  m.tech.kind = pax::WarTechnology::Kind::one_sided_cost;
  m.tech.win_prob = {p1, 1.0 - p1};
  return m;
}

}  // namespace paxtest
