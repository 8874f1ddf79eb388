#pragma once

#include <vector>

#include "collapse/wavefunction.hpp"

namespace collapse {

// Snapshot taken at a requested sample time along a stochastic trajectory.
struct SampleRecord {
  double time = 0.0;
  Observables obs;
  WaveFunction state;
};

}  // namespace collapse
