#pragma once

// Umbrella header: simulator of uniformly accelerated two-level detectors
// coupled to truncated bosonic field modes in the comoving frame, with
// Landau-Zener cross-checks and trapped-ion / circuit-QED drive compilers.

#include "rindler/errors.hpp"
#include "rindler/evolve.hpp"
#include "rindler/hamiltonian.hpp"
#include "rindler/hardware.hpp"
#include "rindler/hilbert.hpp"
#include "rindler/landau_zener.hpp"
#include "rindler/observables.hpp"
#include "rindler/trajectory.hpp"
#include "rindler/version.hpp"
