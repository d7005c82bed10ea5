#pragma once

#include "tbc/particle.hpp"
#include "tbc/rng.hpp"
#include "tbc/single_atom.hpp"

namespace tbc {

/// Complex Gaussian matrix supported on indices [lo, hi] of the window.
ParticleOperator random_operator(const LatticeWindow& w, int lo, int hi, CounterRng& rng);

/// Random density matrix G G^* / Tr(G G^*) with G a complex Gaussian
/// (hi - lo + 1) x rank matrix placed on [lo, hi]. rank <= 0 means full rank.
ParticleOperator random_density_matrix(const LatticeWindow& w, int lo, int hi, CounterRng& rng, int rank = 0);

/// Random joint density matrix on [lo, hi] (x) C^2.
JointOperator random_joint_state(const LatticeWindow& w, int lo, int hi, CounterRng& rng);

}  // namespace tbc
