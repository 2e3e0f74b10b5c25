#pragma once

#include "mcf/lattice.hpp"
#include "mcf/sym_tensor.hpp"

#include <cstdint>
#include <vector>

namespace mcf {

/// lambda_r = C(N,r) l(h,..,h, t,..,t) with r projector slots, r = 0..N.
/// Each lambda_r is a rank-r tensor whose time components are zero.
std::vector<SymTensor> multipliers_4d_to_3d(const SymTensor& l);

/// Inverse of multipliers_4d_to_3d: l = sum_r Sym(lambda_r t..t).
SymTensor multipliers_3d_to_4d(const std::vector<SymTensor>& lambdas);

/// l_N = Sym(l_{N-1} t).
SymTensor lift_multipliers(const SymTensor& l_sub);

struct SubsystemReport {
  double hprime = 0.0;       // max |h'_N(lift l) - h'_{N-1}(l)| / max |h'_{N-1}(l)|
  double supplementary = 0.0; // max |supplementary part of h'_N(lift l)|
  int samples = 0;
};

/// Random rank-(N-1) states near equilibrium, sample i drawn from its own
/// generator seeded with (seed, i), so results do not depend on threading.
std::vector<SymTensor> subsystem_states(int n_sub, double lambda0, int samples, std::uint64_t seed);

/// h' of lat_nm1 at each state against h' of lat_n at the lifted state.
/// Throws InvalidArgument unless the orders are N and N-1, the truncations
/// agree, lat_nm1 has no supplementary constants and the shared H entries agree.
SubsystemReport compare_subsystem(const CoefficientLattice& lat_n, const CoefficientLattice& lat_nm1,
                                  int samples, std::uint64_t seed);

/// Supplementary part of h' of lat_n at lifted rank-(N-1) states. Needs no
/// (N-1) lattice, so it also covers N = 3.
double lifted_supplementary(const CoefficientLattice& lat_n, int samples, std::uint64_t seed);

struct KappaWindow {
  int p = 0;
  int predicted = 0;      // least r with p <= floor(((N-3) r + 1)/2)
  int observed_sub = -1;  // least order whose (N-1)-closure term moves with kappa_p
  int observed_lift = -1; // same for the order-N term at a lifted state
};

/// Perturbs each kappa_p of the seed and records the lowest expansion order
/// at which the (N-1) closure, and the order-N closure at lifted states,
/// change. Orders above K are reported as -1.
std::vector<KappaWindow> kappa_windows(const SeedSpec& seed, int n, int k);

} // namespace mcf
