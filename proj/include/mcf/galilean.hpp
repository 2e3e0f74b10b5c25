#pragma once

#include "mcf/lattice.hpp"
#include "mcf/sym_tensor.hpp"

namespace mcf {

/// Deviations between the two sides of the frame diagram at one (L, v).
struct DiagramReport {
  double moments = 0.0;   // max |M(L) - X(v) m(X(v) L)| / max |M(L)|
  double potential = 0.0; // max |H'(L) - (v t.h'(l) + h'(l))| / max |H'(L)|
  double lam_ll_shift = 0.0; // |lambda_ll(X(v) L) - lambda_ll(L)|
};

/// Compares the closure evaluated directly at L with the closure evaluated at
/// the boosted multipliers l = X(v) L and transformed back. For the truncated
/// series the mismatch vanishes at v = 0 and grows with the truncation order.
DiagramReport verify_diagram(const CoefficientLattice& lat, const SymTensor& big_l,
                             const BoostVelocity& v);

struct NewtonOptions {
  int max_iter = 50;
  double tol = 1e-12; // on max |m0(l) - target|, relative to max(1, max |target|)
};

/// Multipliers l with contract_time(eval_moments(lat, l)) = m0, by damped
/// Newton on the truncated map with a central-difference Jacobian. Starts from
/// the equilibrium that matches the density and the trace of m0.
SymTensor solve_multipliers(const CoefficientLattice& lat, const SymTensor& m0,
                            const NewtonOptions& opt = {});

/// Closing moments from the rank-N moments F in the frame moving with
/// v = F_i / F. Throws DomainError if F is zero or has the opposite sign to the
/// lattice's equilibrium density, ConvergenceError if Newton fails.
SymTensor nonconvective_closure(const CoefficientLattice& lat, const SymTensor& f_moments,
                                const NewtonOptions& opt = {});

} // namespace mcf
