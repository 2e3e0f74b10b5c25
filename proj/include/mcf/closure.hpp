#pragma once

#include "mcf/lattice.hpp"
#include "mcf/sym_tensor.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace mcf {

/// Multiplier tensor split into its equilibrium scalars and the deviation.
struct StateDecomposition {
  double lam = 0.0;
  double lam_ll = 0.0;
  SymTensor dev;
};

/// lam t..t + (1/3) lam_ll h_(t..t), rank n.
SymTensor equilibrium_multipliers(int n, double lam, double lam_ll);

StateDecomposition decompose_state(const SymTensor& l);
SymTensor recompose_state(const StateDecomposition& d);

/// Which contributions of the expansion tensors to include.
enum class Part { All, Regular, Supplementary };

/// Expansion tensor A_k of rank Nk+1 at (lam, lam_ll). For odd N and odd k
/// the supplementary constant enters as c_{k,Nk+1} times the h-only basis tensor.
SymTensor assemble_A(const CoefficientLattice& lat, int k, double lam, double lam_ll,
                     Part part = Part::All);

/// Expansion tensors A_0..A_kmax at one equilibrium point.
std::vector<SymTensor> expansion_tensors(const CoefficientLattice& lat, int kmax, double lam,
                                         double lam_ll, Part part = Part::All);

/// h'^alpha = sum_k (1/k!) A_k l~^k.
Vec4 eval_hprime(const CoefficientLattice& lat, const SymTensor& l, Part part = Part::All);

/// The single order-k term (1/k!) A_k l~^k of h', for 0 <= k <= K.
Vec4 hprime_term(const CoefficientLattice& lat, const SymTensor& l, int k, Part part = Part::All);

/// m^{gamma_1..gamma_N alpha} = sum_{k>=1} 1/(k-1)! A_k l~^{k-1}.
SymTensor eval_moments(const CoefficientLattice& lat, const SymTensor& l);

/// Largest disagreement between entries of the closing moments that share an
/// index multiset, where each entry is recomputed with its last slot held fixed
/// while the deviations are contracted. Relative to max |m|.
double moment_symmetry_deviation(const CoefficientLattice& lat, const SymTensor& l);

/// h^0 = -h'^0 + l . m^{..0}
double entropy_density(const CoefficientLattice& lat, const SymTensor& l);

/// R^alpha_j = h'^mu t_mu delta^alpha_j + N m^{alpha_1..alpha_{N-1} 0 alpha} l_{alpha_1..alpha_{N-1} j},
/// stored as r[alpha][j-1].
struct ResidualBlock {
  std::array<std::array<double, 3>, 4> r{};
  double max_abs() const;
};

ResidualBlock residual_condition13(const CoefficientLattice& lat, const SymTensor& l);

/// Second-derivative tensor of h'^0 in l (rank 2N), sum_{k>=2} 1/(k-2)! A_k^{0..} l~^{k-2}.
SymTensor second_derivative_tensor(const CoefficientLattice& lat, const SymTensor& l);

/// Matrix of d^2 h'^0 / dl_mu dl_nu over the independent components of l,
/// ordered canonically. Entries carry the multiplicities of mu and nu.
Eigen::MatrixXd hessian_h0(const CoefficientLattice& lat, const SymTensor& l);

/// Max residual per identity, measured coefficient-wise and scaled by
/// max(1, |largest coefficient involved|).
using RecurrenceReport = std::map<std::string, double>;

RecurrenceReport check_recurrences(const CoefficientLattice& lat);

} // namespace mcf
