#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rekit/eigen.hpp"
#include "rekit/matrix.hpp"

namespace rekit {

/// Frobenius (atomic) decomposition: strongly connected components of the
/// support digraph in topological order, split into non-zero atoms (positive
/// block spectral radius) and the quasi-nilpotent residual.
struct AtomDecomposition {
  std::vector<std::vector<int>> components;  // topological order, sorted indices
  std::vector<int> nonzero_atoms;            // positions into `components`
  std::vector<int> residual;                 // union of the zero components
  std::vector<double> block_radii;           // per non-zero atom
};

AtomDecomposition atomic_decomposition(const NextGenMatrix& m, double support_tol = 1e-12);

/// M restricted to one component, embedded at full dimension with zeros
/// elsewhere (the operator T_i).
NextGenMatrix atom_restriction(const NextGenMatrix& m, const std::vector<int>& atom);

/// Sum of all atom restrictions T' (every cross-atom entry zeroed).
NextGenMatrix atom_sum(const NextGenMatrix& m, const AtomDecomposition& decomp);

/// R_e evaluated as the max over non-zero atoms of the block value
/// (max over the empty set = 0). Ties break toward the earliest atom.
struct AtomReValue {
  double value = 0.0;
  std::optional<int> argmax_atom;  // position into decomp.nonzero_atoms
};

AtomReValue re_via_atoms(const NextGenMatrix& m, const Strategy& eta);

/// Checks mult(lambda, M Diag(eta)) = sum_i mult(lambda, T_i Diag(eta)) for
/// every nonzero clustered eigenvalue.
struct MultiplicityCheckReport {
  struct Mismatch {
    std::complex<double> lambda;
    int full_multiplicity = 0;
    int atom_multiplicity_sum = 0;
  };
  std::vector<Mismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

MultiplicityCheckReport multiplicity_sum_check(const NextGenMatrix& m, const Strategy& eta);

struct MonatomicEvidence {
  bool monatomic = false;
  int nonzero_atom_count = 0;
  std::optional<std::vector<int>> atom;       // the unique non-zero atom, when monatomic
  std::optional<int> r0_multiplicity;         // clustered mult of R_0, when monatomic
  std::vector<int> reachable_from_atom;       // indices infected by the atom
};

MonatomicEvidence is_monatomic(const NextGenMatrix& m);

/// The explicit concavity-violating strategy pair built from two non-zero
/// atoms: eta1 = 1_{atom a}, eta2 = (r_a / r_b) 1_{atom b} with r_a <= r_b.
/// Precondition: R_0 > 0 and at least two non-zero atoms.
struct ConcavityViolationWitness {
  Strategy eta1, eta2;
  double midpoint_value = 0.0;
  double chord_value = 0.0;  // (Re(eta1) + Re(eta2)) / 2
  double gap = 0.0;          // chord_value - midpoint_value, positive on violation
};

std::optional<ConcavityViolationWitness> concavity_implies_monatomic_witness(
    const NextGenMatrix& m);

}  // namespace rekit
