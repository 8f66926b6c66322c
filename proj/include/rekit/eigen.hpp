#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "rekit/matrix.hpp"

namespace rekit {

/// Clustered spectrum of a real matrix. Eigenvalues whose mutual distance is
/// within `cluster_radius` are merged with summed algebraic multiplicities;
/// complex values occur in conjugate pairs with equal multiplicities.
struct Spectrum {
  struct Entry {
    std::complex<double> value;
    int multiplicity;
  };
  std::vector<Entry> eigenvalues;  // sorted by |value| desc, then Re desc, Im asc
  int dimension = 0;
  double cluster_radius = 0.0;

  /// rad(spec): max |value|, 0 for the empty spectrum.
  double radius() const;
  int total_multiplicity() const;
  /// Multiplicity of the cluster containing lambda (0 if none within radius).
  int multiplicity_at(std::complex<double> lambda, double tol) const;
};

/// Eigenvalue counts by sign of the real part (Sylvester inertia p, n, z).
struct Inertia {
  int positive_count = 0;
  int negative_count = 0;
  int zero_count = 0;
  bool operator==(const Inertia&) const = default;
};

struct PerronPair {
  double radius = 0.0;
  std::vector<double> right;  // unit 1-norm, entrywise >= 0
  std::vector<double> left;
};

/// All eigenvalues of the plain matrix (weights ignored), clustered.
/// Residuals ||Mv - lambda v|| / ||M|| of the internally recovered
/// eigenvectors are checked against `tol`.
/// Default cluster radius: 1e-7 * max(1, rho(M)).
Spectrum spectrum(const NextGenMatrix& m, double tol = 1e-8,
                  std::optional<double> cluster_radius = std::nullopt);

/// rad(spectrum(m)); same code path as spectrum().
double spectral_radius(const NextGenMatrix& m);

/// Default zero_band: 1e-9 * max(1, rad(s)).
Inertia inertia(const Spectrum& s, std::optional<double> zero_band = std::nullopt);

/// Right and left Perron eigenvectors for the spectral radius.
/// Fails with numerical_error if the matrix is quasi-nilpotent.
PerronPair perron_pair(const NextGenMatrix& m);

/// Multiset equality of two spectra within `tol` (entries matched greedily,
/// multiplicities must agree cluster by cluster).
bool spectra_match(const Spectrum& a, const Spectrum& b, double tol);

namespace detail {

/// Eigenvalues (and optionally right eigenvectors) of a dense real matrix,
/// by balancing, Householder-Hessenberg reduction and Francis double-shift
/// QR. Vectors are returned as n columns, complex pairs sharing storage in
/// the usual packed real Schur convention, unpacked here to complex.
struct DenseEigenResult {
  std::vector<std::complex<double>> values;
  // vectors[k] is the eigenvector for values[k] (unit 2-norm).
  std::vector<std::vector<std::complex<double>>> vectors;
};
DenseEigenResult dense_eigen(const std::vector<double>& a, int n, bool want_vectors,
                             int max_sweeps);

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (descending) and orthonormal eigenvectors as columns.
struct SymmetricEigenResult {
  std::vector<double> values;
  std::vector<double> vectors;  // row-major n x n, column k = eigenvector k
};
SymmetricEigenResult symmetric_eigen(const std::vector<double>& a, int n);

/// Solve A x = b by LU with partial pivoting (A row-major n x n, overwritten copy).
std::vector<double> solve_linear(std::vector<double> a, int n, std::vector<double> b);

double matrix_inf_norm(const std::vector<double>& a, int n);

}  // namespace detail

}  // namespace rekit
