#pragma once

#include <vector>

#include "bosonstat/common.hpp"

// Fock-space bookkeeping and ideal linear-optical distributions:
// occupation/site conversions, permanents, submatrices, and Gell-Mann
// parameterized unitaries. Sites are 1-based throughout.
namespace bosonstat::linopt {

inline constexpr int kMaxPermanentSide = 16;

using SiteList = std::vector<int>;        // length n, entries in 1..m, may repeat
using OccupationList = std::vector<int>;  // length m, nonnegative

// zeta: occupations -> nondecreasing site list (site x repeated g_x times).
SiteList zeta(const OccupationList& g);

// xi: site list -> occupations over m modes.
OccupationList xi(const SiteList& sites, int m);

long long total(const OccupationList& g);

// g! = prod_x g_x!
double occupation_factorial(const OccupationList& g);

// Number of nonzero entries #(g).
int occupied_count(const OccupationList& g);

// All occupation lists over m modes with total n, lexicographically
// descending (leading modes emptied last).
std::vector<OccupationList> enumerate_occupations(int n, int m);

// Submatrix M(rows|cols) with repeated indices allowed (1-based lists).
MatrixXcd submatrix(const MatrixXcd& m, const SiteList& rows, const SiteList& cols);

bool is_unitary(const MatrixXcd& u, double tol = 1e-10);

// The 2x2 balanced beam splitter (1/sqrt2) [[1,-1],[1,1]].
MatrixXcd beam_splitter();

// Permanent by Ryser's formula with Gray-code row-sum updates, O(2^n n).
complexd permanent(const MatrixXcd& m, int max_side = kMaxPermanentSide);

// Probability that perfectly indistinguishable bosons prepared in sites `i`
// exit a unitary U in the occupations g:
//   |Perm(U(zeta(g)|i))|^2 / (g! xi(i)!).
double bosonic_probability(const MatrixXcd& u, const SiteList& i, const OccupationList& g);

// Distinguishable particles: Perm(|U|^2(zeta(g)|i)) / g!.
double distinguishable_probability(const MatrixXcd& u, const SiteList& i,
                                   const OccupationList& g);

// Generalized Gell-Mann basis of d x d Hermitian matrices, orthonormal under
// the Hilbert-Schmidt inner product. Order is row-major over (k, l) in
// [d]x[d]: (1,1),(1,2),...,(1,d),(2,1),...; B_{kk} for k < d is the
// diagonal-traceless matrix and B_{dd} = I/sqrt(d).
std::vector<MatrixXcd> gellmann_basis(int d);

struct GellMannCoeffs {
  int d = 0;
  VectorXd c;  // length d^2, canonical (k, l) order

  MatrixXcd hermitian() const;  // H = sum c_ij B_ij
};

// V = exp(i H) via Hermitian eigendecomposition; unitary to eigensolver
// accuracy.
MatrixXcd unitary_from_coeffs(const GellMannCoeffs& c);

// Principal-branch coefficients: eigenphases in (-pi, pi] (the endpoint -pi
// is mapped to +pi), H = Q diag(phi) Q^dagger, c_ij = Tr(H B_ij).
GellMannCoeffs coeffs_from_unitary(const MatrixXcd& v, double tol = 1e-8);

// Unitary of side rows+cols whose top-left block is M: stack M over
// sqrt(I - M^dagger M), then append an orthonormal basis of the orthogonal
// complement of the range.
MatrixXcd unitary_completion(const MatrixXcd& m, double tol = 1e-10);

}  // namespace bosonstat::linopt
