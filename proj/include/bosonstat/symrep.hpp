#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bosonstat/common.hpp"

// Combinatorics and representation theory of the symmetric group S_n:
// partitions, standard tableaux, irrep dimensions, the Young orthogonal
// form, characters, and Fourier analysis on S_n.
//
// Conventions, fixed once for the whole library:
//  * Partitions are nonincreasing lists of positive integers.
//  * Permutations map {1..n} -> {1..n}; composition (s.compose(t))(x) = s(t(x)).
//  * The Young-Yamanouchi basis of an irrep is ordered by *last-letter
//    order*: T precedes T' iff, at the largest letter k whose row differs
//    between them, T places k in the earlier row.
namespace bosonstat::symrep {

// Hard cap for operations that enumerate all of S_n.
inline constexpr int kMaxFullGroupN = 10;
// Cap for character evaluation by tracing the Young orthogonal form.
inline constexpr int kMaxCharacterN = 8;

class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts);

  static Partition single_row(int n);     // (n)
  static Partition single_column(int n);  // (1,...,1)

  int n() const { return n_; }
  int length() const { return static_cast<int>(parts_.size()); }
  const std::vector<int>& parts() const { return parts_; }
  int part(int i) const;  // 1-based; 0 beyond the length

  Partition transpose() const;
  // b(lambda) = sum_i (i-1) lambda_i
  long long b() const;
  // Hook lengths h(u), row-major over the boxes of the diagram.
  std::vector<int> hook_lengths() const;

  std::string to_string() const;

  bool operator==(const Partition& o) const { return parts_ == o.parts_; }
  bool operator!=(const Partition& o) const { return parts_ != o.parts_; }
  bool operator<(const Partition& o) const { return parts_ < o.parts_; }

 private:
  std::vector<int> parts_;
  int n_ = 0;
};

// All partitions of n, each exactly once, in lexicographically descending
// order: (n) first, (1,...,1) last.
std::vector<Partition> partitions_of(int n, int max_n = kMaxFullGroupN);

std::uint64_t factorial(int n);  // exact, n <= 20

// f^lambda by the hook-length formula, exact integer arithmetic.
std::uint64_t hook_dimension(const Partition& lambda);

// d_lambda(m) by the Weyl dimension formula, exact integer arithmetic;
// 0 when len(lambda) > m.
std::uint64_t weyl_dimension(const Partition& lambda, int m);

// Size of the conjugacy class of S_n with cycle type mu.
std::uint64_t conjugacy_class_size(const Partition& mu);

class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images_one_based);

  static Permutation identity(int n);
  static Permutation transposition(int n, int a, int b);
  // A canonical representative of the conjugacy class with the given cycle
  // type: consecutive cycles (1..mu_1)(mu_1+1..mu_1+mu_2)...
  static Permutation from_cycle_type(const Partition& mu);

  int n() const { return static_cast<int>(images_.size()); }
  int image(int x) const { return images_[x - 1] + 1; }  // 1-based
  bool is_identity() const;

  Permutation inverse() const;
  Permutation compose(const Permutation& other) const;

  Partition cycle_type() const;

  // sigma as an ordered product of adjacent transpositions s_k = (k k+1):
  // sigma = s_{f[0]} s_{f[1]} ... (bubble-sort decomposition).
  std::vector<int> adjacent_factorization() const;

  bool operator==(const Permutation& o) const { return images_ == o.images_; }
  bool operator<(const Permutation& o) const { return images_ < o.images_; }

 private:
  std::vector<int> images_;  // 0-based internally
};

// Enumerates S_n by the Steinhaus-Johnson-Trotter algorithm: consecutive
// permutations differ by a swap of positions (k, k+1), so a representation
// matrix can be carried along with one generator multiplication per step.
// The callback receives the permutation and the 1-based position k swapped
// relative to the previous permutation (0 for the first call).
void for_each_permutation(int n, const std::function<void(const Permutation&, int)>& fn);

// All of S_n in SJT order (convenience for the double-sum models).
std::vector<Permutation> all_permutations(int n);

class StandardTableau {
 public:
  StandardTableau(Partition shape, std::vector<std::vector<int>> rows);

  const Partition& shape() const { return shape_; }
  int n() const { return shape_.n(); }
  int row_of(int letter) const { return row_of_[letter - 1]; }  // 1-based
  int col_of(int letter) const { return col_of_[letter - 1]; }
  // Content c_T(k) = column(k) - row(k).
  int content(int letter) const { return col_of(letter) - row_of(letter); }
  // Axial distance d_T(i, j) = c_T(j) - c_T(i).
  int axial_distance(int i, int j) const { return content(j) - content(i); }

  // Whether (k k+1) . T is still standard.
  bool swap_is_standard(int k) const;
  StandardTableau apply_adjacent_swap(int k) const;

  std::vector<std::vector<int>> rows() const;

  bool operator==(const StandardTableau& o) const {
    return shape_ == o.shape_ && row_of_ == o.row_of_ && col_of_ == o.col_of_;
  }

 private:
  Partition shape_;
  std::vector<int> row_of_, col_of_;
};

// All standard tableaux of the given shape, in last-letter order.
std::vector<StandardTableau> standard_tableaux(const Partition& shape);

// The Young orthogonal form of the irrep S^lambda. Generator matrices are
// built once per shape; representation matrices for arbitrary permutations
// come from the adjacent-transposition factorization.
class YoungOrthogonalForm {
 public:
  explicit YoungOrthogonalForm(Partition lambda);

  const Partition& shape() const { return lambda_; }
  int dimension() const { return static_cast<int>(tableaux_.size()); }
  const std::vector<StandardTableau>& basis() const { return tableaux_; }

  // r(s_k) for the adjacent transposition s_k = (k k+1), k in 1..n-1.
  const MatrixXd& generator(int k) const;
  MatrixXd matrix(const Permutation& sigma) const;

 private:
  Partition lambda_;
  std::vector<StandardTableau> tableaux_;
  std::vector<MatrixXd> generators_;
};

// r_lambda(sigma) as a dense orthogonal matrix of side f^lambda.
MatrixXd young_orthogonal_rep(const Partition& lambda, const Permutation& sigma);

// Irreducible character chi_lambda on the conjugacy class with cycle type
// `cls`; evaluated by tracing the Young orthogonal form (exact integer).
long long character(const Partition& lambda, const Partition& cls);

// Fourier coefficients of a function on S_n: one complex block of side
// f^lambda per partition lambda of n.
struct IrrepBlocks {
  int n = 0;
  std::map<Partition, MatrixXcd> blocks;
};

// hat f(lambda) = sum_sigma f(sigma) r_lambda(sigma) for every lambda.
IrrepBlocks fourier_transform(const std::function<complexd(const Permutation&)>& f, int n);
IrrepBlocks fourier_transform(const std::map<Permutation, complexd>& f, int n);

// f(sigma) = (1/n!) sum_lambda f^lambda Tr(hat f(lambda) r_lambda(sigma^-1)).
std::map<Permutation, complexd> inverse_fourier(const IrrepBlocks& fhat);

}  // namespace bosonstat::symrep
