#include "bosonstat/symrep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bosonstat::symrep {

namespace {

void add_prime_factors(std::map<int, long long>& exps, int v, int mult) {
  for (int p = 2; p * p <= v; ++p) {
    while (v % p == 0) {
      exps[p] += mult;
      v /= p;
    }
  }
  if (v > 1) exps[v] += mult;
}

std::uint64_t product_of_exponents(const std::map<int, long long>& exps,
                                   const std::string& what) {
  __int128 r = 1;
  for (const auto& [p, e] : exps) {
    if (e < 0) throw numerical_error(what + ": non-integer intermediate");
    for (long long i = 0; i < e; ++i) {
      r *= p;
      if (r > static_cast<__int128>(UINT64_MAX)) throw numerical_error(what + ": overflow");
    }
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    require(parts_[i] >= 1, "Partition: parts must be positive");
    if (i > 0) require(parts_[i - 1] >= parts_[i], "Partition: parts must be nonincreasing");
    n_ += parts_[i];
  }
}

Partition Partition::single_row(int n) {
  require(n >= 1, "Partition: n must be positive");
  return Partition({n});
}

Partition Partition::single_column(int n) {
  require(n >= 1, "Partition: n must be positive");
  return Partition(std::vector<int>(n, 1));
}

int Partition::part(int i) const {
  require(i >= 1, "Partition::part: index is 1-based");
  return i <= length() ? parts_[i - 1] : 0;
}

Partition Partition::transpose() const {
  if (parts_.empty()) return Partition();
  std::vector<int> t(parts_[0], 0);
  for (int p : parts_)
    for (int c = 0; c < p; ++c) ++t[c];
  return Partition(std::move(t));
}

long long Partition::b() const {
  long long acc = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) acc += static_cast<long long>(i) * parts_[i];
  return acc;
}

std::vector<int> Partition::hook_lengths() const {
  const Partition t = transpose();
  std::vector<int> hooks;
  hooks.reserve(n_);
  for (int r = 1; r <= length(); ++r)
    for (int c = 1; c <= parts_[r - 1]; ++c)
      hooks.push_back(parts_[r - 1] - c + t.part(c) - r + 1);
  return hooks;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << ',';
    os << parts_[i];
  }
  os << ')';
  return os.str();
}

namespace {
void enumerate_partitions(int remaining, int max_part, std::vector<int>& prefix,
                          std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(prefix);
    return;
  }
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    prefix.push_back(p);
    enumerate_partitions(remaining - p, p, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace

std::vector<Partition> partitions_of(int n, int max_n) {
  require(n >= 1, "partitions_of: n must be positive");
  if (n > max_n)
    throw size_limit_error("partitions_of: n = " + std::to_string(n) + " exceeds cap " +
                           std::to_string(max_n));
  std::vector<Partition> out;
  std::vector<int> prefix;
  enumerate_partitions(n, n, prefix, out);
  return out;
}

std::uint64_t factorial(int n) {
  require(n >= 0 && n <= 20, "factorial: need 0 <= n <= 20 for exact arithmetic");
  std::uint64_t r = 1;
  for (int k = 2; k <= n; ++k) r *= static_cast<std::uint64_t>(k);
  return r;
}

std::uint64_t hook_dimension(const Partition& lambda) {
  std::map<int, long long> exps;
  for (int k = 2; k <= lambda.n(); ++k) add_prime_factors(exps, k, +1);
  for (int h : lambda.hook_lengths())
    if (h > 1) add_prime_factors(exps, h, -1);
  return product_of_exponents(exps, "hook_dimension");
}

std::uint64_t weyl_dimension(const Partition& lambda, int m) {
  require(m >= 1, "weyl_dimension: m must be positive");
  if (lambda.length() > m) return 0;
  std::map<int, long long> exps;
  for (int i = 1; i < m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      const int num = lambda.part(i) - lambda.part(j) + j - i;
      if (num > 1) add_prime_factors(exps, num, +1);
      if (j - i > 1) add_prime_factors(exps, j - i, -1);
    }
  }
  return product_of_exponents(exps, "weyl_dimension");
}

std::uint64_t conjugacy_class_size(const Partition& mu) {
  // |class| = n! / z_mu with z_mu = prod_k k^{m_k} m_k!.
  std::uint64_t z = 1;
  std::map<int, int> mult;
  for (int p : mu.parts()) ++mult[p];
  for (const auto& [k, mk] : mult) {
    for (int i = 0; i < mk; ++i) z *= static_cast<std::uint64_t>(k);
    z *= factorial(mk);
  }
  return factorial(mu.n()) / z;
}

Permutation::Permutation(std::vector<int> images_one_based) {
  const int n = static_cast<int>(images_one_based.size());
  std::vector<bool> seen(n, false);
  images_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int v = images_one_based[i];
    require(v >= 1 && v <= n, "Permutation: image out of range");
    require(!seen[v - 1], "Permutation: images must be a bijection");
    seen[v - 1] = true;
    images_[i] = v - 1;
  }
}

Permutation Permutation::identity(int n) {
  require(n >= 0, "Permutation: n must be nonnegative");
  Permutation p;
  p.images_.resize(n);
  std::iota(p.images_.begin(), p.images_.end(), 0);
  return p;
}

Permutation Permutation::transposition(int n, int a, int b) {
  require(a >= 1 && a <= n && b >= 1 && b <= n && a != b, "transposition: bad arguments");
  Permutation p = identity(n);
  std::swap(p.images_[a - 1], p.images_[b - 1]);
  return p;
}

Permutation Permutation::from_cycle_type(const Partition& mu) {
  Permutation p = identity(mu.n());
  int start = 0;
  for (int len : mu.parts()) {
    for (int x = 0; x < len; ++x) p.images_[start + x] = start + (x + 1) % len;
    start += len;
  }
  return p;
}

bool Permutation::is_identity() const {
  for (int i = 0; i < n(); ++i)
    if (images_[i] != i) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.images_.resize(images_.size());
  for (int i = 0; i < n(); ++i) p.images_[images_[i]] = i;
  return p;
}

Permutation Permutation::compose(const Permutation& other) const {
  require(n() == other.n(), "Permutation::compose: size mismatch");
  Permutation p;
  p.images_.resize(images_.size());
  for (int i = 0; i < n(); ++i) p.images_[i] = images_[other.images_[i]];
  return p;
}

Partition Permutation::cycle_type() const {
  std::vector<bool> seen(images_.size(), false);
  std::vector<int> lens;
  for (int i = 0; i < n(); ++i) {
    if (seen[i]) continue;
    int len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = images_[j];
      ++len;
    }
    lens.push_back(len);
  }
  std::sort(lens.begin(), lens.end(), std::greater<int>());
  return Partition(std::move(lens));
}

std::vector<int> Permutation::adjacent_factorization() const {
  // Bubble-sort the one-line notation; swapping positions (k, k+1) is right
  // multiplication by s_k, so sigma = s_{w_r} ... s_{w_1} for the recorded
  // swap sequence w.
  std::vector<int> a = images_;
  std::vector<int> swaps;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int j = 0; j + 1 < static_cast<int>(a.size()); ++j) {
      if (a[j] > a[j + 1]) {
        std::swap(a[j], a[j + 1]);
        swaps.push_back(j + 1);
        moved = true;
      }
    }
  }
  std::reverse(swaps.begin(), swaps.end());
  return swaps;
}

void for_each_permutation(int n, const std::function<void(const Permutation&, int)>& fn) {
  require(n >= 1, "for_each_permutation: n must be positive");
  if (n > kMaxFullGroupN)
    throw size_limit_error("for_each_permutation: n exceeds full-group cap " +
                           std::to_string(kMaxFullGroupN));
  std::vector<int> a(n), dir(n, -1);  // values 0..n-1, all moving left initially
  std::iota(a.begin(), a.end(), 0);
  std::vector<int> one_based(n);
  auto emit = [&](int swapped) {
    for (int i = 0; i < n; ++i) one_based[i] = a[i] + 1;
    fn(Permutation(one_based), swapped);
  };
  emit(0);
  for (;;) {
    int mobile = -1, mobile_pos = -1;
    for (int i = 0; i < n; ++i) {
      const int j = i + dir[a[i]];
      if (j < 0 || j >= n) continue;
      if (a[j] < a[i] && (mobile < 0 || a[i] > mobile)) {
        mobile = a[i];
        mobile_pos = i;
      }
    }
    if (mobile < 0) break;
    const int target = mobile_pos + dir[mobile];
    std::swap(a[mobile_pos], a[target]);
    for (int v = mobile + 1; v < n; ++v) dir[v] = -dir[v];
    emit(std::min(mobile_pos, target) + 1);
  }
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<Permutation> out;
  out.reserve(factorial(std::min(n, 20)));
  for_each_permutation(n, [&](const Permutation& p, int) { out.push_back(p); });
  return out;
}

StandardTableau::StandardTableau(Partition shape, std::vector<std::vector<int>> rows)
    : shape_(std::move(shape)) {
  const int n = shape_.n();
  require(static_cast<int>(rows.size()) == shape_.length(), "StandardTableau: row count mismatch");
  row_of_.assign(n, 0);
  col_of_.assign(n, 0);
  for (int r = 0; r < shape_.length(); ++r) {
    require(static_cast<int>(rows[r].size()) == shape_.parts()[r],
            "StandardTableau: row length mismatch");
    for (int c = 0; c < static_cast<int>(rows[r].size()); ++c) {
      const int v = rows[r][c];
      require(v >= 1 && v <= n && row_of_[v - 1] == 0, "StandardTableau: bad filling");
      row_of_[v - 1] = r + 1;
      col_of_[v - 1] = c + 1;
    }
  }
  for (int v = 2; v <= n; ++v) {
    // strict increase along rows and columns
    for (int w = 1; w < v; ++w) {
      if (row_of_[w - 1] == row_of_[v - 1])
        require(col_of_[w - 1] < col_of_[v - 1], "StandardTableau: rows not increasing");
      if (col_of_[w - 1] == col_of_[v - 1])
        require(row_of_[w - 1] < row_of_[v - 1], "StandardTableau: columns not increasing");
    }
  }
}

bool StandardTableau::swap_is_standard(int k) const {
  // (k k+1).T fails to be standard exactly when k and k+1 share a row or a
  // column.
  return row_of(k) != row_of(k + 1) && col_of(k) != col_of(k + 1);
}

StandardTableau StandardTableau::apply_adjacent_swap(int k) const {
  StandardTableau t = *this;
  std::swap(t.row_of_[k - 1], t.row_of_[k]);
  std::swap(t.col_of_[k - 1], t.col_of_[k]);
  return t;
}

std::vector<std::vector<int>> StandardTableau::rows() const {
  std::vector<std::vector<int>> rows(shape_.length());
  for (int r = 0; r < shape_.length(); ++r) rows[r].assign(shape_.parts()[r], 0);
  for (int v = 1; v <= n(); ++v) rows[row_of(v) - 1][col_of(v) - 1] = v;
  return rows;
}

std::vector<StandardTableau> standard_tableaux(const Partition& shape) {
  // Peel letters n, n-1, ..., 1 off removable corners, earlier rows first;
  // the recursion order is exactly last-letter order.
  const int nrows = shape.length();
  std::vector<int> fill(shape.parts());
  std::vector<std::pair<int, int>> place(shape.n() + 1);  // letter -> (row, col), 1-based
  std::vector<StandardTableau> out;
  struct Rec {
    const Partition& shape;
    std::vector<int>& fill;
    std::vector<std::pair<int, int>>& place;
    std::vector<StandardTableau>& out;
    int nrows;
    void operator()(int letter) {
      if (letter == 0) {
        std::vector<std::vector<int>> rows(nrows);
        for (int r = 0; r < nrows; ++r) rows[r].assign(shape.parts()[r], 0);
        for (int v = 1; v <= shape.n(); ++v)
          rows[place[v].first - 1][place[v].second - 1] = v;
        out.emplace_back(shape, rows);
        return;
      }
      for (int r = 0; r < nrows; ++r) {
        if (fill[r] == 0) continue;
        if (r + 1 < nrows && fill[r + 1] >= fill[r]) continue;  // not a corner
        place[letter] = {r + 1, fill[r]};
        --fill[r];
        (*this)(letter - 1);
        ++fill[r];
      }
    }
  };
  Rec rec{shape, fill, place, out, nrows};
  rec(shape.n());
  return out;
}

YoungOrthogonalForm::YoungOrthogonalForm(Partition lambda)
    : lambda_(std::move(lambda)), tableaux_(standard_tableaux(lambda_)) {
  const int n = lambda_.n();
  const int f = dimension();
  std::map<std::vector<int>, int> index;  // keyed by row_of vector
  std::vector<std::vector<int>> row_keys(f);
  for (int t = 0; t < f; ++t) {
    std::vector<int> key(n);
    for (int v = 1; v <= n; ++v) key[v - 1] = tableaux_[t].row_of(v);
    index[key] = t;
    row_keys[t] = std::move(key);
  }
  generators_.reserve(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) {
    MatrixXd g = MatrixXd::Zero(f, f);
    for (int t = 0; t < f; ++t) {
      const int d = tableaux_[t].axial_distance(k, k + 1);
      g(t, t) = 1.0 / d;
      if (tableaux_[t].swap_is_standard(k)) {
        std::vector<int> key = row_keys[t];
        std::swap(key[k - 1], key[k]);
        const int u = index.at(key);
        g(t, u) = std::sqrt(1.0 - 1.0 / (static_cast<double>(d) * d));
      }
    }
    generators_.push_back(std::move(g));
  }
}

const MatrixXd& YoungOrthogonalForm::generator(int k) const {
  require(k >= 1 && k <= static_cast<int>(generators_.size()),
          "YoungOrthogonalForm::generator: k out of range");
  return generators_[k - 1];
}

MatrixXd YoungOrthogonalForm::matrix(const Permutation& sigma) const {
  require(sigma.n() == lambda_.n(), "YoungOrthogonalForm::matrix: size mismatch");
  MatrixXd r = MatrixXd::Identity(dimension(), dimension());
  for (int k : sigma.adjacent_factorization()) r = r * generators_[k - 1];
  return r;
}

MatrixXd young_orthogonal_rep(const Partition& lambda, const Permutation& sigma) {
  return YoungOrthogonalForm(lambda).matrix(sigma);
}

long long character(const Partition& lambda, const Partition& cls) {
  require(lambda.n() == cls.n(), "character: partitions of different n");
  if (lambda.n() > kMaxCharacterN)
    throw size_limit_error("character: n exceeds cap " + std::to_string(kMaxCharacterN));
  const YoungOrthogonalForm yof(lambda);
  const double tr = yof.matrix(Permutation::from_cycle_type(cls)).trace();
  const double rounded = std::round(tr);
  if (std::abs(tr - rounded) > 1e-6) throw numerical_error("character: non-integer trace");
  return static_cast<long long>(rounded);
}

IrrepBlocks fourier_transform(const std::function<complexd(const Permutation&)>& f, int n) {
  require(n >= 1, "fourier_transform: n must be positive");
  IrrepBlocks out;
  out.n = n;
  std::vector<Partition> lambdas = partitions_of(n);
  std::vector<YoungOrthogonalForm> yofs;
  yofs.reserve(lambdas.size());
  for (const auto& l : lambdas) yofs.emplace_back(l);
  std::vector<MatrixXd> r(lambdas.size());
  std::vector<MatrixXcd> acc(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const int d = yofs[i].dimension();
    r[i] = MatrixXd::Identity(d, d);
    acc[i] = MatrixXcd::Zero(d, d);
  }
  for_each_permutation(n, [&](const Permutation& sigma, int swapped) {
    const complexd fv = f(sigma);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (swapped > 0 && yofs[i].dimension() > 0) r[i] = r[i] * yofs[i].generator(swapped);
      if (fv != complexd(0.0, 0.0)) acc[i] += fv * r[i];
    }
  });
  for (std::size_t i = 0; i < lambdas.size(); ++i) out.blocks[lambdas[i]] = std::move(acc[i]);
  return out;
}

IrrepBlocks fourier_transform(const std::map<Permutation, complexd>& f, int n) {
  require(static_cast<std::uint64_t>(f.size()) == factorial(n),
          "fourier_transform: f must be defined on all of S_n");
  return fourier_transform(
      [&f](const Permutation& sigma) {
        const auto it = f.find(sigma);
        require(it != f.end(), "fourier_transform: missing permutation in f");
        return it->second;
      },
      n);
}

std::map<Permutation, complexd> inverse_fourier(const IrrepBlocks& fhat) {
  const int n = fhat.n;
  require(n >= 1, "inverse_fourier: empty blocks");
  std::vector<Partition> lambdas = partitions_of(n);
  require(lambdas.size() == fhat.blocks.size(), "inverse_fourier: blocks incomplete");
  std::vector<YoungOrthogonalForm> yofs;
  std::vector<double> dims;
  std::vector<const MatrixXcd*> blocks;
  for (const auto& l : lambdas) {
    yofs.emplace_back(l);
    const auto it = fhat.blocks.find(l);
    require(it != fhat.blocks.end(), "inverse_fourier: missing block " + l.to_string());
    const int d = yofs.back().dimension();
    require(it->second.rows() == d && it->second.cols() == d,
            "inverse_fourier: block side != f^lambda for " + l.to_string());
    dims.push_back(static_cast<double>(d));
    blocks.push_back(&it->second);
  }
  std::vector<MatrixXd> r(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const int d = yofs[i].dimension();
    r[i] = MatrixXd::Identity(d, d);
  }
  const double inv_group = 1.0 / static_cast<double>(factorial(n));
  std::map<Permutation, complexd> out;
  for_each_permutation(n, [&](const Permutation& sigma, int swapped) {
    complexd v(0.0, 0.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (swapped > 0) r[i] = r[i] * yofs[i].generator(swapped);
      // r is orthogonal, so r(sigma^-1) = r(sigma)^T.
      v += dims[i] * (*blocks[i] * r[i].transpose()).trace();
    }
    out[sigma] = v * inv_group;
  });
  return out;
}

}  // namespace bosonstat::symrep
