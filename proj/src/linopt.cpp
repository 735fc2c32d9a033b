#include "bosonstat/linopt.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace bosonstat::linopt {

SiteList zeta(const OccupationList& g) {
  SiteList sites;
  for (std::size_t x = 0; x < g.size(); ++x) {
    require(g[x] >= 0, "zeta: negative occupation");
    for (int k = 0; k < g[x]; ++k) sites.push_back(static_cast<int>(x) + 1);
  }
  return sites;
}

OccupationList xi(const SiteList& sites, int m) {
  require(m >= 0, "xi: negative mode count");
  OccupationList g(m, 0);
  for (int s : sites) {
    require(s >= 1 && s <= m, "xi: site index out of range");
    ++g[s - 1];
  }
  return g;
}

long long total(const OccupationList& g) {
  long long n = 0;
  for (int v : g) n += v;
  return n;
}

double occupation_factorial(const OccupationList& g) {
  double f = 1.0;
  for (int v : g)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

int occupied_count(const OccupationList& g) {
  int c = 0;
  for (int v : g)
    if (v > 0) ++c;
  return c;
}

std::vector<OccupationList> enumerate_occupations(int n, int m) {
  require(n >= 0 && m >= 1, "enumerate_occupations: bad arguments");
  std::vector<OccupationList> out;
  OccupationList g(m, 0);
  struct Rec {
    int m;
    OccupationList& g;
    std::vector<OccupationList>& out;
    void operator()(int pos, int remaining) {
      if (pos == m - 1) {
        g[pos] = remaining;
        out.push_back(g);
        return;
      }
      for (int v = remaining; v >= 0; --v) {
        g[pos] = v;
        (*this)(pos + 1, remaining - v);
      }
    }
  };
  Rec rec{m, g, out};
  rec(0, n);
  return out;
}

MatrixXcd submatrix(const MatrixXcd& m, const SiteList& rows, const SiteList& cols) {
  MatrixXcd s(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require(rows[r] >= 1 && rows[r] <= m.rows(), "submatrix: row index out of range");
    for (std::size_t c = 0; c < cols.size(); ++c) {
      require(cols[c] >= 1 && cols[c] <= m.cols(), "submatrix: column index out of range");
      s(r, c) = m(rows[r] - 1, cols[c] - 1);
    }
  }
  return s;
}

bool is_unitary(const MatrixXcd& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

MatrixXcd beam_splitter() {
  MatrixXcd u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << s, -s, s, s;
  return u;
}

complexd permanent(const MatrixXcd& m, int max_side) {
  require(m.rows() == m.cols(), "permanent: matrix must be square");
  const int n = static_cast<int>(m.rows());
  if (n == 0) return complexd(1.0, 0.0);
  if (n > max_side)
    throw size_limit_error("permanent: side " + std::to_string(n) + " exceeds cap " +
                           std::to_string(max_side));
  // Ryser with Gray code: Perm(M) = (-1)^n sum_{S != 0} (-1)^{|S|} prod_r (sum_{c in S} M_rc).
  VectorXcd rowsums = VectorXcd::Zero(n);
  complexd acc(0.0, 0.0);
  std::uint64_t prev_gray = 0;
  int popcount = 0;
  const std::uint64_t count = 1ULL << n;
  for (std::uint64_t k = 1; k < count; ++k) {
    const std::uint64_t gray = k ^ (k >> 1);
    const std::uint64_t diff = gray ^ prev_gray;
    int bit = 0;
    while (!((diff >> bit) & 1ULL)) ++bit;
    if (gray & diff) {
      rowsums += m.col(bit);
      ++popcount;
    } else {
      rowsums -= m.col(bit);
      --popcount;
    }
    complexd prod(1.0, 0.0);
    for (int r = 0; r < n; ++r) prod *= rowsums(r);
    acc += ((n - popcount) % 2 == 0) ? prod : -prod;
    prev_gray = gray;
  }
  return acc;
}

double bosonic_probability(const MatrixXcd& u, const SiteList& i, const OccupationList& g) {
  require(static_cast<Eigen::Index>(g.size()) == u.rows(), "bosonic_probability: g has wrong length");
  require(total(g) == static_cast<long long>(i.size()),
          "bosonic_probability: |g| must equal the number of inputs");
  const SiteList rows = zeta(g);
  const complexd perm = permanent(submatrix(u, rows, i));
  const OccupationList in_occ = xi(i, static_cast<int>(u.cols()));
  return std::norm(perm) / (occupation_factorial(g) * occupation_factorial(in_occ));
}

double distinguishable_probability(const MatrixXcd& u, const SiteList& i,
                                   const OccupationList& g) {
  require(static_cast<Eigen::Index>(g.size()) == u.rows(),
          "distinguishable_probability: g has wrong length");
  require(total(g) == static_cast<long long>(i.size()),
          "distinguishable_probability: |g| must equal the number of inputs");
  const MatrixXcd abs2 = u.cwiseAbs2().cast<complexd>();
  const complexd perm = permanent(submatrix(abs2, zeta(g), i));
  return perm.real() / occupation_factorial(g);
}

std::vector<MatrixXcd> gellmann_basis(int d) {
  require(d >= 1, "gellmann_basis: d must be positive");
  std::vector<MatrixXcd> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 1; k <= d; ++k) {
    for (int l = 1; l <= d; ++l) {
      MatrixXcd b = MatrixXcd::Zero(d, d);
      if (k < l) {
        b(k - 1, l - 1) = inv_sqrt2;
        b(l - 1, k - 1) = inv_sqrt2;
      } else if (k > l) {
        b(k - 1, l - 1) = complexd(0.0, 1.0) * inv_sqrt2;
        b(l - 1, k - 1) = complexd(0.0, -1.0) * inv_sqrt2;
      } else if (k < d) {
        const double norm = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
        for (int q = 0; q < k; ++q) b(q, q) = norm;
        b(k, k) = -static_cast<double>(k) * norm;
      } else {
        b = MatrixXcd::Identity(d, d) / std::sqrt(static_cast<double>(d));
      }
      basis.push_back(std::move(b));
    }
  }
  return basis;
}

MatrixXcd GellMannCoeffs::hermitian() const {
  require(c.size() == static_cast<Eigen::Index>(d) * d, "GellMannCoeffs: wrong length");
  const auto basis = gellmann_basis(d);
  MatrixXcd h = MatrixXcd::Zero(d, d);
  for (Eigen::Index a = 0; a < c.size(); ++a) h += c(a) * basis[a];
  return h;
}

MatrixXcd unitary_from_coeffs(const GellMannCoeffs& coeffs) {
  const MatrixXcd h = coeffs.hermitian();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const VectorXd phi = es.eigenvalues();
  VectorXcd phases(phi.size());
  for (Eigen::Index k = 0; k < phi.size(); ++k)
    phases(k) = std::exp(complexd(0.0, phi(k)));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

GellMannCoeffs coeffs_from_unitary(const MatrixXcd& v, double tol) {
  require(v.rows() == v.cols(), "coeffs_from_unitary: matrix must be square");
  require(is_unitary(v, tol), "coeffs_from_unitary: input is not unitary");
  const int d = static_cast<int>(v.rows());
  // Schur form of a normal matrix: Q is exactly unitary, T is (numerically)
  // diagonal, so H = Q diag(arg T_kk) Q^dagger is Hermitian by construction.
  Eigen::ComplexSchur<MatrixXcd> schur(v);
  const MatrixXcd& q = schur.matrixU();
  VectorXd phi(d);
  for (int k = 0; k < d; ++k) {
    double a = std::arg(schur.matrixT()(k, k));
    if (a <= -M_PI) a += 2.0 * M_PI;  // branch convention: phi in (-pi, pi]
    phi(k) = a;
  }
  MatrixXcd h = q * phi.asDiagonal().toDenseMatrix().cast<complexd>() * q.adjoint();
  h = (h + h.adjoint()) / 2.0;
  GellMannCoeffs out;
  out.d = d;
  out.c.resize(d * d);
  const auto basis = gellmann_basis(d);
  for (std::size_t a = 0; a < basis.size(); ++a)
    out.c(static_cast<Eigen::Index>(a)) = (h * basis[a]).trace().real();
  return out;
}

MatrixXcd unitary_completion(const MatrixXcd& m, double tol) {
  const Eigen::Index r = m.rows(), c = m.cols();
  const MatrixXcd gram = MatrixXcd::Identity(c, c) - m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gram);
  require(es.eigenvalues().minCoeff() > -tol, "unitary_completion: spectral norm exceeds 1");
  // eigenvalue noise at the 1e-16 scale would blow up to 1e-8 under sqrt
  VectorXd clipped = (es.eigenvalues().array() < 1e-12).select(0.0, es.eigenvalues());
  const MatrixXcd sqrt_gram = es.eigenvectors() *
                              clipped.cwiseSqrt().asDiagonal().toDenseMatrix().cast<complexd>() *
                              es.eigenvectors().adjoint();
  MatrixXcd iso(r + c, c);
  iso.topRows(r) = m;
  iso.bottomRows(c) = sqrt_gram;
  // Orthonormal basis of the orthogonal complement of the range.
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(iso);
  MatrixXcd qfull = qr.householderQ();
  MatrixXcd u(r + c, r + c);
  u.leftCols(c) = iso;
  u.rightCols(r) = qfull.rightCols(r);
  // Project the completion columns off the isometry range to absorb the
  // rounding left by QR.
  MatrixXcd tail = u.rightCols(r) - iso * (iso.adjoint() * u.rightCols(r));
  Eigen::HouseholderQR<MatrixXcd> reortho(tail);
  u.rightCols(r) =
      reortho.householderQ() * MatrixXcd::Identity(r + c, r);
  return u;
}

}  // namespace bosonstat::linopt
