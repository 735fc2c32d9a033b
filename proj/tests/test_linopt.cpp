#include "bosonstat/linopt.hpp"

#include "doctest.h"
#include "helpers.hpp"

using namespace bosonstat;
using namespace bosonstat::linopt;

TEST_CASE("zeta and xi convert between occupations and sites") {
  CHECK(zeta({2, 0, 1}) == SiteList{1, 1, 3});
  CHECK(zeta({0, 0, 0}).empty());
  CHECK(xi({1, 1, 3}, 3) == OccupationList{2, 0, 1});
  CHECK(xi({}, 2) == OccupationList{0, 0});
  CHECK_THROWS_AS(xi({4}, 3), invalid_input);

  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform_below(4));
    OccupationList g(m, 0);
    const int n = static_cast<int>(rng.uniform_below(5));
    for (int p = 0; p < n; ++p) ++g[rng.uniform_below(static_cast<std::uint64_t>(m))];
    CHECK(xi(zeta(g), m) == g);
    SiteList sites;
    for (int p = 0; p < n; ++p)
      sites.push_back(1 + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(m))));
    SiteList sorted = sites;
    std::sort(sorted.begin(), sorted.end());
    CHECK(zeta(xi(sites, m)) == sorted);
  }
}

TEST_CASE("permanent: identity, all-ones, Ryser vs naive, multilinearity") {
  CHECK(permanent(MatrixXcd::Identity(4, 4)).real() == doctest::Approx(1.0));
  CHECK(permanent(MatrixXcd::Ones(2, 2)).real() == doctest::Approx(2.0));
  Rng rng(13);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 4; ++trial) {
      const MatrixXcd m = testutil::random_matrix(rng, n, n);
      const complexd fast = permanent(m);
      const complexd slow = testutil::permanent_naive(m);
      CHECK(std::abs(fast - slow) <= 1e-9 * std::max(1.0, std::abs(slow)));
    }
  }
  // multilinearity: scaling a row scales the permanent
  const MatrixXcd m = testutil::random_matrix(rng, 5, 5);
  MatrixXcd scaled = m;
  const complexd alpha(0.7, -1.3);
  scaled.row(2) *= alpha;
  CHECK(std::abs(permanent(scaled) - alpha * permanent(m)) <= 1e-9);
  CHECK_THROWS_AS(permanent(testutil::random_matrix(rng, 2, 3)), invalid_input);
  CHECK_THROWS_AS(permanent(MatrixXcd::Identity(17, 17)), size_limit_error);
}

TEST_CASE("HOM probabilities on the beam splitter") {
  const MatrixXcd bs = beam_splitter();
  CHECK(bosonic_probability(bs, {1, 2}, {1, 1}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(bosonic_probability(bs, {1, 2}, {2, 0}) == doctest::Approx(0.5));
  CHECK(bosonic_probability(bs, {1, 2}, {0, 2}) == doctest::Approx(0.5));
  CHECK(distinguishable_probability(bs, {1, 2}, {1, 1}) == doctest::Approx(0.5));
}

TEST_CASE("single particle reduces to the Born rule; identity keeps particles put") {
  Rng rng(17);
  const MatrixXcd u = testutil::random_unitary(rng, 4);
  for (int l = 1; l <= 4; ++l) {
    OccupationList g(4, 0);
    g[l - 1] = 1;
    CHECK(bosonic_probability(u, {2}, g) == doctest::Approx(std::norm(u(l - 1, 1))));
  }
  const MatrixXcd id = MatrixXcd::Identity(4, 4);
  const SiteList i{1, 3, 3};
  CHECK(distinguishable_probability(id, i, xi(i, 4)) == doctest::Approx(1.0));
}

TEST_CASE("bosonic and distinguishable distributions are normalized") {
  Rng rng(19);
  for (int n = 1; n <= 3; ++n) {
    for (int m = 3; m <= 5; ++m) {
      const MatrixXcd u = testutil::random_unitary(rng, m);
      SiteList i;
      for (int p = 0; p < n; ++p) i.push_back(p + 1);
      double pb = 0.0, pd = 0.0;
      for (const auto& g : enumerate_occupations(n, m)) {
        pb += bosonic_probability(u, i, g);
        pd += distinguishable_probability(u, i, g);
      }
      CHECK(pb == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(pd == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  // repeated inputs
  const MatrixXcd u = testutil::random_unitary(rng, 4);
  const SiteList rep{2, 2};
  double pb = 0.0, pd = 0.0;
  for (const auto& g : enumerate_occupations(2, 4)) {
    pb += bosonic_probability(u, rep, g);
    pd += distinguishable_probability(u, rep, g);
  }
  CHECK(pb == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pd == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("full bunching is n! times larger for bosons than distinguishable particles") {
  Rng rng(23);
  for (int n = 2; n <= 4; ++n) {
    const int m = n + 2;
    const MatrixXcd u = testutil::random_unitary(rng, m);
    SiteList i;
    for (int p = 0; p < n; ++p) i.push_back(p + 1);
    for (int j = 1; j <= m; ++j) {
      OccupationList g(m, 0);
      g[j - 1] = n;
      const double pb = bosonic_probability(u, i, g);
      const double pd = distinguishable_probability(u, i, g);
      const double fact = static_cast<double>(symrep::factorial(n));
      CHECK(pb == doctest::Approx(fact * pd).epsilon(1e-9));
    }
  }
}

TEST_CASE("Gell-Mann basis is Hermitian and Hilbert-Schmidt orthonormal") {
  for (int d = 1; d <= 6; ++d) {
    const auto basis = gellmann_basis(d);
    CHECK(basis.size() == static_cast<std::size_t>(d) * d);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      CHECK((basis[a] - basis[a].adjoint()).cwiseAbs().maxCoeff() <= 1e-14);
      for (std::size_t b = 0; b < basis.size(); ++b) {
        const complexd ip = (basis[a].adjoint() * basis[b]).trace();
        CHECK(std::abs(ip - (a == b ? complexd(1.0) : complexd(0.0))) <= 1e-12);
      }
    }
  }
  const auto single = gellmann_basis(1);
  CHECK(std::abs(single[0](0, 0) - complexd(1.0)) <= 1e-15);
}

TEST_CASE("unitary_from_coeffs and coeffs_from_unitary round trip") {
  GellMannCoeffs zero;
  zero.d = 3;
  zero.c = VectorXd::Zero(9);
  CHECK((unitary_from_coeffs(zero) - MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(coeffs_from_unitary(MatrixXcd::Identity(3, 3)).c.cwiseAbs().maxCoeff() <= 1e-12);

  Rng rng(29);
  for (int d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      GellMannCoeffs c;
      c.d = d;
      c.c.resize(d * d);
      for (int a = 0; a < d * d; ++a) c.c(a) = 0.4 * testutil::gaussian(rng) / d;
      const MatrixXcd h = c.hermitian();
      CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
      // Frobenius norm of H equals the coefficient 2-norm
      CHECK(h.norm() == doctest::Approx(c.c.norm()).epsilon(1e-10));
      const MatrixXcd v = unitary_from_coeffs(c);
      CHECK(is_unitary(v, 1e-10));
      // small-norm coefficients stay inside the principal branch
      const GellMannCoeffs back = coeffs_from_unitary(v);
      CHECK((back.c - c.c).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
}

TEST_CASE("coeffs_from_unitary picks the closed branch endpoint at phase pi") {
  MatrixXcd v = MatrixXcd::Identity(2, 2);
  v(0, 0) = complexd(-1.0, 0.0);
  const GellMannCoeffs c = coeffs_from_unitary(v);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c.hermitian());
  CHECK(es.eigenvalues().maxCoeff() == doctest::Approx(M_PI));
  CHECK((unitary_from_coeffs(c) - v).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("round trip through the unitary for log-norm below pi") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    GellMannCoeffs c;
    c.d = 4;
    c.c.resize(16);
    for (int a = 0; a < 16; ++a) c.c(a) = 0.3 * testutil::gaussian(rng);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(c.hermitian());
    if (es.eigenvalues().cwiseAbs().maxCoeff() >= M_PI) continue;
    const MatrixXcd v = unitary_from_coeffs(c);
    const MatrixXcd v2 = unitary_from_coeffs(coeffs_from_unitary(v));
    CHECK((v2 - v).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("unitary_completion embeds a contraction as the top-left block") {
  Rng rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const int r = 2 + static_cast<int>(rng.uniform_below(3));
    const int c = 1 + static_cast<int>(rng.uniform_below(3));
    MatrixXcd m = testutil::random_matrix(rng, r, c);
    Eigen::JacobiSVD<MatrixXcd> svd(m);
    m /= svd.singularValues()(0) * 1.25;  // strict contraction
    const MatrixXcd u = unitary_completion(m);
    CHECK(u.rows() == r + c);
    CHECK(is_unitary(u, 1e-10));
    CHECK((u.topLeftCorner(r, c) - m).cwiseAbs().maxCoeff() <= 1e-10);
  }
  // already unitary input -> block-diagonal completion
  const MatrixXcd w = testutil::random_unitary(rng, 3);
  const MatrixXcd u = unitary_completion(w);
  CHECK(is_unitary(u, 1e-10));
  CHECK((u.topLeftCorner(3, 3) - w).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(u.bottomLeftCorner(3, 3).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(u.topRightCorner(3, 3).cwiseAbs().maxCoeff() <= 1e-10);
  // norm > 1 rejected
  const MatrixXcd big = MatrixXcd::Identity(2, 2) * 1.5;
  CHECK_THROWS_AS(unitary_completion(big), invalid_input);
}
