#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "meanscope/errors.hpp"
#include "meanscope/hermitian.hpp"
#include "meanscope/loewner.hpp"
#include "meanscope/matrix_functions.hpp"
#include "meanscope/matrix_io.hpp"
#include "meanscope/products.hpp"

using namespace meanscope;
using MatD = DenseMatrix<double>;
using MatC = DenseMatrix<cplx>;

namespace {

MatC random_hermitian(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatC m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
  return (m + m.adjoint()) / 2.0;
}

PDMatrix random_pd(Index n, std::mt19937_64& rng) {
  MatC g = random_hermitian(n, rng);
  return PDMatrix(MatC(g * g.adjoint() + MatC::Identity(n, n)));
}

MatD diag2(double a, double b) {
  MatD m = MatD::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("jacobi eigenvalues of small examples") {
  auto d = eig_hermitian(Hermitian<double>(diag2(3, 1)));
  CHECK(d.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(d.eigenvalues(1) == doctest::Approx(3.0));

  MatD m(2, 2);
  m << 2, 1, 1, 2;
  auto e = eig_hermitian(Hermitian<double>(m));
  CHECK(std::abs(e.eigenvalues(0) - 1.0) < 1e-14);
  CHECK(std::abs(e.eigenvalues(1) - 3.0) < 1e-14);
  CHECK(std::abs(std::abs(e.unitary(0, 0)) - std::sqrt(0.5)) < 1e-14);
}

TEST_CASE("jacobi reconstruction and unitarity") {
  std::mt19937_64 rng(42);
  for (Index n : {1, 2, 5, 8, 16}) {
    HermitianMatrix h(random_hermitian(n, rng));
    auto d = eig_hermitian(h);
    const MatC& u = d.unitary;
    CHECK((u.adjoint() * u - MatC::Identity(n, n)).norm() <= 1e-12);
    CHECK((d.reconstruct() - h.matrix()).norm() <= 1e-12 * std::max(1.0, h.frobenius_norm()));
    for (Index i = 1; i < n; ++i) CHECK(d.eigenvalues(i - 1) <= d.eigenvalues(i));
    // Trace is the eigenvalue sum.
    CHECK(std::abs(d.eigenvalues.sum() - h.trace()) < 1e-12 * (1 + h.frobenius_norm()));
  }
}

TEST_CASE("jacobi reports non-convergence") {
  std::mt19937_64 rng(1);
  HermitianMatrix h(random_hermitian(8, rng));
  JacobiOptions opts;
  opts.max_sweeps = 1;
  CHECK_THROWS_AS(eig_hermitian(h, opts), ConvergenceError);
}

TEST_CASE("hermitian construction rejects non-hermitian input") {
  MatD m(2, 2);
  m << 1, 2, 3, 1;
  CHECK_THROWS_AS(Hermitian<double>{m}, DomainError);
  CHECK_THROWS_AS(Hermitian<double>{MatD(2, 3)}, DimensionError);

  MatC c(2, 2);
  c << cplx(1, 0), cplx(0, 1), cplx(0, 1), cplx(1, 0);
  CHECK_THROWS_AS(HermitianMatrix{c}, DomainError);
  c(1, 0) = cplx(0, -1);
  CHECK_NOTHROW(HermitianMatrix{c});
}

TEST_CASE("positive definite acceptance") {
  CHECK_THROWS_AS(PositiveDefinite<double>{diag2(1, -1)}, DomainError);
  CHECK_THROWS_AS(PositiveDefinite<double>{diag2(1, 0)}, DomainError);
  CHECK_THROWS_AS(PositiveDefinite<double>{diag2(1, 1e-13)}, DomainError);
  PositiveDefinite<double> a(diag2(1, 1e-11));
  CHECK(a.condition() == doctest::Approx(1e11));
}

TEST_CASE("apply_function examples") {
  PositiveDefinite<double> a(diag2(4, 9));
  auto s = apply_function(a, [](double x) { return std::sqrt(x); });
  CHECK((s.matrix() - diag2(2, 3)).norm() < 1e-14);

  std::mt19937_64 rng(3);
  PDMatrix b = random_pd(6, rng);
  auto sq = apply_function(b, [](double x) { return x * x; });
  MatC direct = b.matrix() * b.matrix();
  CHECK((sq.matrix() - direct).norm() <= 1e-12 * direct.norm());

  CHECK_THROWS_AS(apply_function(a, [](double x) { return std::log(x - 5.0); }), DomainError);
}

TEST_CASE("power examples and identities") {
  PositiveDefinite<double> a(diag2(4, 9));
  CHECK((power(a, 0.5).matrix() - diag2(2, 3)).norm() < 1e-14);
  CHECK((power(a, 0.0).matrix() - MatD::Identity(2, 2)).norm() == 0.0);
  CHECK((power(a, 1.0).matrix() - a.matrix()).norm() == 0.0);
  CHECK((power(a, -1.0).matrix() - diag2(0.25, 1.0 / 9)).norm() < 1e-15);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    PDMatrix b = random_pd(5, rng);
    auto c = power(b, 1.0 / 3);
    MatC cube = c.matrix() * c.matrix() * c.matrix();
    CHECK((cube - b.matrix()).norm() <= 1e-10 * b.matrix().norm());

    MatC prod = power(b, 0.3).matrix() * power(b, 0.45).matrix();
    CHECK((prod - power(b, 0.75).matrix()).norm() <= 1e-11 * b.matrix().norm());

    MatC inv = inverse(b).matrix() * b.matrix();
    CHECK((inv - MatC::Identity(5, 5)).norm() <= 1e-10);

    MatC r = meanscope::sqrt(b).matrix();
    CHECK((r * r - b.matrix()).norm() <= 1e-11 * b.matrix().norm());
  }
}

TEST_CASE("congruence") {
  PositiveDefinite<double> a(diag2(2, 5));
  auto same = congruence(MatD::Identity(2, 2), a.hermitian());
  CHECK((same.matrix() - a.matrix()).norm() == 0.0);
  auto scaled = congruence(MatD(2.0 * MatD::Identity(2, 2)), a.hermitian());
  CHECK((scaled.matrix() - 4.0 * a.matrix()).norm() < 1e-14);

  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  MatC c(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) c(i, j) = cplx(g(rng), g(rng));
  auto gram = congruence(c, HermitianMatrix::identity(3));
  CHECK((gram.matrix() - c.adjoint() * c).norm() < 1e-13 * (c.adjoint() * c).norm());

  CHECK_THROWS_AS(congruence(MatD::Identity(3, 3), a.hermitian()), DimensionError);
}

TEST_CASE("kronecker product") {
  MatD bm(2, 2);
  bm << 2, 1, 1, 3;
  Hermitian<double> b(bm);
  auto k = kron(Hermitian<double>::identity(2), b);
  CHECK(k.size() == 4);
  CHECK((k.matrix().topLeftCorner(2, 2) - bm).norm() == 0.0);
  CHECK((k.matrix().bottomRightCorner(2, 2) - bm).norm() == 0.0);
  CHECK(k.matrix().topRightCorner(2, 2).norm() == 0.0);

  auto d = kron(Hermitian<double>(diag2(2, 3)), Hermitian<double>(diag2(5, 7)));
  MatD expect = MatD::Zero(4, 4);
  expect.diagonal() << 10, 14, 15, 21;
  CHECK((d.matrix() - expect).norm() == 0.0);

  std::mt19937_64 rng(11);
  PDMatrix x = random_pd(3, rng), y = random_pd(2, rng);
  PDMatrix xy = kron(x, y);
  auto fresh = eig_hermitian(xy.hermitian());
  CHECK((fresh.eigenvalues - xy.spectrum().eigenvalues).norm() <=
        1e-12 * xy.max_eigenvalue());
  std::vector<double> prods;
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 2; ++j)
      prods.push_back(x.spectrum().eigenvalues(i) * y.spectrum().eigenvalues(j));
  std::sort(prods.begin(), prods.end());
  for (Index i = 0; i < 6; ++i)
    CHECK(std::abs(prods[std::size_t(i)] - fresh.eigenvalues(i)) <= 1e-12 * prods.back());

  CHECK_THROWS_AS(kron(HermitianMatrix::identity(9), HermitianMatrix::identity(8)),
                  ResourceError);
  CHECK_NOTHROW(kron(HermitianMatrix::identity(8), HermitianMatrix::identity(8)));
}

TEST_CASE("hadamard product") {
  std::mt19937_64 rng(13);
  HermitianMatrix a(random_hermitian(4, rng)), b(random_hermitian(4, rng));
  auto ones = HermitianMatrix::symmetrized(MatC::Ones(4, 4));
  CHECK((hadamard(a, ones).matrix() - a.matrix()).norm() == 0.0);
  auto ii = hadamard(HermitianMatrix::identity(3), HermitianMatrix::identity(3));
  CHECK((ii.matrix() - MatC::Identity(3, 3)).norm() == 0.0);

  auto sub = diagonal_block_submatrix(kron(a, b), 4);
  CHECK((sub.matrix() - hadamard(a, b).matrix()).norm() == 0.0);

  CHECK_THROWS_AS(hadamard(a, HermitianMatrix::identity(3)), DimensionError);
}

TEST_CASE("loewner verdicts") {
  auto i2 = Hermitian<double>::identity(2);
  auto v = loewner_leq(i2, 2.0 * i2, 1e-8);
  CHECK(v.holds);
  CHECK(v.margin == doctest::Approx(1.0));

  auto w = loewner_leq(Hermitian<double>(diag2(2, 0)), Hermitian<double>(diag2(1, 1)), 1e-8);
  CHECK_FALSE(w.holds);
  CHECK(w.margin == doctest::Approx(-1.0));

  std::mt19937_64 rng(17);
  HermitianMatrix a(random_hermitian(5, rng));
  auto self = loewner_leq(a, a, 1e-8);
  CHECK(self.holds);
  CHECK(std::abs(self.margin) < 1e-14);

  HermitianMatrix b = a + 1e-12 * HermitianMatrix(random_hermitian(5, rng));
  CHECK(loewner_leq(a, b, 1e-8).holds);
  CHECK(loewner_leq(b, a, 1e-8).holds);
  CHECK(relative_residual(a, b) < 1e-10);

  CHECK(loewner_leq(1.0, 2.0, 1e-12).holds);
  CHECK_FALSE(loewner_leq(2.0, 1.0, 1e-12).holds);
  CHECK_THROWS_AS(loewner_leq(a, HermitianMatrix::identity(2), 1e-8), DimensionError);
}

TEST_CASE("sum of positive definite matrices") {
  std::vector<PositiveDefinite<double>> xs{PositiveDefinite<double>(diag2(1, 2)),
                                           PositiveDefinite<double>(diag2(3, 4))};
  CHECK((sum(xs).matrix() - diag2(4, 6)).norm() == 0.0);
}

TEST_CASE("matrix file round trip") {
  std::mt19937_64 rng(19);
  HermitianMatrix a(random_hermitian(3, rng));
  auto path = (std::filesystem::temp_directory_path() / "meanscope_io_test.json").string();
  write_matrix_file(path, a);
  HermitianMatrix b = read_matrix_file(path);
  CHECK((a.matrix() - b.matrix()).norm() == 0.0);
  std::remove(path.c_str());

  auto real = matrix_from_json(std::string(R"({"n":2,"field":"real","entries":[1,2,2,5]})"));
  CHECK(real(1, 1) == cplx(5, 0));
  CHECK(matrix_to_json(real).find("\"real\"") != std::string::npos);
  CHECK_THROWS(matrix_from_json(std::string(R"({"n":2,"field":"real","entries":[1,2,3,5]})")));
}
