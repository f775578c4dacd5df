#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "meanscope/ensembles.hpp"
#include "meanscope/errors.hpp"
#include "meanscope/loewner.hpp"

using namespace meanscope;
using MatC = DenseMatrix<cplx>;

TEST_CASE("draws are deterministic in the seed") {
  EnsembleSpec spec{5, 2, Field::Complex, 1e4, 123};
  Ensemble x(spec), y(spec);
  for (int k = 0; k < 3; ++k) CHECK((x.pd().matrix() - y.pd().matrix()).norm() == 0.0);
  spec.seed = 124;
  CHECK((random_pd(spec).matrix() - Ensemble({5, 2, Field::Complex, 1e4, 123}).pd().matrix())
            .norm() > 0.0);
  CHECK(child_seed(1, 2) == child_seed(1, 2));
  CHECK(child_seed(1, 2) != child_seed(1, 3));
  CHECK(child_seed(1, 2) != child_seed(2, 2));
}

TEST_CASE("spectrum bounds") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto one = random_pd({1, 1, Field::Complex, 100.0, seed});
    CHECK(one.size() == 1);
    CHECK(one.min_eigenvalue() >= 0.1 * (1 - 1e-12));
    CHECK(one.max_eigenvalue() <= 10.0 * (1 + 1e-12));

    auto a = random_pd({6, 1, Field::Complex, 1e4, seed});
    CHECK(a.condition() <= 1e4 * 1.01);
    // Stored spectrum agrees with a fresh factorization.
    auto fresh = eig_hermitian(a.hermitian());
    CHECK((fresh.eigenvalues - a.spectrum().eigenvalues).norm() <= 1e-10 * a.max_eigenvalue());
  }
  auto ident = random_pd({4, 1, Field::Complex, 1.0, 3});
  CHECK((ident.matrix() - MatC::Identity(4, 4)).norm() <= 1e-13);
}

TEST_CASE("tuples and ordered pairs") {
  Ensemble ens({3, 4, Field::Complex, 1e4, 8});
  CHECK(ens.pd_tuple().size() == 4);
  for (int k = 0; k < 50; ++k) {
    auto [a, b] = ens.ordered_pair();
    CHECK(loewner_leq(a.hermitian(), b.hermitian(), 1e-12).holds);
  }
  auto seq = ens.positive_sequence(7);
  CHECK(seq.size() == 7);
  for (double v : seq) CHECK((v >= 1e-2 && v <= 1e2));
}

TEST_CASE("real field draws are real") {
  Ensemble ens({5, 1, Field::Real, 1e4, 21});
  CHECK(ens.pd().matrix().imag().norm() == 0.0);
  CHECK(ens.invertible().imag().norm() == 0.0);
  auto [a, b] = ens.ordered_pair();
  CHECK(b.matrix().imag().norm() == 0.0);
  CHECK(parse_field("real") == Field::Real);
  CHECK(to_string(Field::Complex) == "complex");
  CHECK_THROWS_AS(parse_field("quaternion"), PreconditionError);
}

TEST_CASE("invertible congruence factors") {
  Ensemble ens({5, 1, Field::Complex, 1e4, 4});
  for (int k = 0; k < 10; ++k) {
    MatC c = ens.invertible(2.0);
    Eigen::JacobiSVD<MatC> svd(c);
    CHECK(svd.singularValues().maxCoeff() <= 2.0 * (1 + 1e-12));
    CHECK(svd.singularValues().minCoeff() >= 0.5 * (1 - 1e-12));
  }
}

TEST_CASE("region predicates") {
  CHECK(in_region(Region::Callebaut, {0.4, 0.1}));
  CHECK(in_region(Region::Callebaut, {0.6, 0.9}));
  CHECK_FALSE(in_region(Region::Callebaut, {0.1, 0.4}));
  CHECK_FALSE(in_region(Region::Callebaut, {0.6, 0.4}));
  CHECK(in_region(Region::Between, {0.5, 0.2}));
  CHECK(in_region(Region::Between, {0.5, 0.8}));
  CHECK_FALSE(in_region(Region::Between, {0.1, 0.2}));
  CHECK(in_region(Region::Unit, {0.0, 1.0}));
  CHECK_FALSE(in_region(Region::Unit, {-0.1, 0.5}));

  CHECK(parse_region("callebaut") == Region::Callebaut);
  CHECK(to_string(Region::Between) == "between");
  CHECK_THROWS_AS(parse_region("annulus"), PreconditionError);
}

TEST_CASE("region sampling stays in region") {
  std::mt19937_64 rng(31);
  for (Region r : {Region::Callebaut, Region::Between, Region::Unit})
    for (int k = 0; k < 200; ++k) CHECK(in_region(r, sample_region(r, rng)));
  for (int k = 0; k < 200; ++k) {
    const double s = sample_between(0.2, rng);
    CHECK((s >= 0.2 && s <= 0.8));
  }
  CHECK(sample_region(Region::Unit, 5).s == sample_region(Region::Unit, 5).s);
}

TEST_CASE("boundary points") {
  for (Region r : {Region::Callebaut, Region::Between, Region::Unit})
    for (auto p : boundary_points(r, 0.3)) CHECK(in_region(r, p));
  auto between = boundary_points(Region::Between, 0.3);
  bool has_mirror = false;
  for (auto p : between) has_mirror |= (std::abs(p.s - 0.7) < 1e-15 && p.t == 0.3);
  CHECK(has_mirror);
  auto callebaut = boundary_points(Region::Callebaut, 0.3);
  bool has_diag = false, has_half = false;
  for (auto p : callebaut) {
    has_diag |= (p.s == 0.3 && p.t == 0.3);
    has_half |= (p.s == 0.5 && p.t == 0.5);
  }
  CHECK(has_diag);
  CHECK(has_half);
}
