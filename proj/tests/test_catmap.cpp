// Copyright 2026 The hwr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <gtest/gtest.h>

#include "hwr/catmap/density.hpp"
#include "hwr/catmap/que.hpp"

namespace hwr {
namespace {

const IntMatrix kCat{{2, 1}, {1, 1}};

TEST(ZPoly, CharpolyAndDiscriminant) {
  LatticeAutomorphism a(kCat);
  EXPECT_EQ(a.charpoly(), ZPoly::from_ints({1, -3, 1}));
  EXPECT_EQ(a.disc(), 5);
  EXPECT_EQ(a.charpoly().to_string(), "x^2 - 3x + 1");
  // b^2 - 4c and -4s^3 - 27t^2 for x^3 + s x + t.
  for (std::int64_t b = -3; b <= 3; ++b)
    for (std::int64_t c = -3; c <= 3; ++c) EXPECT_EQ(discriminant(ZPoly::from_ints({c, b, 1})), b * b - 4 * c);
  for (std::int64_t s = -3; s <= 3; ++s)
    for (std::int64_t t = -3; t <= 3; ++t)
      EXPECT_EQ(discriminant(ZPoly::from_ints({t, s, 0, 1})), -4 * s * s * s - 27 * t * t);
}

TEST(ZPoly, CharpolyMatchesCayleyHamilton) {
  // Sp(4, Z) element: f(A) = 0 evaluated in exact integers.
  LatticeAutomorphism a = density_test_element();
  const auto& m = a.mat();
  const std::size_t n = a.dim();
  using Mat = std::vector<std::vector<bigint>>;
  Mat acc(n, std::vector<bigint>(n, 0)), pw(n, std::vector<bigint>(n, 0));
  for (std::size_t i = 0; i < n; ++i) pw[i][i] = 1;
  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) acc[i][j] += a.charpoly()[k] * pw[i][j];
    Mat next(n, std::vector<bigint>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) next[i][j] += pw[i][l] * m[l][j];
    pw = std::move(next);
  }
  for (auto& row : acc)
    for (auto& x : row) EXPECT_EQ(x, 0);
}

TEST(ZPoly, FactorOverQ) {
  auto f1 = ZPoly::from_ints({1, 0, 1}) * ZPoly::from_ints({1, 1, 1});
  auto fs = factor_over_q(f1);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(fs[0] * fs[1], f1);
  auto f2 = ZPoly::from_ints({-1, 1}) * ZPoly::from_ints({2, 1}) * ZPoly::from_ints({3, 0, 1});
  EXPECT_EQ(factor_over_q(f2).size(), 3u);
  // Irreducible over Q but reducible mod every prime: needs the exact path.
  EXPECT_TRUE(is_irreducible_over_q(ZPoly::from_ints({1, 0, -10, 0, 1})));
  EXPECT_TRUE(is_irreducible_over_q(ZPoly::from_ints({1, -3, 1})));
  EXPECT_FALSE(is_irreducible_over_q(ZPoly::from_ints({1, -2, 1})));
  EXPECT_THROW(factor_over_q(ZPoly::from_ints({1, 2})) , std::exception);
}

TEST(Genericity, Examples) {
  auto cat = check_genericity(LatticeAutomorphism(kCat));
  EXPECT_TRUE(cat.regular && cat.strongly_generic && cat.generic);
  auto weyl = check_genericity(LatticeAutomorphism({{0, 1}, {-1, 0}}));
  EXPECT_TRUE(weyl.generic);
  auto id = check_genericity(LatticeAutomorphism({{1, 0}, {0, 1}}));
  EXPECT_FALSE(id.regular || id.generic || id.strongly_generic);
  EXPECT_THROW(LatticeAutomorphism({{2, 0}, {0, 1}}), DomainError);
  EXPECT_THROW(LatticeAutomorphism({{1, 0, 0}}), DomainError);

  // cat + Weyl: two self-dual factors, generic but not strongly generic.
  auto sum = check_genericity(LatticeAutomorphism({{2, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 1, 0}, {0, -1, 0, 0}}));
  EXPECT_TRUE(sum.regular);
  EXPECT_FALSE(sum.strongly_generic);
  EXPECT_TRUE(sum.generic);
  // diag(B, B^{-T}) with B = [[1,1],[1,0]]: x^2 - x - 1 is not self-dual.
  auto split = check_genericity(LatticeAutomorphism({{1, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, -1}}));
  EXPECT_TRUE(split.regular);
  EXPECT_FALSE(split.generic);
}

TEST(Genericity, FromJson) {
  auto a = LatticeAutomorphism::from_json(nlohmann::json::parse(R"({"A": [[2,1],[1,1]]})"));
  EXPECT_EQ(a.mat(), kCat);
  EXPECT_THROW(LatticeAutomorphism::from_json(nlohmann::json::parse(R"({"A": [[2.5,1],[1,1]]})")), DomainError);
  EXPECT_THROW(LatticeAutomorphism::from_json(nlohmann::json::parse(R"({"B": 1})")), std::exception);
}

// g(y) = det(y - S) for the lower-right block S of [[0, I], [-I, S]].
ZPoly s_charpoly(const LatticeAutomorphism& a) {
  const auto& m = a.mat();
  const std::int64_t s11 = m[2][2], s12 = m[2][3], s22 = m[3][3];
  return ZPoly::from_ints({s11 * s22 - s12 * s12, -(s11 + s22), 1});
}

TEST(DensityElement, ShapeAndGenericity) {
  LatticeAutomorphism a = density_test_element();
  EXPECT_EQ(a.N(), 2u);
  auto g = check_genericity(a);
  EXPECT_TRUE(g.strongly_generic);
  EXPECT_TRUE(g.generic);
  // f(x) = x^2 g(x + 1/x): with g = y^2 + u y + v, f = x^4 + u x^3 + (v + 2) x^2 + u x + 1.
  ZPoly gs = s_charpoly(a);
  const bigint u = gs[1], v = gs[0];
  EXPECT_EQ(a.charpoly(), ZPoly({1, u, v + 2, u, 1}));
  EXPECT_FALSE(is_perfect_square(discriminant(gs)));
}

// Oracle: r_p = 2 iff g splits mod p, i.e. disc(g) is a nonzero square.
TEST(RankDensity, MatchesLegendreOracle) {
  LatticeAutomorphism a = density_test_element();
  const bigint dg = discriminant(s_charpoly(a));
  auto rep = rank_density_sweep(a, 3000);
  std::uint64_t checked = 0;
  for (auto& d : rep.primes) {
    if (!d.r) continue;
    Field k = Field::prime(d.p);
    bigint r = dg % d.p;
    if (r < 0) r += d.p;
    const int leg = k.legendre(k.from_int(r.convert_to<std::int64_t>()));
    ASSERT_NE(leg, 0) << d.p;
    EXPECT_EQ(d.r, leg == 1 ? 2u : 1u) << d.p;
    ++checked;
  }
  EXPECT_GT(checked, 400u);
  EXPECT_NEAR(rep.delta(1) + rep.delta(2), 1.0, 1e-12);
  EXPECT_EQ(rep.used() + rep.skipped(), rep.primes.size());
}

TEST(RankDensity, CatMapAlwaysRankOne) {
  auto rep = rank_density_sweep(LatticeAutomorphism(kCat), 2000, 3);
  EXPECT_DOUBLE_EQ(rep.delta(1), 1.0);
  ASSERT_EQ(rep.skipped(), 1u);  // p = 5
  EXPECT_EQ(rep.primes[1].p, 5u);
  EXPECT_EQ(rep.primes[1].skipped_reason, "p divides disc(charpoly)");
}

TEST(RankDensity, DeterministicAcrossJobs) {
  LatticeAutomorphism a = density_test_element();
  auto r1 = rank_density_sweep(a, 5000, 1), r4 = rank_density_sweep(a, 5000, 4);
  EXPECT_EQ(r1.csv_rows(), r4.csv_rows());
  EXPECT_EQ(r1.to_json(), r4.to_json());
}

TEST(WeilTables, MatchDirectEvaluation) {
  for (std::size_t n : {1u, 2u}) {
    SympSpace s(Field::prime(5), n);
    WeilRep rep(s);
    const auto dim = static_cast<Eigen::Index>(rep.dim());
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    Eigen::VectorXcd phi(dim);
    for (auto& x : phi) x = {g(rng), g(rng)};
    phi.normalize();
    Eigen::MatrixXcd m(dim, dim);
    for (auto& x : m.reshaped()) x = {g(rng), g(rng)};
    auto wt = rep.wigner_table(phi);
    auto tt = rep.pi_trace_table(m);
    for (std::uint64_t i = 0; i < rep.dim() * rep.dim(); i += 3) {
      FqVector v = vec_from_index(s.field(), 2 * n, i);
      EXPECT_LE(std::abs(wt[rep.table_index(v)] - wigner(rep, phi, v)), 1e-12);
      EXPECT_LE(std::abs(tt[rep.table_index(v)] - (rep.pi_op(v).matrix() * m).trace()), 1e-10);
    }
  }
}

TEST(HeckeQue, CatMapInertSeven) {
  LatticeAutomorphism a(kCat);
  auto row = hecke_que_experiment(a, 7);
  ASSERT_FALSE(row.skipped());
  EXPECT_EQ(row.torus, "inert");
  EXPECT_EQ(row.torus_order, 8u);
  EXPECT_EQ(row.n_eigenstates, 7u);
  EXPECT_EQ(row.xi_checked, 48u);
  EXPECT_EQ(row.xi_excluded, 0u);
  EXPECT_EQ(row.violations, 0u);
  EXPECT_LE(row.max_abs, 2.0 * std::sqrt(7.0) / 8.0 + 1e-9);
  EXPECT_LT(row.max_eigen_defect, 1e-9);
  EXPECT_TRUE(row.rank_paths_agree);
  EXPECT_EQ(row.observable_violations, 0u);
  EXPECT_GT(row.observable_checks, 0u);
}

// At a split prime the eigenlines of A mod p are the excluded exponents.
TEST(HeckeQue, SplitPrimeExcludesEigenvectors) {
  LatticeAutomorphism a(kCat);
  for (std::uint32_t p : {11u, 19u}) {
    auto row = hecke_que_experiment(a, p);
    EXPECT_EQ(row.torus, "split");
    Field k = Field::prime(p);
    FqMatrix am = a.mod_p(k);
    std::uint64_t eig = 0;
    for (std::uint64_t i = 1; i < std::uint64_t{p} * p; ++i) {
      FqVector v = vec_from_index(k, 2, i);
      if (FqMatrix::from_columns(k, {v, am * v}).rank() == 1) ++eig;
    }
    EXPECT_EQ(row.xi_excluded, eig);
    EXPECT_EQ(eig, 2u * (p - 1));
    EXPECT_EQ(row.xi_checked + row.xi_excluded, std::uint64_t{p} * p - 1);
    EXPECT_EQ(row.violations, 0u) << row.witness;
  }
}

TEST(HeckeQue, SkipsAreRecorded) {
  LatticeAutomorphism a(kCat);
  EXPECT_EQ(hecke_que_experiment(a, 5).skipped_reason, "p divides disc(charpoly)");
  EXPECT_EQ(hecke_que_experiment(a, 3).skipped_reason, "SL(2,F_3) excluded");
  EXPECT_THROW(hecke_que_experiment(a, 9), DomainError);
  EXPECT_THROW(hecke_que_experiment(a, 2), DomainError);
  auto rep = hecke_que_sweep(a, {3, 5, 7}, {}, 2);
  EXPECT_EQ(rep.csv_rows()[1], "5,,,,,p divides disc(charpoly)");
}

TEST(HeckeQue, WindowRestrictsExponents) {
  LatticeAutomorphism a(kCat);
  auto row = hecke_que_experiment(a, 13, XiWindow{3});
  EXPECT_EQ(row.xi_checked + row.xi_excluded, 8u);
}

TEST(HeckeQue, SweepDeterministic) {
  LatticeAutomorphism a(kCat);
  std::vector<std::uint32_t> ps{7, 11, 13, 17};
  auto r1 = hecke_que_sweep(a, ps, {}, 1), r3 = hecke_que_sweep(a, ps, {}, 3);
  EXPECT_EQ(r1.csv_rows(), r3.csv_rows());
  EXPECT_EQ(r1.to_json().dump(), r3.to_json().dump());
  EXPECT_TRUE(r1.rank_paths_agree());
}

TEST(HeckeQue, Sp4ElementSmallPrimes) {
  LatticeAutomorphism a = density_test_element();
  for (std::uint32_t p : {3u, 7u, 11u}) {
    auto row = hecke_que_experiment(a, p);
    if (row.skipped()) continue;
    EXPECT_TRUE(row.rank_paths_agree) << p;
    EXPECT_EQ(row.n_eigenstates, std::uint64_t{p} * p);
    EXPECT_LT(row.max_eigen_defect, 1e-8);
    EXPECT_EQ(row.violations, 0u) << row.witness;
    EXPECT_EQ(row.observable_violations, 0u);
  }
}

TEST(StatisticalStates, CatMapSeven) {
  LatticeAutomorphism a(kCat);
  auto row = statistical_state_experiment(a, 7);
  EXPECT_EQ(row.max_multiplicity, 1u);
  EXPECT_LE(row.max_trace_defect, 1e-10);
  EXPECT_LE(row.max_commutator, 1e-9);
  EXPECT_EQ(row.violations, 0u);
  EXPECT_LE(row.max_abs, 2.0 * std::sqrt(7.0) / 8.0 + 1e-9);
}

TEST(StatisticalStates, SplitAndSp4) {
  for (std::uint32_t p : {11u, 19u}) {
    auto row = statistical_state_experiment(LatticeAutomorphism(kCat), p);
    EXPECT_EQ(row.max_multiplicity, 2u);
    EXPECT_LE(row.max_trace_defect, 1e-10);
    EXPECT_EQ(row.violations, 0u) << row.witness;
  }
  auto row = statistical_state_experiment(density_test_element(), 7);
  EXPECT_LE(row.max_trace_defect, 1e-10);
  EXPECT_EQ(row.max_multiplicity, 2u);
  EXPECT_EQ(row.violations, 0u) << row.witness;
}

}  // namespace
}  // namespace hwr
