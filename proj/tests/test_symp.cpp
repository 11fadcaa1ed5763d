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

#include <gtest/gtest.h>

#include <random>

#include "hwr/symp/module.hpp"
#include "hwr/symp/space.hpp"
#include "hwr/symp/torus.hpp"

using namespace hwr;

namespace {

FqMatrix random_matrix(const Field& f, std::size_t n, std::mt19937_64& rng) {
  FqMatrix m(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = f.elem(rng() % f.q());
  return m;
}

struct Case {
  std::uint32_t p;
  unsigned m;
  std::size_t n;
};

std::vector<Case> torus_cases() { return {{3, 1, 1}, {5, 1, 1}, {7, 1, 1}, {3, 2, 1}, {3, 1, 2}, {5, 1, 2}, {7, 1, 2}, {3, 2, 2}, {3, 1, 3}}; }

}  // namespace

TEST(Matrix, CharpolyMatchesDeterminantAtEveryPoint) {
  std::mt19937_64 rng(1);
  for (const auto& f : {Field::prime(5), Field::prime(7), Field::extension(3, 2)}) {
    PolyRing R(f);
    for (std::size_t n : {1u, 2u, 3u, 4u, 6u}) {
      for (int trial = 0; trial < 5; ++trial) {
        FqMatrix a = random_matrix(f, n, rng);
        if (trial == 0) a = FqMatrix(f, n, n);  // zero matrix hits the no-pivot branch
        Poly cp = a.charpoly();
        EXPECT_EQ(cp.degree(), static_cast<int>(n));
        for (std::uint64_t c = 0; c < f.q(); ++c) {
          FqMatrix shifted = FqMatrix::identity(f, n).scaled(f.elem(c)) - a;
          ASSERT_EQ(R.eval(cp, f.elem(c)), shifted.det());
        }
      }
    }
  }
}

TEST(Matrix, InverseNullspaceSolve) {
  std::mt19937_64 rng(2);
  auto f = Field::prime(7);
  for (int trial = 0; trial < 30; ++trial) {
    FqMatrix a = random_matrix(f, 4, rng);
    if (a.det().code) {
      EXPECT_TRUE((a * a.inverse()).is_identity());
    } else {
      EXPECT_THROW(a.inverse(), DomainError);
    }
    auto ns = a.nullspace();
    EXPECT_EQ(ns.size() + a.rank(), 4u);
    for (auto& v : ns) EXPECT_TRUE(vec_is_zero(a * v));
    FqVector x = vec_from_ints(f, {1, 2, 3, 4});
    auto sol = a.solve(a * x);
    ASSERT_TRUE(sol.has_value());
    EXPECT_EQ(a * *sol, a * x);
  }
}

TEST(Space, StandardGramAndOmega) {
  auto f = Field::prime(5);
  SympSpace s(f, 2);
  EXPECT_TRUE(s.is_standard());
  // omega((a, b), (a', b')) = a.b' - b.a'
  FqVector u = vec_from_ints(f, {1, 2, 3, 4}), v = vec_from_ints(f, {0, 1, 1, 2});
  EXPECT_EQ(s.omega(u, v), f.from_int(1 * 1 + 2 * 2 - 3 * 0 - 4 * 1));
  EXPECT_EQ(s.omega(u, v), f.neg(s.omega(v, u)));
}

TEST(Space, NonStandardGramHasSymplecticBasis) {
  auto f = Field::prime(7);
  FqMatrix g = FqMatrix::from_ints(f, 4, 4, {0, 1, 2, 3, -1, 0, 4, 5, -2, -4, 0, 6, -3, -5, -6, 0});
  SympSpace s(f, g);
  EXPECT_EQ(s.symplectic_basis().transpose() * g * s.symplectic_basis(), standard_gram(f, 2));
  EXPECT_THROW(SympSpace(f, FqMatrix::identity(f, 4)), DomainError);
  auto t = build_maximal_torus(s, TorusKind::parse("split,inert", 2));
  EXPECT_EQ(t.size(), 6u * 8u);
  auto ms = module_structure(t);
  EXPECT_EQ(sorted_kind(ms.kind()), sorted_kind(TorusKind::parse("split,inert", 2)));
}

TEST(Space, SymplecticTranspose) {
  std::mt19937_64 rng(3);
  auto f = Field::prime(5);
  SympSpace s(f, 2);
  EXPECT_TRUE(symplectic_transpose(s, s.identity()).is_identity());
  for (int trial = 0; trial < 20; ++trial) {
    FqMatrix r = random_matrix(f, 4, rng), q = random_matrix(f, 4, rng);
    EXPECT_EQ(symplectic_transpose(s, r * q), symplectic_transpose(s, q) * symplectic_transpose(s, r));
    FqVector u = vec_from_index(f, 4, rng() % 625), v = vec_from_index(f, 4, rng() % 625);
    EXPECT_EQ(s.omega(r * v, u), s.omega(v, symplectic_transpose(s, r) * u));
    FqMatrix g = random_symplectic(s, rng);
    ASSERT_TRUE(s.is_symplectic(g));
    EXPECT_EQ(symplectic_transpose(s, g), g.inverse());
    EXPECT_NO_THROW(SympGroupElement(s, g));
  }
  EXPECT_THROW(SympGroupElement(s, FqMatrix::identity(f, 4).scaled(f.from_int(2))), DomainError);
}

TEST(Torus, OrdersOfBasicTori) {
  auto f5 = Field::prime(5);
  SympSpace sl2(f5, 1);
  EXPECT_EQ(build_maximal_torus(sl2, TorusKind::parse("split", 1)).size(), 4u);
  EXPECT_EQ(build_maximal_torus(sl2, TorusKind::parse("inert", 1)).size(), 6u);
  SympSpace sp4(Field::prime(3), 2);
  EXPECT_EQ(build_maximal_torus(sp4, TorusKind::parse("irr", 2)).size(), 10u);
  EXPECT_THROW(build_maximal_torus(sp4, TorusKind::parse("split", 2)), DomainError);
  EXPECT_THROW(TorusKind::parse("bogus", 1), DomainError);
}

TEST(Torus, AllKindsAreCommutativeSymplecticAndSelfCentralizing) {
  for (auto [p, m, n] : torus_cases()) {
    Field f = Field::extension(p, m);
    SympSpace s(f, n);
    for (const auto& kind : TorusKind::all(n)) {
      auto t = build_maximal_torus(s, kind);
      ASSERT_EQ(t.size(), kind.order(f.q())) << kind.to_string();
      EXPECT_TRUE(t.element(0).is_identity());
      for (std::size_t i = 0; i < t.size(); i += 1 + t.size() / 16) {
        ASSERT_TRUE(s.is_symplectic(t.element(i)));
        for (std::size_t j = 0; j < t.size(); j += 1 + t.size() / 8)
          ASSERT_EQ(t.element(i) * t.element(j), t.element(j) * t.element(i));
        // closure: product and inverse stay in the enumeration
        EXPECT_TRUE(t.find(t.element(i).inverse()).has_value());
      }
      if (nt::ipow(f.q(), static_cast<unsigned>(n)) <= 81) {
        if (kind.is_maximal(f.q())) {
          EXPECT_EQ(centralizer_order_in_sp(t), t.size()) << f.name() << " " << kind.to_string();
        } else {
          EXPECT_GT(centralizer_order_in_sp(t), t.size());
          EXPECT_THROW(module_structure(t), DomainError);
        }
      }
    }
  }
}

TEST(Torus, CentralizerOfCatMapMod7) {
  auto f = Field::prime(7);
  SympSpace s(f, 1);
  FqMatrix a = FqMatrix::from_ints(f, 2, 2, {2, 1, 1, 1});
  auto t = centralizer_torus(s, a);
  EXPECT_EQ(t.size(), 8u);
  EXPECT_TRUE(t.find(a).has_value());
  ASSERT_TRUE(t.kind().has_value());
  EXPECT_EQ(t.kind()->to_string(), "inert");
  for (auto& g : t.elements())
    for (auto& h : t.elements()) ASSERT_EQ(g * h, h * g);
  EXPECT_THROW(centralizer_torus(s, s.identity()), DomainError);
  FqMatrix unip = FqMatrix::from_ints(f, 2, 2, {1, 1, 0, 1});
  EXPECT_THROW(centralizer_torus(s, unip), DomainError);
}

TEST(Torus, CentralizerOfRandomRegularElements) {
  std::mt19937_64 rng(4);
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::size_t>>{{5, 2}, {7, 2}, {3, 2}, {3, 3}, {11, 1}}) {
    auto f = Field::prime(p);
    SympSpace s(f, n);
    int built = 0;
    for (int trial = 0; trial < 30 && built < 6; ++trial) {
      FqMatrix g = random_symplectic(s, rng);
      PolyRing R(f);
      if (!R.is_squarefree(g.charpoly())) continue;
      auto t = centralizer_torus(s, g);
      ++built;
      EXPECT_TRUE(t.find(g).has_value());
      ASSERT_TRUE(t.kind().has_value());
      EXPECT_EQ(t.size(), t.kind()->order(f.q()));
      auto ms = module_structure(t);
      EXPECT_EQ(sorted_kind(ms.kind()), sorted_kind(*t.kind()));
      if (nt::ipow(p, static_cast<unsigned>(n)) <= 81) {
        EXPECT_EQ(centralizer_order_in_sp(t), t.size());
      }
    }
    EXPECT_GT(built, 0);
  }
}

TEST(Module, InvariantsForAllKinds) {
  for (auto [p, m, n] : torus_cases()) {
    Field f = Field::extension(p, m);
    SympSpace s(f, n);
    for (const auto& kind : TorusKind::all(n)) {
      if (!kind.is_maximal(f.q())) continue;
      auto t = build_maximal_torus(s, kind);
      auto ms = module_structure(t);
      EXPECT_EQ(sorted_kind(ms.kind()), sorted_kind(kind)) << f.name() << " " << kind.to_string();
      std::size_t total = 0;
      for (std::size_t a = 0; a < ms.blocks().size(); ++a) {
        const auto& b = ms.blocks()[a];
        EXPECT_EQ(b.basis.size(), 2u * b.kind.degree);
        EXPECT_EQ(b.K.q(), nt::ipow(f.q(), b.kind.degree));
        total += b.kind.degree;
        // T-invariance and trace compatibility on all elements, exact.
        for (std::size_t gi = 0; gi < t.size(); gi += 1 + t.size() / 12) {
          const FqMatrix& g = t.element(gi);
          for (auto& u : b.basis)
            for (auto& v : b.basis) {
              ASSERT_EQ(ms.omega_bar(a, g * u, g * v), ms.omega_bar(a, u, v));
              ASSERT_EQ(b.kbasis->embedding().trace(ms.omega_bar(a, u, v)), s.omega(u, v));
            }
          // torus elements act K-linearly with determinant 1
          auto km = ms.kmatrix(a, g);
          const Field& K = b.K;
          ASSERT_EQ(K.sub(K.mul(km[0], km[3]), K.mul(km[1], km[2])), K.one());
        }
        // K-coordinates round trip
        for (auto& v : b.basis) {
          auto [k1, k2] = ms.kcoords(a, v);
          EXPECT_EQ(ms.from_kcoords(a, k1, k2), v);
        }
      }
      EXPECT_EQ(total, n);
    }
  }
}

TEST(Module, SplitTorusInSl2HasKEqualBaseField) {
  auto f = Field::prime(7);
  SympSpace s(f, 1);
  auto ms = module_structure(build_maximal_torus(s, TorusKind::parse("split", 1)));
  ASSERT_EQ(ms.rank(), 1u);
  EXPECT_EQ(ms.blocks()[0].K.q(), 7u);
  FqVector u = vec_from_ints(f, {1, 3}), v = vec_from_ints(f, {2, 5});
  EXPECT_EQ(ms.omega_bar(0, u, v).code, s.omega(u, v).code);
}

TEST(Module, IrreducibleTorusGivesSingleFieldOfDegreeN) {
  for (auto [p, n] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 2}, {5, 2}, {7, 2}, {3, 3}}) {
    SympSpace s(Field::prime(p), n);
    auto ms = module_structure(build_maximal_torus(s, TorusKind::parse("irr", n)));
    ASSERT_EQ(ms.rank(), 1u);
    EXPECT_EQ(ms.blocks()[0].kind.degree, n);
    EXPECT_EQ(ms.blocks()[0].basis.size(), 2 * n);  // dim_K V = 2
  }
}

TEST(Module, EmbeddingOfSl2KLandsInSp) {
  std::mt19937_64 rng(5);
  for (auto [p, kind] : std::vector<std::pair<std::uint32_t, std::string>>{{3, "irr"}, {5, "irr"}, {5, "split,inert"}, {3, "split2"}}) {
    SympSpace s(Field::prime(p), 2);
    auto ms = module_structure(build_maximal_torus(s, TorusKind::parse(kind, 2)));
    std::vector<KMatrix> id;
    for (auto& b : ms.blocks()) id.push_back({b.K.one(), b.K.zero(), b.K.zero(), b.K.one()});
    EXPECT_TRUE(ms.embed(id).is_identity());
    for (std::size_t a = 0; a < ms.rank(); ++a) {
      const Field& K = ms.blocks()[a].K;
      for (int trial = 0; trial < 6; ++trial) {
        FieldElem y = K.elem(rng() % K.q());
        FieldElem t = K.elem(1 + rng() % (K.q() - 1));
        for (KMatrix g : {KMatrix{K.one(), y, K.zero(), K.one()}, KMatrix{K.one(), K.zero(), y, K.one()},
                          KMatrix{t, K.zero(), K.zero(), K.inv(t)}}) {
          auto gs = id;
          gs[a] = g;
          FqMatrix img = ms.embed(gs);
          EXPECT_TRUE(s.is_symplectic(img));
          EXPECT_EQ(ms.kmatrix(a, img), g);
        }
      }
    }
  }
}

TEST(Rank, CheapAndFullPathsAgree) {
  for (auto [p, m, n] : torus_cases()) {
    Field f = Field::extension(p, m);
    SympSpace s(f, n);
    for (const auto& kind : TorusKind::all(n)) {
      if (!kind.is_maximal(f.q())) continue;
      auto t = build_maximal_torus(s, kind);
      auto rr = symplectic_rank(t);
      auto ms = module_structure(t);
      EXPECT_EQ(rr.r, ms.rank()) << f.name() << " " << kind.to_string();
      EXPECT_EQ(sorted_kind(rr.xi), sorted_kind(ms.kind()));
      EXPECT_GE(rr.r, 1u);
      EXPECT_LE(rr.r, n);
    }
    auto irr = symplectic_rank(build_maximal_torus(s, TorusKind::parse("irr", n)));
    EXPECT_EQ(irr.r, 1u);
    TorusKind split;
    for (std::size_t i = 0; i < n; ++i) split.blocks.push_back({BlockKind::Type::Split, 1});
    if (split.is_maximal(f.q())) {
      EXPECT_EQ(symplectic_rank(build_maximal_torus(s, split)).r, n);
    }
  }
}

TEST(Torus, KindJsonRoundTrip) {
  auto k = TorusKind::parse("split,inert2", 3);
  EXPECT_EQ(TorusKind::from_json(k.to_json()), k);
  EXPECT_EQ(k.to_string(), "split,inert2");
  EXPECT_EQ(TorusKind::all(2).size(), 5u);  // split^2, split inert, inert^2, split2, inert2
}
