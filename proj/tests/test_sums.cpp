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

#include "hwr/sums/csum.hpp"

namespace hwr {
namespace {

Torus make(const SympSpace& s, const char* kind) { return build_maximal_torus(s, TorusKind::parse(kind, s.N())); }

TEST(CSum, CharacterSumVanishes) {
  for (auto [p, n, kind] : {std::tuple{7u, 1u, "split"}, {7u, 1u, "inert"}, {5u, 2u, "irr"}, {3u, 2u, "split2"}}) {
    SympSpace s(Field::prime(p), n);
    Torus t = make(s, kind);
    DirectSum ds(t);
    const std::uint64_t total = nt::ipow(p, 2 * n);
    for (std::uint64_t i = 1; i < total; i += 3) {
      cplx sum = 0;
      for (auto c : ds.all(vec_from_index(s.field(), 2 * n, i))) sum += c;
      EXPECT_NEAR(std::abs(sum), 0.0, 1e-8) << p << kind;
    }
  }
}

TEST(CSum, AgreesWithProjectorTraceAndWigner) {
  for (auto [p, n, kind] : {std::tuple{7u, 1u, "split"}, {7u, 1u, "inert"}, {3u, 2u, "irr"}, {5u, 2u, "irr"}}) {
    SympSpace s(Field::prime(p), n);
    const Field& f = s.field();
    Torus t = make(s, kind);
    WeilRep rep(s);
    auto d = decompose(rep, t);
    DirectSum ds(t);
    const std::uint64_t total = nt::ipow(p, 2 * n);
    for (std::uint64_t i = 1; i < total; i += 2) {
      FqVector v = vec_from_index(f, 2 * n, i);
      auto all = ds.all(v);
      for (std::size_t c = 0; c < all.size(); ++c) {
        EXPECT_LE(std::abs(all[c] - c_chi_operator(rep, d, c, v)), 1e-8 * static_cast<double>(t.size()));
        EXPECT_LE(std::abs(all[c]), static_cast<double>(t.size() - 1) + 1e-9);
        if (d.multiplicities[c] == 1) {
          cplx w = wigner(rep, d.eigenbases[c].col(0), v);
          EXPECT_LE(std::abs(all[c] - static_cast<double>(t.size()) * w), 1e-8 * static_cast<double>(t.size()));
        }
      }
    }
  }
}

TEST(CSum, ReducedMatchesDirectRankOne) {
  for (std::uint32_t p : {5u, 7u, 11u}) {
    SympSpace s(Field::prime(p), 1);
    for (const char* kind : {"split", "inert"}) {
      Torus t = make(s, kind);
      auto ms = module_structure(t);
      DirectSum ds(t);
      ReducedSum rs(ms, t);
      for (std::uint64_t i = 1; i < std::uint64_t{p} * p; ++i) {
        FqVector v = vec_from_index(s.field(), 2, i);
        auto a = ds.all(v), b = rs.all(v);
        for (std::size_t c = 0; c < a.size(); ++c) EXPECT_LE(std::abs(a[c] - b[c]), 1e-9);
      }
    }
  }
}

TEST(CSum, ReducedMatchesDirectIrreducibleF3) {
  SympSpace s(Field::prime(3), 2);
  Torus t = make(s, "irr");
  auto ms = module_structure(t);
  DirectSum ds(t);
  ReducedSum rs(ms, t);
  for (std::uint64_t i = 1; i < 81; ++i) {
    FqVector v = vec_from_index(s.field(), 4, i);
    auto a = ds.all(v), b = rs.all(v);
    for (std::size_t c = 0; c < a.size(); ++c) EXPECT_LE(std::abs(a[c] - b[c]), 1e-8);
  }
  auto chars = torus_characters(t);
  FqVector v = vec_from_index(s.field(), 4, 17);
  EXPECT_LE(std::abs(c_chi_direct(t, chars[3], v) - c_chi_reduced(ms, t, chars[3], v)), 1e-8);
  EXPECT_THROW(c_chi_direct(t, chars[0], FqVector(4, s.field().zero())), DomainError);
}

// Product tori have non-identity elements fixing a block, so only the
// reduced path applies; it must match |T| Tr(pi(v) P_chi).
TEST(CSum, ReducedMatchesOperatorOnProductTori) {
  for (std::uint32_t p : {3u, 5u}) {
    SympSpace s(Field::prime(p), 2);
    WeilRep rep(s);
    for (auto& kind : TorusKind::all(2)) {
      if (kind.blocks.size() < 2 || !kind.is_maximal(p)) continue;
      Torus t = build_maximal_torus(s, kind);
      EXPECT_THROW(DirectSum{t}, SingularElementError);
      auto ms = module_structure(t);
      ReducedSum rs(ms, t);
      auto d = decompose(rep, t);
      std::mt19937_64 rng(p);
      for (int k = 0; k < 40; ++k) {
        FqVector v = vec_from_index(s.field(), 4, 1 + rng() % (nt::ipow(p, 4) - 1));
        auto b = rs.all(v);
        const double tol = 1e-8 * std::sqrt(static_cast<double>(rep.dim()));
        for (std::size_t c = 0; c < b.size(); ++c) EXPECT_LE(std::abs(b[c] - c_chi_operator(rep, d, c, v)), tol);
      }
    }
  }
}

TEST(CSum, SingularWitnessNamesTheElement) {
  SympSpace s(Field::prime(5), 2);
  Torus t = make(s, "split,inert");
  try {
    DirectSum ds(t);
    FAIL() << "expected a singular element";
  } catch (const SingularElementError& e) {
    EXPECT_FALSE(t.element(e.index()).is_identity());
    EXPECT_EQ((t.element(e.index()) - s.identity()).det(), s.field().zero());
  }
}

TEST(Admissibility, EigenvectorsOfSplitTorus) {
  SympSpace s(Field::prime(7), 1);
  const Field& f = s.field();
  Torus split = make(s, "split"), inert = make(s, "inert");
  EXPECT_FALSE(is_admissible(split, vec_from_ints(f, {1, 0})));
  EXPECT_FALSE(is_admissible(split, vec_from_ints(f, {0, 3})));
  EXPECT_TRUE(is_admissible(split, vec_from_ints(f, {1, 1})));
  for (std::uint64_t i = 1; i < 49; ++i) EXPECT_TRUE(is_admissible(inert, vec_from_index(f, 2, i)));
  SympSpace s2(Field::prime(5), 2);
  Torus prod = make(s2, "split,inert");
  EXPECT_FALSE(is_admissible(prod, vec_from_ints(s2.field(), {1, 0, 1, 0})));  // inside the first block
  EXPECT_TRUE(is_admissible(prod, vec_from_ints(s2.field(), {1, 1, 1, 1})));
}

// Rank one: |c_chi(v)| <= 2 sqrt(q) for admissible v, both tori, every character.
TEST(BoundReport, RankOneSharpBound) {
  bool eigenvector_exceeds = false;
  for (std::uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
    SympSpace s(Field::prime(p), 1);
    for (const char* kind : {"split", "inert"}) {
      Torus t = make(s, kind);
      BoundOptions opt;
      opt.keep_rows = false;
      auto r = bound_report(t, nullptr, opt);
      EXPECT_TRUE(r.exhaustive);
      EXPECT_EQ(r.vectors, std::uint64_t{p} * p - 1);
      EXPECT_EQ(r.rank, 1u);
      EXPECT_LE(r.max_abs, 2.0 * std::sqrt(p) + 1e-8) << p << kind;
      if (r.max_ratio_inadmissible > 1.0) eigenvector_exceeds = true;
    }
  }
  EXPECT_TRUE(eigenvector_exceeds);
}

// Split torus eigenvector v = e_1: |c_sigma| = q - 2 > 2 sqrt(q) once q >= 11.
TEST(BoundReport, SplitEigenvectorWitness) {
  SympSpace s(Field::prime(11), 1);
  Torus t = make(s, "split");
  auto chars = torus_characters(t);
  auto sig = quadratic_character(t, chars);
  ASSERT_TRUE(sig);
  cplx c = c_chi_direct(t, chars[*sig], vec_from_ints(s.field(), {1, 0}));
  EXPECT_NEAR(std::abs(c), 9.0, 1e-9);
  EXPECT_GT(std::abs(c), 2.0 * std::sqrt(11.0));
}

TEST(BoundReport, IrreducibleRank2IsSharp) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    SympSpace s(Field::prime(p), 2);
    Torus t = make(s, "irr");
    BoundOptions opt;
    opt.keep_rows = false;
    auto r = bound_report(t, nullptr, opt);
    EXPECT_EQ(r.rank, 1u);
    EXPECT_EQ(r.method, "direct");
    EXPECT_EQ(r.admissible_vectors, r.vectors);
    EXPECT_LE(r.max_abs, 2.0 * p + 1e-8) << p;
    EXPECT_LE(r.max_ratio_es, 0.5 + 1e-12) << p;
  }
}

// |c_chi| <= 2^r sqrt(q^N) for every torus type, via the reduced path.
TEST(BoundReport, GeneralRankBound) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    SympSpace s(Field::prime(p), 2);
    for (auto& kind : TorusKind::all(2)) {
      if (!kind.is_maximal(p)) continue;
      Torus t = build_maximal_torus(s, kind);
      auto ms = module_structure(t);
      BoundOptions opt;
      opt.keep_rows = false;
      opt.method = SumMethod::Reduced;
      auto r = bound_report(t, &ms, opt);
      EXPECT_EQ(r.rank, kind.blocks.size());
      EXPECT_LE(r.max_ratio, 1.0 + 1e-9) << p << " " << kind.to_string() << " " << r.to_json().dump();
    }
  }
}

TEST(BoundReport, ExtensionFieldsAndRank3) {
  struct Case {
    std::uint32_t p;
    unsigned m;
    std::size_t n;
  };
  for (auto c : {Case{3, 2, 1}, Case{5, 2, 1}, Case{3, 2, 2}, Case{3, 1, 3}}) {
    SympSpace s(Field::extension(c.p, c.m), c.n);
    Torus t = build_maximal_torus(s, TorusKind::parse("irr", c.n));
    BoundOptions opt;
    opt.keep_rows = false;
    auto r = bound_report(t, nullptr, opt);
    EXPECT_LE(r.max_ratio, 1.0 + 1e-9) << s.field().q() << " N=" << c.n;
  }
}

TEST(BoundReport, EmptyRangeAndDeterminism) {
  SympSpace s(Field::prime(5), 2);
  Torus t = make(s, "irr");
  BoundOptions opt;
  opt.vectors = std::vector<FqVector>{};
  auto r = bound_report(t, nullptr, opt);
  EXPECT_EQ(r.vectors, 0u);
  EXPECT_EQ(r.max_ratio, 0.0);
  EXPECT_TRUE(r.rows.empty());

  BoundOptions a;
  a.exhaustive_limit = 100;  // force the sampled range
  a.sample_size = 200;
  a.seed = 9;
  BoundOptions b = a;
  b.jobs = 3;
  auto ra = bound_report(t, nullptr, a), rb = bound_report(t, nullptr, b);
  EXPECT_FALSE(ra.exhaustive);
  EXPECT_EQ(ra.csv_rows(), rb.csv_rows());
  EXPECT_EQ(ra.to_json(), rb.to_json());
  // weight <= 2 vectors: 4*4 + 6*16 = 112, plus at most 200 samples
  EXPECT_GE(ra.vectors, 112u);
  EXPECT_LE(ra.vectors, 312u);
}

}  // namespace
}  // namespace hwr
