#include <gtest/gtest.h>

#include "sizedmu/finset.hpp"
#include "oracles.hpp"

using namespace sizedmu;

TEST(FiniteFn, RejectsIllTypedTables) {
  EXPECT_THROW(FiniteFn(FiniteSet(2), FiniteSet(2), {0}), Error);
  try {
    FiniteFn(FiniteSet(2), FiniteSet(2), {0, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IllTypedArrow);
  }
}

TEST(FiniteFn, ComposeIsAssociativeWithIdentities) {
  FiniteSet a(2), b(3), c(2), d(3);
  for (const auto& tf : oracle::all_tables(2, 3))
    for (const auto& tg : oracle::all_tables(3, 2))
      for (const auto& th : oracle::all_tables(2, 3)) {
        FiniteFn f(a, b, tf), g(b, c, tg), h(c, d, th);
        EXPECT_EQ(compose(h, compose(g, f)), compose(compose(h, g), f));
        EXPECT_EQ(compose(f, FiniteFn::identity(a)), f);
        EXPECT_EQ(compose(FiniteFn::identity(b), f), f);
      }
}

TEST(FiniteFn, ComposeRejectsMismatchedSets) {
  FiniteFn f(FiniteSet(2), FiniteSet(3), {0, 1});
  EXPECT_THROW(compose(f, f), Error);
}

TEST(FiniteFn, InverseOfBijections) {
  for (const auto& t : oracle::all_tables(3, 3)) {
    FiniteFn f(FiniteSet(3), FiniteSet(3), t);
    bool bij = std::set<std::size_t>(t.begin(), t.end()).size() == 3;
    EXPECT_EQ(iso_check(f.dom(), f.cod(), f), bij);
    EXPECT_EQ(is_injective(f), bij);
    EXPECT_EQ(is_surjective(f), bij);
    if (bij) {
      EXPECT_EQ(compose(inverse(f), f), FiniteFn::identity(f.dom()));
      EXPECT_EQ(compose(f, inverse(f)), FiniteFn::identity(f.cod()));
    } else {
      EXPECT_THROW(inverse(f), Error);
    }
  }
}

TEST(FiniteSet, LabelsMustBeUnique) {
  EXPECT_THROW(FiniteSet(2, {"a", "a"}), Error);
  EXPECT_THROW(FiniteSet(2, {"a"}), Error);
  FiniteSet s(2, {"a", "b"});
  EXPECT_EQ(s.label(1), "b");
  EXPECT_EQ(s, FiniteSet(2));
}

TEST(Exponential, EncodeDecodeRoundTrip) {
  for (std::size_t base = 0; base <= 3; ++base)
    for (std::size_t e = 0; e <= 3; ++e) {
      Exponential x(base, e);
      std::size_t expect = 1;
      for (std::size_t k = 0; k < e; ++k) expect *= base;
      ASSERT_EQ(x.set().size(), expect);
      for (std::size_t i = 0; i < x.set().size(); ++i) EXPECT_EQ(x.encode(x.decode(i)), i);
    }
  // entry 0 is most significant
  EXPECT_EQ(Exponential(3, 2).decode(1), (std::vector<std::size_t>{0, 1}));
}

TEST(Exponential, CardinalityGuard) {
  try {
    Exponential(2, 40);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
  }
}

TEST(Coproduct, InjectLocate) {
  std::vector<std::size_t> sizes{2, 0, 3};
  Coproduct c(sizes);
  EXPECT_EQ(c.set().size(), 5u);
  for (std::size_t k = 0; k < sizes.size(); ++k)
    for (std::size_t x = 0; x < sizes[k]; ++x) EXPECT_EQ(c.locate(c.inject(k, x)), std::make_pair(k, x));
}

TEST(Product, MixedRadix) {
  std::vector<std::size_t> sizes{2, 3, 2};
  Product p(sizes);
  EXPECT_EQ(p.set().size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) EXPECT_EQ(p.encode(p.decode(i)), i);
  EXPECT_EQ(p.decode(1), (std::vector<std::size_t>{0, 0, 1}));
}

TEST(Quotient, GeneratedEquivalenceMatchesBruteForce) {
  // every relation on a 4-set: the quotient kernel is the reflexive,
  // symmetric, transitive closure computed by naive saturation
  const std::size_t n = 4;
  FiniteSet base(n);
  for (std::size_t bits = 0; bits < (1u << 16); bits += 37) {
    std::set<std::pair<std::size_t, std::size_t>> ps;
    for (std::size_t k = 0; k < 16; ++k)
      if (bits >> k & 1) ps.insert({k / 4, k % 4});
    Quotient q = quotient(base, Relation(base, ps));
    std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) m[a][a] = true;
    for (auto [a, b] : ps) m[a][b] = m[b][a] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          if (m[a][k] && m[k][b]) m[a][b] = true;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) EXPECT_EQ(q.projection(a) == q.projection(b), m[a][b]);
    Relation k = kernel(q.projection);
    EXPECT_TRUE(is_reflexive(k));
    EXPECT_TRUE(is_symmetric(k));
    EXPECT_TRUE(is_transitive(k));
    // classes are numbered by least member and representatives are least
    for (std::size_t c = 0; c < q.classes.size(); ++c) {
      EXPECT_EQ(q.projection(q.representatives[c]), c);
      for (std::size_t x = 0; x < q.representatives[c]; ++x) EXPECT_NE(q.projection(x), c);
      if (c) {
        EXPECT_LT(q.representatives[c - 1], q.representatives[c]);
      }
    }
  }
}

TEST(Json, SetAndFunction) {
  FiniteFn f(FiniteSet(2, {"x", "y"}), FiniteSet(3), {2, 0});
  auto j = to_json(f);
  EXPECT_EQ(j["size"], 2);
  EXPECT_EQ(j["cod"], 3);
  EXPECT_EQ(j["table"], nlohmann::json::array({2, 0}));
  EXPECT_EQ(j["labels"][1], "y");
  EXPECT_FALSE(to_json(FiniteSet(4)).contains("labels"));
}
