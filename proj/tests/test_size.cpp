#include <gtest/gtest.h>

#include "sizedmu/checks.hpp"

using namespace sizedmu;

namespace {
Signature tree_sig() { return Signature({"leaf", "node"}, {0, 2}); }
}  // namespace

TEST(NatBackend, Basics) {
  SizeBackend k = nat_backend();
  EXPECT_EQ(k.bottom(), SizeIndex::nat(0));
  EXPECT_EQ(k.succ(SizeIndex::nat(3)), SizeIndex::nat(4));
  EXPECT_EQ(k.join(SizeIndex::nat(2), SizeIndex::nat(5)), SizeIndex::nat(6));
  EXPECT_TRUE(k.lt(SizeIndex::nat(2), SizeIndex::nat(3)));
  EXPECT_FALSE(k.lt(SizeIndex::nat(3), SizeIndex::nat(3)));
  EXPECT_TRUE(k.leq(SizeIndex::nat(3), SizeIndex::nat(3)));
  EXPECT_TRUE(k.predecessor_basis(SizeIndex::nat(0)).empty());
  EXPECT_EQ(k.predecessor_basis(SizeIndex::nat(4)), std::vector<SizeIndex>{SizeIndex::nat(3)});
  EXPECT_EQ(k.render(SizeIndex::nat(7)), "7");
  EXPECT_EQ(k.name(), "nat");
}

TEST(PlumpBackend, AugmentedSignature) {
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  EXPECT_EQ(k.name(), "plump:Tree");
  const Signature& a = k.augmented();
  ASSERT_EQ(a.op_count(), 4u);
  EXPECT_EQ(a.name(2), "n");
  EXPECT_EQ(a.name(3), "b");
  EXPECT_EQ(a.arity(3), 2u);
  // clashing names are primed
  SizeBackend k2 = kappa_sigma(Signature({"n", "b"}, {0, 2}), "Clash");
  EXPECT_EQ(k2.augmented().name(2), "n'");
  EXPECT_EQ(k2.augmented().name(3), "b'");
}

TEST(PlumpBackend, OrderIsHeightComparisonOnFiniteTrees) {
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  auto trees = wtype_enumerate(k.augmented(), 3);
  ASSERT_EQ(trees.size(), 202u);
  for (const auto& s : trees)
    for (const auto& t : trees) {
      PlumpVerdict v = plump_compare(s, t);
      EXPECT_EQ(v.lt, height(s) < height(t));
      EXPECT_EQ(v.leq, height(s) <= height(t));
    }
}

TEST(PlumpBackend, BottomJoinSuccStage) {
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  SizeIndex b = k.bottom();
  EXPECT_EQ(k.render(b), "n");
  EXPECT_EQ(k.render(k.succ(b)), "b(n,n)");
  EXPECT_EQ(k.stage(2), k.succ(k.succ(b)));
  for (std::size_t n = 0; n < 5; ++n) EXPECT_EQ(k.rank(k.stage(n)), n);
  SizeIndex leaf = SizeIndex::plump(sup(0));
  SizeIndex j = k.join(leaf, k.stage(2));
  EXPECT_TRUE(k.lt(leaf, j));
  EXPECT_TRUE(k.lt(k.stage(2), j));
  EXPECT_EQ(k.predecessor_basis(j), (std::vector<SizeIndex>{leaf, k.stage(2)}));
}

TEST(PlumpBackend, RejectsForeignIndices) {
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  try {
    k.lt(SizeIndex::nat(0), k.bottom());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ShapeMismatch);
  }
  EXPECT_THROW(k.render(SizeIndex::plump(sup(1, {sup(0)}))), Error);
  EXPECT_THROW(nat_backend().lt(k.bottom(), k.bottom()), Error);
}

TEST(PlumpBackend, OrderLawsOnSamples) {
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  SuiteResult r = order_laws(k, 3000, 4, 7);
  EXPECT_TRUE(r.ok()) << (r.witnesses.empty() ? "" : r.witnesses[0]);
  EXPECT_GT(r.cases, 3000u * 7);
}

TEST(PlumpBackend, BasisSoundnessExhaustive) {
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  auto trees = wtype_enumerate(k.augmented(), 3);
  for (const auto& it : trees) {
    SizeIndex i = SizeIndex::plump(it);
    auto basis = k.predecessor_basis(i);
    for (const auto& jt : trees) {
      SizeIndex j = SizeIndex::plump(jt);
      if (!k.lt(j, i)) continue;
      EXPECT_TRUE(std::any_of(basis.begin(), basis.end(), [&](const SizeIndex& c) { return k.leq(j, c); }));
    }
  }
}

TEST(Filtered, BoundsEveryFamily) {
  Signature tree = tree_sig();
  SizeBackend k = kappa_sigma(tree, "Tree");
  std::mt19937_64 rng(3);
  std::vector<FilteredSample> samples;
  for (int n = 0; n < 500; ++n) {
    std::size_t op = n % 2;
    std::vector<SizeIndex> fam;
    for (std::size_t a = 0; a < tree.arity(op); ++a) fam.push_back(SizeIndex::plump(random_tree(k.augmented(), 3, rng)));
    samples.push_back({op, fam});
  }
  FilteredReport r = filtered_sample_check(k, tree, samples);
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.witnesses.size(), samples.size());
  // a node-family is bounded by the sup of that very op
  EXPECT_EQ(r.witnesses[1].tree().op, 1u);
  // a foreign signature falls back to joins
  Signature three({"t"}, {3});
  FilteredReport r3 = filtered_sample_check(k, three, {{0, {k.bottom(), k.stage(2), k.stage(1)}}});
  EXPECT_TRUE(r3.ok);
  FilteredReport rn = filtered_sample_check(nat_backend(), three, {{0, {SizeIndex::nat(4), SizeIndex::nat(1), SizeIndex::nat(0)}}});
  EXPECT_TRUE(rn.ok);
  EXPECT_EQ(rn.witnesses[0], SizeIndex::nat(5));
  EXPECT_THROW(filtered_sample_check(k, three, {{0, {k.bottom()}}}), Error);
}

TEST(SizeIndex, CanonicalOrderIsTotalAndStructural) {
  SizeIndex a = SizeIndex::plump(sup(0)), b = SizeIndex::plump(sup(1, {sup(0), sup(0)}));
  EXPECT_LT(a, b);
  EXPECT_EQ(a, SizeIndex::plump(sup(0)));
  EXPECT_LT(SizeIndex::nat(9), a);
}
