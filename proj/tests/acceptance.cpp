// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sizedmu/sizedmu.hpp"
#include "diagram_enum.hpp"
#include "oracles.hpp"

using namespace sizedmu;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  std::vector<std::string> problems;

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

FunctorExpr X() { return fx::identity(); }
Signature tree_sig() { return Signature({"leaf", "node"}, {0, 2}); }
Signature nat_sig() { return Signature({"zero", "succ"}, {0, 1}); }
Groupoid swap2() { return Groupoid{{"pair"}, {2}, {{0, 0, {1, 0}}}}; }

struct Named {
  std::string name;
  FunctorExpr f;
};

std::vector<Named> finitary() {
  return {{"1+X^2", fx::sum({fx::constant(1), fx::power(X(), 2)})},
          {"1+X", fx::sum({fx::constant(1), X()})},
          {"3", fx::constant(3)},
          {"X+X", fx::sum({X(), X()})},
          {"1+sym(X^2)", fx::sum({fx::constant(1), fx::sym(swap2(), "swap2")})}};
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string s;
  for (std::size_t x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

std::vector<std::size_t> nat_stages(const FunctorExpr& f, std::size_t upto) {
  IterationState st(f, nat_backend(), 64);
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n <= upto; ++n) out.push_back(st.object(SizeIndex::nat(n)).size());
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ------------------------------------------------------------------ 1

Outcome order_laws_criterion() {
  Outcome o;
  SizeBackend k = kappa_sigma(tree_sig(), "Tree");
  SuiteResult r = order_laws(k, 10000, 4, 20240601);
  o.expect(r.ok(), r.witnesses.empty() ? "" : r.witnesses.front());
  // same seed and call sequence, so these are the trees order_laws drew
  std::mt19937_64 rng(20240601);
  std::size_t tallest = 0;
  for (int s = 0; s < 10000; ++s) tallest = std::max(tallest, height(random_tree(k.augmented(), 4, rng)));
  o.expect(tallest <= 4, "sampled tree taller than 4");
  o.detail = "10000 trees of height <= 4, " + std::to_string(r.cases) + " law instances, " +
             std::to_string(r.failures) + " failures";
  return o;
}

// ------------------------------------------------------------------ 2

Outcome colimit_criterion() {
  Outcome o;
  std::size_t n = 0;
  auto compare = [&](const std::string& shape, const oracle::RawDiagram& raw) {
    auto expect = oracle::colimit(raw, diagrams::search_order(raw));
    Cocone c = subdiagram_colimit(diagrams::to_diagram(raw));
    bool same = expect && c.apex.size() == expect->blocks && diagrams::library_blocks(c) == expect->block;
    o.expect(same, shape + " sizes " + join(raw.sizes));
    ++n;
  };
  diagrams::for_each(4, [&](const diagrams::Shape& s, const oracle::RawDiagram& raw) { compare(s.name, raw); });
  std::size_t three = n;
  diagrams::for_each_diamond(3, [&](const oracle::RawDiagram& raw) { compare("diamond", raw); });
  o.detail = std::to_string(three) + " diagrams on <= 3 indices with sizes <= 4, " + std::to_string(n - three) +
             " commuting diamonds with sizes <= 3";
  return o;
}

// ------------------------------------------------------------------ 3

Outcome sequence_criterion() {
  Outcome o;
  auto terms = [](const std::vector<std::pair<std::string, std::size_t>>& sig) {
    std::vector<std::size_t> out;
    for (std::size_t n = 0; n <= 4; ++n) out.push_back(oracle::terms(sig, n).size());
    return out;
  };
  std::vector<std::size_t> pairs;
  for (std::size_t n = 0; n <= 4; ++n) pairs.push_back(oracle::unordered_pair_terms(n).size());
  // independent counts of F^n(0) by arithmetic on cardinalities
  auto arith = [](std::function<std::size_t(std::size_t)> f) {
    std::vector<std::size_t> out{0};
    for (std::size_t n = 1; n <= 4; ++n) out.push_back(f(out.back()));
    return out;
  };
  std::vector<std::vector<std::size_t>> expect = {
      terms({{"leaf", 0}, {"node", 2}}),
      terms({{"zero", 0}, {"succ", 1}}),
      arith([](std::size_t) { return 3; }),
      arith([](std::size_t x) { return 2 * x; }),
      pairs,
  };
  o.expect(expect[0] == std::vector<std::size_t>{0, 1, 2, 5, 26}, "binary tree oracle " + join(expect[0]));
  o.expect(pairs == std::vector<std::size_t>{0, 1, 2, 4, 11}, "unordered pair oracle " + join(pairs));
  o.expect(pairs == arith([](std::size_t x) { return 1 + oracle::swap_orbits(x); }), "pair orbit count");
  std::string shown;
  auto fs = finitary();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    std::vector<std::size_t> got = nat_stages(fs[k].f, 4);
    std::vector<std::size_t> direct{0};
    FiniteSet d(0);
    for (std::size_t n = 1; n <= 4; ++n) {
      d = eval_functor(fs[k].f, d);
      direct.push_back(d.size());
    }
    o.expect(got == expect[k], fs[k].name + ": " + join(got) + " vs oracle " + join(expect[k]));
    o.expect(got == direct, fs[k].name + ": " + join(got) + " vs F^n(0) " + join(direct));
    shown += (shown.empty() ? "" : "; ") + fs[k].name + " " + join(got);
  }
  o.detail = shown;
  return o;
}

// ------------------------------------------------------------------ 4

Outcome stationarity_criterion() {
  Outcome o;
  FiniteSet A(3, {"x", "y", "z"});
  MuResult c = mu_initial_algebra(fx::constant(A, "A"), nat_backend(), 8);
  o.expect(c.stationary() && *c.stationary_at == SizeIndex::nat(2), "Constant(A) not stationary at 2");
  if (c.algebra) {
    o.expect(c.algebra->carrier.size() == 3, "carrier of Constant(A) is not 3");
    const FiniteFn& s = c.algebra->structure;
    o.expect(s.dom().size() == 3 && is_injective(s) && is_surjective(s), "iota for Constant(A) not bijective");
    o.expect(c.iota_bijective, "iota flag for Constant(A)");
  }
  MuResult id = mu_initial_algebra(X(), nat_backend(), 8);
  o.expect(id.stationary() && *id.stationary_at == SizeIndex::nat(1), "Identity not stationary at 1");
  o.expect(id.algebra && id.algebra->carrier.size() == 0, "Identity carrier not empty");
  o.detail = "Constant(A), |A| = 3: stationary at " + (c.stationary() ? nat_backend().render(*c.stationary_at) : "-") +
             ", |muF| = " + std::to_string(c.algebra ? c.algebra->carrier.size() : 0) +
             "; Identity: stationary at " + (id.stationary() ? nat_backend().render(*id.stationary_at) : "-");
  return o;
}

// ------------------------------------------------------------------ 5

/// The up-to-i equation checked pointwise against the state's maps.
bool satisfies_upto(IterationState& st, const AlgebraSpec& a, const SizeIndex& i, const FiniteFn& h) {
  for (const auto& j : std::vector<SizeIndex>(st.memoized())) {
    if (!st.backend().lt(j, i)) continue;
    FiniteFn iota = st.iota(j, i);
    FiniteFn fh = eval_functor_mor(st.functor(), compose(h, st.connecting(j, i)));
    for (std::size_t y = 0; y < iota.dom().size(); ++y)
      if (h(iota(y)) != a.structure(fh(y))) return false;
  }
  return true;
}

Outcome cata_criterion() {
  Outcome o;
  std::size_t instances = 0, candidates = 0;
  std::vector<Named> fs = finitary();
  fs.push_back({"2+X", fx::sum({fx::constant(2), X()})});
  fs.push_back({"X", X()});
  std::vector<std::pair<std::string, SizeBackend>> backends = {{"nat", nat_backend()},
                                                               {"plump:Nat", kappa_sigma(nat_sig(), "Nat")}};
  for (const auto& [bname, kappa] : backends)
    for (const auto& [name, f] : fs)
      for (std::size_t a = 0; a <= 2; ++a) {
        FiniteSet A(a);
        FiniteSet fa = eval_functor(f, A);
        for (const auto& table : oracle::all_tables(fa.size(), a)) {
          AlgebraSpec alg{A, FiniteFn(fa, A, table)};
          IterationState st(f, kappa, 64);
          for (std::size_t n = 0; n <= 4; ++n) {
            SizeIndex i = kappa.stage(n);
            if (st.object(i).size() > 3) break;
            FiniteFn lib = catamorphism(st, alg, i);
            std::size_t hits = 0;
            for (const auto& t : oracle::all_tables(st.object(i).size(), a)) {
              FiniteFn h(st.object(i), A, t);
              ++candidates;
              if (satisfies_upto(st, alg, i, h)) {
                ++hits;
                o.expect(h == lib, name + " on " + bname + ": solution differs from the library fold");
              }
            }
            o.expect(hits == 1, name + " on " + bname + ", |A| = " + std::to_string(a) + ", stage " +
                                    kappa.render(i) + ": " + std::to_string(hits) + " solutions");
            ++instances;
          }
        }
      }
  o.detail = std::to_string(instances) + " (algebra, stage) pairs, " + std::to_string(candidates) +
             " candidate maps";
  return o;
}

// ------------------------------------------------------------------ 6

Outcome preservation_criterion() {
  Outcome o;
  std::vector<Named> fs = {{"Id", X()},
                           {"poly<Tree>", fx::container(tree_sig(), "Tree")},
                           {"poly<Nat>", fx::container(nat_sig(), "Nat")},
                           {"poly<a:0|b:3|c:2>", fx::container(Signature({"a", "b", "c"}, {0, 3, 2}), "ABC")}};
  std::size_t chains = 0;
  for (const auto& [name, f] : fs) {
    SuiteResult r = preservation(f, 3, 4);
    o.expect(r.ok(), name + ": " + (r.witnesses.empty() ? "" : r.witnesses.front()));
    chains += r.cases;
  }
  o.detail = std::to_string(chains) + " inclusion chains of length <= 4 over sets of size <= 3, 4 functors";
  return o;
}

// ------------------------------------------------------------------ 7

Outcome plump_criterion() {
  Outcome o;
  std::size_t compared = 0;
  struct Case {
    std::string name;
    Signature sig;
    std::size_t heights;  // indices of height < heights
  };
  std::vector<Case> cases = {{"Nat", nat_sig(), 4}, {"Tree", tree_sig(), 4}};
  for (const auto& c : cases) {
    SizeBackend kappa = kappa_sigma(c.sig, c.name);
    std::vector<WTree> trees = wtype_enumerate(kappa.augmented(), c.heights);
    for (const auto& [fname, f] : finitary()) {
      std::vector<std::size_t> ranks = nat_stages(f, c.heights - 1);
      IterationState st(f, kappa, trees.size() + 1);
      for (const auto& t : trees) {
        SizeIndex i = SizeIndex::plump(t);
        std::size_t r = kappa.rank(i);
        o.expect(r == height(t), "rank differs from height for " + kappa.render(i));
        o.expect(st.object(i).size() == ranks[r], fname + " at " + kappa.render(i) + ": " +
                                                       std::to_string(st.object(i).size()) + " vs " +
                                                       std::to_string(ranks[r]));
        ++compared;
      }
    }
  }
  o.detail = std::to_string(compared) + " (functor, index) pairs, every index of height <= 3 over Nat' and Tree'";
  return o;
}

// ------------------------------------------------------------------ 8

Outcome nu_criterion() {
  Outcome o;
  NuResult s = deflationary_nu(fx::product({fx::constant(2), X()}), 4);
  std::vector<std::size_t> powers;
  for (std::size_t n = 0, p = 1; n < 4; ++n, p *= 2) powers.push_back(p);
  o.expect(s.sizes == powers, "2*X stages " + join(s.sizes));
  o.expect(s.budget_exceeded && !s.stationary(), "2*X should not stabilise");
  FiniteSet A(3);
  NuResult c = deflationary_nu(fx::constant(A), 8);
  o.expect(c.stationary() && c.carrier.size() == 3, "Constant(A) not stationary with 3 elements");
  if (c.structure) o.expect(is_injective(*c.structure) && is_surjective(*c.structure), "structure not bijective");
  NuResult id = deflationary_nu(X(), 8);
  o.expect(id.stationary() && id.carrier.size() == 1, "Identity not terminal");
  o.detail = "2*X: " + join(s.sizes) + "; Constant(A): |nu| = " + std::to_string(c.carrier.size()) +
             "; Identity: |nu| = " + std::to_string(id.carrier.size());
  return o;
}

// ------------------------------------------------------------------ 9

Outcome determinism_criterion() {
  Outcome o;
  std::size_t scripts = 0;
  std::vector<std::filesystem::path> files;
  for (const char* dir : {SIZEDMU_SAMPLES_DIR, SIZEDMU_SCRIPTS_DIR})
    for (const auto& e : std::filesystem::directory_iterator(dir))
      if (e.path().extension() == ".smu") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    std::string src = slurp(f);
    std::string a = render(run_source(src), "json"), b = render(run_source(src), "json");
    o.expect(a == b, f.filename().string() + " differs between runs");
    ++scripts;
  }
  // two independent iteration states over the same targets
  SizeBackend kappa = kappa_sigma(tree_sig(), "Tree");
  for (const auto& [name, f] : finitary()) {
    IterationState s1(f, kappa, 64), s2(f, kappa, 64);
    for (std::size_t n = 0; n <= 3; ++n) {
      s1.compute(kappa.stage(n));
      s2.compute(kappa.stage(n));
    }
    o.expect(to_json(s1.profile()) == to_json(s2.profile()), name + " profiles differ");
    for (const auto& i : std::vector<SizeIndex>(s1.memoized()))
      o.expect(s1.object(i) == s2.object(i) && to_json(s1.cocone(i)) == to_json(s2.cocone(i)),
               name + " stage " + kappa.render(i) + " differs");
  }
  o.detail = std::to_string(scripts) + " scripts rendered twice, byte-identical JSON";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "order laws", order_laws_criterion},
      {2, "colimit oracle", colimit_criterion},
      {3, "inflationary vs classical chain", sequence_criterion},
      {4, "stationarity", stationarity_criterion},
      {5, "catamorphism uniqueness", cata_criterion},
      {6, "colimit preservation", preservation_criterion},
      {7, "plump vs nat stages", plump_criterion},
      {8, "deflationary dual", nu_criterion},
      {9, "determinism", determinism_criterion},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %d %s: %s (%.2fs)\n", o.ok ? "PASS" : "FAIL", c.number, c.title, o.detail.c_str(), secs);
    for (const auto& p : o.problems) std::printf("    %s\n", p.c_str());
    std::fflush(stdout);
    failed += o.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
