#pragma once

// Invariant suites shared by the `check` command and the test programs.

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sizedmu/iteration.hpp"

namespace sizedmu {

struct SuiteResult {
  explicit SuiteResult(std::string n = "") : name(std::move(n)) {}

  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<std::string> witnesses;  // first few failures
  std::string skipped;                 // why the suite could not run, if it could not

  void record(bool ok, const std::function<std::string()>& what) {
    ++cases;
    if (ok) return;
    ++failures;
    if (witnesses.size() < 5) witnesses.push_back(what());
  }
  bool ok() const noexcept { return failures == 0; }
};

/// Uniform choice of op at every node; nullary ops only once max_height is used up.
inline WTree random_tree(const Signature& sig, std::size_t max_height, std::mt19937_64& rng) {
  std::vector<std::size_t> choice;
  for (std::size_t a = 0; a < sig.op_count(); ++a)
    if (max_height > 0 || sig.arity(a) == 0) choice.push_back(a);
  if (choice.empty()) fail(ErrorKind::ShapeMismatch, "random_tree: signature has no nullary symbol");
  std::size_t op = choice[std::uniform_int_distribution<std::size_t>(0, choice.size() - 1)(rng)];
  WTree t{op, {}};
  for (std::size_t k = 0; k < sig.arity(op); ++k) t.children.push_back(random_tree(sig, max_height - 1, rng));
  return t;
}

/// Order laws of a plump backend on `samples` random trees and as many
/// random pairs and triples.
inline SuiteResult order_laws(const SizeBackend& kappa, std::size_t samples, std::size_t max_height,
                              std::uint64_t seed) {
  SuiteResult r{"order-laws"};
  if (kappa.is_nat()) fail(ErrorKind::ShapeMismatch, "order_laws samples plump trees");
  std::mt19937_64 rng(seed);
  std::vector<SizeIndex> pool;
  for (std::size_t k = 0; k < samples; ++k)
    pool.push_back(SizeIndex::plump(random_tree(kappa.augmented(), max_height, rng)));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  auto show = [&](std::initializer_list<const SizeIndex*> xs) {
    std::string s;
    for (const SizeIndex* x : xs) s += (s.empty() ? "" : ", ") + kappa.render(*x);
    return s;
  };
  for (std::size_t k = 0; k < samples; ++k) {
    const SizeIndex& a = pool[pick(rng)];
    const SizeIndex& b = pool[pick(rng)];
    const SizeIndex& c = pool[pick(rng)];
    const bool ab = kappa.lt(a, b), bc = kappa.lt(b, c);
    const bool lab = kappa.leq(a, b), lbc = kappa.leq(b, c);
    r.record(!(ab && bc) || kappa.lt(a, c), [&] { return "lt not transitive: " + show({&a, &b, &c}); });
    r.record(kappa.leq(a, a), [&] { return "leq not reflexive: " + show({&a}); });
    r.record(!(lab && lbc) || kappa.leq(a, c), [&] { return "leq not transitive: " + show({&a, &b, &c}); });
    SizeIndex j = kappa.join(a, b);
    r.record(kappa.lt(a, j) && kappa.lt(b, j), [&] { return "join not an upper bound: " + show({&a, &b}); });
    r.record(!ab || kappa.rank(a) < kappa.rank(b), [&] { return "rank does not decrease: " + show({&a, &b}); });
    r.record(!(ab && lbc) || kappa.lt(a, c), [&] { return "lt;leq law fails: " + show({&a, &b, &c}); });
    r.record(!(lab && bc) || kappa.lt(a, c), [&] { return "leq;lt law fails: " + show({&a, &b, &c}); });
    if (ab) {
      auto basis = kappa.predecessor_basis(b);
      bool covered = std::any_of(basis.begin(), basis.end(), [&](const SizeIndex& m) { return kappa.leq(a, m); });
      r.record(covered, [&] { return "basis does not cover: " + show({&a, &b}); });
    }
  }
  return r;
}

/// D_{j,i} . iota_{k,j} = iota_{k,i} = iota_{j,i} . F(D_{k,j}) and
/// D_{j,i} . D_{k,j} = D_{k,i} on every memoised triple k < j < i.
inline SuiteResult cocone_coherence(IterationState& st) {
  SuiteResult r{"cocone-coherence"};
  const SizeBackend& kappa = st.backend();
  const std::vector<SizeIndex> idx = st.memoized();
  for (const auto& i : idx)
    for (const auto& j : idx) {
      if (!kappa.lt(j, i)) continue;
      for (const auto& k : idx) {
        if (!kappa.lt(k, j)) continue;
        auto where = [&] { return kappa.render(k) + " < " + kappa.render(j) + " < " + kappa.render(i); };
        FiniteFn direct = st.iota(k, i);
        r.record(compose(st.connecting(j, i), st.iota(k, j)) == direct, where);
        r.record(compose(st.iota(j, i), eval_functor_mor(st.functor(), st.connecting(k, j), st.options())) == direct,
                 where);
        r.record(compose(st.connecting(j, i), st.connecting(k, j)) == st.connecting(k, i), where);
      }
    }
  return r;
}

/// Maps out of D_i into 2 that agree on every iota_{j,i} image are equal
/// (exhaustive, only for |D_i| <= 5).
inline SuiteResult legs_jointly_epic(IterationState& st, const SizeIndex& i) {
  SuiteResult r{"legs-jointly-epic"};
  const FiniteSet& d = st.object(i);
  if (d.size() > 5) return r;
  std::vector<FiniteFn> legs;
  for (const auto& j : std::vector<SizeIndex>(st.memoized()))
    if (st.backend().lt(j, i)) legs.push_back(st.iota(j, i));
  Exponential maps(2, d.size());
  const FiniteSet two(2);
  for (std::size_t g = 0; g < maps.set().size(); ++g)
    for (std::size_t h = 0; h < maps.set().size(); ++h) {
      FiniteFn fg(d, two, maps.decode(g)), fh(d, two, maps.decode(h));
      bool agree = std::all_of(legs.begin(), legs.end(),
                               [&](const FiniteFn& l) { return compose(fg, l) == compose(fh, l); });
      r.record(!agree || g == h, [&] { return "distinct maps agree on every leg at " + st.backend().render(i); });
    }
  return r;
}

/// All functions X -> Y.
inline std::vector<FiniteFn> all_maps(const FiniteSet& x, const FiniteSet& y) {
  std::vector<FiniteFn> out;
  Exponential e(y.size(), x.size());
  for (std::size_t k = 0; k < e.set().size(); ++k) out.emplace_back(x, y, e.decode(k));
  return out;
}

/// F(id) = id and F(g . f) = F(g) . F(f) for all maps between sets of size <= max_size.
inline SuiteResult functor_laws(const FunctorExpr& f, std::size_t max_size, const EvalOptions& opts = {}) {
  SuiteResult r{"functor-laws"};
  for (std::size_t a = 0; a <= max_size; ++a) {
    FiniteSet x(a);
    r.record(eval_functor_mor(f, FiniteFn::identity(x), opts) == FiniteFn::identity(eval_functor(f, x, opts)),
             [&] { return "F(id) != id on " + std::to_string(a); });
    for (std::size_t b = 0; b <= max_size; ++b)
      for (std::size_t c = 0; c <= max_size; ++c)
        for (const auto& g1 : all_maps(x, FiniteSet(b))) {
          FiniteFn fg1 = eval_functor_mor(f, g1, opts);
          for (const auto& g2 : all_maps(FiniteSet(b), FiniteSet(c)))
            r.record(eval_functor_mor(f, compose(g2, g1), opts) == compose(eval_functor_mor(f, g2, opts), fg1),
                     [&] { return "composition not preserved on " + std::to_string(a) + "->" +
                                  std::to_string(b) + "->" + std::to_string(c); });
        }
  }
  return r;
}

/// Inclusion chain X_0 <= ... <= X_{n-1} indexed by 0..n-1 with every composite arrow.
inline Diagram inclusion_chain(const std::vector<std::size_t>& sizes) {
  Diagram d;
  for (std::size_t k = 0; k < sizes.size(); ++k) d.add(SizeIndex::nat(k), FiniteSet(sizes[k]));
  for (std::size_t i = 0; i < sizes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      std::vector<std::size_t> t(sizes[j]);
      for (std::size_t x = 0; x < t.size(); ++x) t[x] = x;
      d.connect(j, i, FiniteFn(FiniteSet(sizes[j]), FiniteSet(sizes[i]), std::move(t)));
    }
  return d;
}

/// can_{F,D} is a bijection on every inclusion chain of length 1..max_len
/// whose sets have size <= max_size.
inline SuiteResult preservation(const FunctorExpr& f, std::size_t max_size, std::size_t max_len,
                                const EvalOptions& opts = {}) {
  SuiteResult r{"colimit-preservation"};
  std::vector<std::size_t> sizes;
  std::function<void()> go = [&] {
    if (!sizes.empty()) {
      ProductMapReport rep = preservation_map(f, inclusion_chain(sizes), opts);
      r.record(rep.injective && rep.surjective, [&] {
        std::string s;
        for (std::size_t v : sizes) s += std::to_string(v) + " ";
        return "canonical map not bijective on chain " + s;
      });
    }
    if (sizes.size() == max_len) return;
    for (std::size_t v = sizes.empty() ? 0 : sizes.back(); v <= max_size; ++v) {
      sizes.push_back(v);
      go();
      sizes.pop_back();
    }
  };
  go();
  return r;
}

/// h_j = h_i . D_{j,i} and the up-to-i equation for every memoised j < i.
inline SuiteResult cata_coherence(IterationState& st, const AlgebraSpec& alg) {
  SuiteResult r{"cata-coherence"};
  const SizeBackend& kappa = st.backend();
  const std::vector<SizeIndex> idx = st.memoized();
  for (const auto& i : idx) {
    FiniteFn hi = catamorphism(st, alg, i);
    r.record(is_upto_morphism(st, alg, i, hi), [&] { return "not an up-to morphism at " + kappa.render(i); });
    for (const auto& j : idx)
      if (kappa.lt(j, i))
        r.record(catamorphism(st, alg, j) == compose(hi, st.connecting(j, i)),
                 [&] { return "incoherent at " + kappa.render(j) + " < " + kappa.render(i); });
  }
  return r;
}

inline nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json j = {{"name", r.name}, {"cases", r.cases}, {"failures", r.failures}};
  if (!r.witnesses.empty()) j["witnesses"] = r.witnesses;
  if (!r.skipped.empty()) j["skipped"] = r.skipped;
  return j;
}

}  // namespace sizedmu
