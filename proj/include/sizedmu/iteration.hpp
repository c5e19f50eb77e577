#pragma once

// Size-indexed inflationary iteration D_i = colim_{j<i} F(D_j), initial
// algebras, catamorphisms, free algebras, parameterised mu and the
// deflationary (limit) dual.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sizedmu/colimit.hpp"
#include "sizedmu/functors.hpp"
#include "sizedmu/size.hpp"

namespace sizedmu {

struct StageRecord {
  SizeIndex index;
  std::string label;
  std::size_t size;
};

/// Raised when an iteration needs more stages than it was allowed. Carries
/// the stages that were computed before giving up.
class BudgetError : public Error {
 public:
  BudgetError(const std::string& what, std::vector<StageRecord> profile)
      : Error(ErrorKind::BudgetExceeded, what), profile_(std::move(profile)) {}
  const std::vector<StageRecord>& profile() const noexcept { return profile_; }

 private:
  std::vector<StageRecord> profile_;
};

struct AlgebraSpec {
  FiniteSet carrier;
  FiniteFn structure;  // F(carrier) -> carrier
};

/// Memoised inflationary iteration of a unary functor over a size.
///
/// D_i is the colimit of F(D_c) over the distinct members c of
/// predecessor_basis(i). The basis diagram has an arrow F(D_{c<=c'}) for
/// c <= c' (ties between equivalent members broken by canonical order),
/// where D_{j<=c} : D_j -> D_c is the map induced by the inclusion of
/// down-sets. For j < i the connecting map D_{j,i} is that same map.
class IterationState {
 public:
  IterationState(FunctorExpr f, SizeBackend kappa, std::size_t budget, EvalOptions opts = {})
      : functor_(std::move(f)), kappa_(std::move(kappa)), budget_(budget), opts_(opts) {
    if (output_arity(functor_, 1) != 1)
      fail(ErrorKind::ShapeMismatch, "iteration needs a unary set-valued functor");
  }

  const FunctorExpr& functor() const noexcept { return functor_; }
  const SizeBackend& backend() const noexcept { return kappa_; }
  std::size_t budget() const noexcept { return budget_; }
  const EvalOptions& options() const noexcept { return opts_; }

  /// Indices in the order they were first computed.
  const std::vector<SizeIndex>& memoized() const noexcept { return order_; }
  bool has(const SizeIndex& i) const { return memo_.count(i) > 0; }

  std::vector<StageRecord> profile() const {
    std::vector<StageRecord> out;
    for (const auto& i : order_) out.push_back({i, kappa_.render(i), memo_.at(i).cocone.apex.size()});
    return out;
  }

  const FiniteSet& object(const SizeIndex& i) { return stage(i).cocone.apex; }

  /// Distinct basis members of i, in canonical order.
  const std::vector<SizeIndex>& basis(const SizeIndex& i) { return stage(i).basis; }

  /// Colimit cocone with one leg iota_{c,i} : F(D_c) -> D_i per basis member.
  const Cocone& cocone(const SizeIndex& i) { return stage(i).cocone; }

  const Diagram& basis_diagram(const SizeIndex& i) { return stage(i).diagram; }

  /// F(D_i).
  const FiniteSet& applied(const SizeIndex& i) {
    auto it = applied_.find(i);
    if (it != applied_.end()) return it->second;
    FiniteSet s = eval_functor(functor_, object(i), opts_);
    return applied_.emplace(i, std::move(s)).first->second;
  }

  /// D_{j<=c} for leq(j, c).
  const FiniteFn& lax(const SizeIndex& j, const SizeIndex& c) {
    auto key = std::make_pair(j, c);
    if (auto it = lax_.find(key); it != lax_.end()) return it->second;
    if (!kappa_.leq(j, c))
      fail(ErrorKind::NoSuchIndex, kappa_.render(j) + " is not below " + kappa_.render(c));
    const Stage& sj = stage(j);
    const Stage& sc = stage(c);
    FiniteFn result;
    if (j == c) {
      result = FiniteFn::identity(sj.cocone.apex);
    } else {
      std::vector<FiniteFn> maps;
      for (const SizeIndex& k : sj.basis) {
        auto m = std::find_if(sc.basis.begin(), sc.basis.end(),
                              [&](const SizeIndex& cand) { return kappa_.leq(k, cand); });
        if (m == sc.basis.end())
          fail(ErrorKind::InternalInvariant, "no basis member of " + kappa_.render(c) +
                                                 " lies above " + kappa_.render(k));
        std::size_t pos = static_cast<std::size_t>(m - sc.basis.begin());
        maps.push_back(compose(sc.cocone.legs[pos], applied_lax(k, *m)));
      }
      result = sj.cocone.induced_map(maps, sc.cocone.apex);
    }
    return lax_.emplace(key, std::move(result)).first->second;
  }

  /// F(D_{j<=c}).
  const FiniteFn& applied_lax(const SizeIndex& j, const SizeIndex& c) {
    auto key = std::make_pair(j, c);
    if (auto it = applied_lax_.find(key); it != applied_lax_.end()) return it->second;
    FiniteFn f = eval_functor_mor(functor_, lax(j, c), opts_);
    return applied_lax_.emplace(key, std::move(f)).first->second;
  }

  /// D_{j,i} for j < i.
  const FiniteFn& connecting(const SizeIndex& j, const SizeIndex& i) {
    if (!kappa_.lt(j, i))
      fail(ErrorKind::NoSuchIndex, kappa_.render(j) + " is not strictly below " + kappa_.render(i));
    return lax(j, i);
  }

  /// iota_{j,i} : F(D_j) -> D_i for j < i.
  FiniteFn iota(const SizeIndex& j, const SizeIndex& i) {
    if (!kappa_.lt(j, i))
      fail(ErrorKind::NoSuchIndex, kappa_.render(j) + " is not strictly below " + kappa_.render(i));
    const Stage& si = stage(i);
    auto exact = std::find(si.basis.begin(), si.basis.end(), j);
    if (exact != si.basis.end())
      return si.cocone.legs[static_cast<std::size_t>(exact - si.basis.begin())];
    for (std::size_t p = 0; p < si.basis.size(); ++p)
      if (kappa_.leq(j, si.basis[p])) return compose(si.cocone.legs[p], applied_lax(j, si.basis[p]));
    fail(ErrorKind::InternalInvariant, "predecessor basis of " + kappa_.render(i) +
                                           " does not cover " + kappa_.render(j));
  }

  /// Term rendering of element idx of D_i via its least representative.
  std::string describe(const SizeIndex& i, std::size_t idx) {
    const Stage& s = stage(i);
    for (std::size_t p = 0; p < s.basis.size(); ++p)
      for (std::size_t y = 0; y < s.cocone.legs[p].dom().size(); ++y)
        if (s.cocone.legs[p](y) == idx) {
          SizeIndex c = s.basis[p];
          FiniteSet dc = object(c);
          return sizedmu::describe(
              functor_, {dc}, y, [&](std::size_t, std::size_t z) { return describe(c, z); }, opts_);
        }
    fail(ErrorKind::InternalInvariant, "element outside every colimit leg");
  }

  /// Computes D_i (and everything it depends on) by well-founded recursion.
  const FiniteSet& compute(const SizeIndex& i) { return object(i); }

 private:
  struct Stage {
    std::vector<SizeIndex> basis;
    Diagram diagram;
    Cocone cocone;
  };

  const Stage& stage(const SizeIndex& i) {
    if (auto it = memo_.find(i); it != memo_.end()) return it->second;
    std::vector<SizeIndex> basis = kappa_.predecessor_basis(i);
    std::sort(basis.begin(), basis.end());
    basis.erase(std::unique(basis.begin(), basis.end()), basis.end());
    for (const auto& c : basis) stage(c);
    if (memo_.size() >= budget_)
      throw BudgetError("stage budget of " + std::to_string(budget_) + " exhausted before stage " +
                            kappa_.render(i),
                        profile());
    Stage s;
    s.basis = basis;
    try {
      for (const auto& c : basis) s.diagram.add(c, applied(c));
      for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = 0; b < basis.size(); ++b) {
          if (a == b || !kappa_.leq(basis[a], basis[b])) continue;
          if (kappa_.leq(basis[b], basis[a]) && b < a) continue;
          s.diagram.connect(a, b, applied_lax(basis[a], basis[b]));
        }
      s.cocone = subdiagram_colimit(s.diagram);
    } catch (const BudgetError&) {
      throw;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      throw BudgetError(std::string(e.what()) + " at " + kappa_.render(i), profile());
    }
    order_.push_back(i);
    return memo_.emplace(i, std::move(s)).first->second;
  }

  FunctorExpr functor_;
  SizeBackend kappa_;
  std::size_t budget_;
  EvalOptions opts_;
  std::map<SizeIndex, Stage> memo_;
  std::vector<SizeIndex> order_;
  std::map<SizeIndex, FiniteSet> applied_;
  std::map<std::pair<SizeIndex, SizeIndex>, FiniteFn> lax_;
  std::map<std::pair<SizeIndex, SizeIndex>, FiniteFn> applied_lax_;
};

/// Populates the iteration at every target. Throws BudgetError when the
/// targets and their recursive bases need more than `budget` stages.
inline IterationState inflationary_iterate(const FunctorExpr& f, const SizeBackend& kappa,
                                           const std::vector<SizeIndex>& targets,
                                           std::size_t budget, EvalOptions opts = {}) {
  IterationState st(f, kappa, budget, opts);
  for (const auto& t : targets) st.compute(t);
  return st;
}

struct MuResult {
  std::shared_ptr<IterationState> state;
  /// bottom, succ bottom, ... as far as computed.
  std::vector<SizeIndex> chain;
  std::vector<StageRecord> profile;
  bool budget_exceeded = false;
  std::string message;
  /// Index s = succ i at which D_{i,s} was first found bijective.
  std::optional<SizeIndex> stationary_at;
  std::optional<AlgebraSpec> algebra;
  bool iota_bijective = false;

  bool stationary() const noexcept { return stationary_at.has_value(); }
};

/// Iterates along bottom, succ bottom, ... until the connecting map
/// D_{i, succ i} is a bijection. The carrier is then D_{succ i} with
/// structure iota_{i,succ i} . F(D_{i,succ i})^{-1}. Stationarity is only
/// semi-decided: exhausting the budget is reported, not an error.
inline MuResult mu_initial_algebra(const FunctorExpr& f, const SizeBackend& kappa,
                                   std::size_t budget, EvalOptions opts = {}) {
  MuResult r;
  r.state = std::make_shared<IterationState>(f, kappa, budget, opts);
  IterationState& st = *r.state;
  SizeIndex prev = kappa.bottom();
  try {
    st.compute(prev);
    r.chain.push_back(prev);
    for (;;) {
      SizeIndex next = kappa.succ(prev);
      st.compute(next);
      r.chain.push_back(next);
      const FiniteFn& conn = st.connecting(prev, next);
      if (iso_check(st.object(prev), st.object(next), conn)) {
        FiniteFn back = eval_functor_mor(f, inverse(conn), opts);
        FiniteFn iota = compose(st.iota(prev, next), back);
        r.iota_bijective = iso_check(iota.dom(), iota.cod(), iota);
        r.stationary_at = next;
        r.algebra = AlgebraSpec{st.object(next), std::move(iota)};
        break;
      }
      prev = next;
    }
  } catch (const BudgetError& e) {
    r.budget_exceeded = true;
    r.message = e.what();
  }
  r.profile = st.profile();
  return r;
}

/// Free algebra on x: the initial algebra of F(_) + x.
inline MuResult free_algebra(const FunctorExpr& f, const FiniteSet& x, const SizeBackend& kappa,
                             std::size_t budget, EvalOptions opts = {}) {
  return mu_initial_algebra(fx::sum({f, fx::constant(x)}), kappa, budget, opts);
}

/// True iff h : D_i -> A satisfies h . iota_{j,i} = a . F(h . D_{j,i}) for every
/// memoised j < i.
inline bool is_upto_morphism(IterationState& st, const AlgebraSpec& alg, const SizeIndex& i,
                             const FiniteFn& h) {
  for (const auto& j : std::vector<SizeIndex>(st.memoized())) {
    if (!st.backend().lt(j, i)) continue;
    FiniteFn lhs = compose(h, st.iota(j, i));
    FiniteFn rhs = compose(alg.structure,
                           eval_functor_mor(st.functor(), compose(h, st.connecting(j, i)), st.options()));
    if (lhs != rhs) return false;
  }
  return true;
}

/// The unique up-to-i algebra morphism h_i : D_i -> A, built by well-founded
/// recursion: h_i . iota_{c,i} = a . F(h_c) on every basis member c.
inline FiniteFn catamorphism(IterationState& st, const AlgebraSpec& alg, const SizeIndex& i) {
  FiniteSet fa = eval_functor(st.functor(), alg.carrier, st.options());
  if (alg.structure.dom().size() != fa.size() || alg.structure.cod().size() != alg.carrier.size())
    fail(ErrorKind::NoAlgebra, "algebra structure is not a map F(A) -> A");
  std::map<SizeIndex, FiniteFn> memo;
  auto go = [&](auto&& self, const SizeIndex& k) -> const FiniteFn& {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    std::vector<FiniteFn> maps;
    for (const auto& c : std::vector<SizeIndex>(st.basis(k)))
      maps.push_back(compose(alg.structure, eval_functor_mor(st.functor(), self(self, c), st.options())));
    FiniteFn h = st.cocone(k).induced_map(maps, alg.carrier);
    return memo.emplace(k, std::move(h)).first->second;
  };
  FiniteFn h = go(go, i);
  if (!is_upto_morphism(st, alg, i, h))
    fail(ErrorKind::InternalInvariant, "catamorphism fails the up-to-i morphism equation");
  return h;
}

/// F(X, _) for a body with one more argument than X has components.
inline FunctorExpr fix_parameters(const FunctorExpr& body, const std::vector<FiniteSet>& xs) {
  std::vector<FunctorExpr> parts;
  for (const auto& x : xs) parts.push_back(fx::constant(x));
  parts.push_back(fx::identity());
  return fx::compose(body, fx::pairing(std::move(parts)));
}

/// Object part of X |-> mu Y. F(X, Y).
inline MuResult mu_parameterized(const FunctorExpr& body, const std::vector<FiniteSet>& xs,
                                 std::size_t budget, EvalOptions opts = {}) {
  if (output_arity(body, xs.size() + 1) != 1)
    fail(ErrorKind::ShapeMismatch, "mu body must be set-valued");
  return mu_initial_algebra(fix_parameters(body, xs), nat_backend(), budget, opts);
}

/// Morphism part: the mediating map between the two truncated chains,
/// g_{n} . iota_{n-1,n} = iota'_{n-1,n} . F(f, g_{n-1}), transported to the
/// stationary carriers along the connecting isomorphisms.
inline FiniteFn mu_parameterized_map(const FunctorExpr& body, const std::vector<FiniteFn>& fs,
                                     std::size_t budget, EvalOptions opts = {}) {
  std::vector<FiniteSet> xs, ys;
  for (const auto& f : fs) {
    xs.push_back(f.dom());
    ys.push_back(f.cod());
  }
  MuResult a = mu_parameterized(body, xs, budget, opts);
  MuResult b = mu_parameterized(body, ys, budget, opts);
  if (!a.stationary() || !b.stationary())
    throw BudgetError("mu did not stabilise within " + std::to_string(budget) + " stages",
                      a.stationary() ? b.profile : a.profile);
  const SizeBackend nat = nat_backend();
  std::size_t sa = a.stationary_at->numeral(), sb = b.stationary_at->numeral();
  std::size_t top = std::max(sa, sb);
  IterationState& da = *a.state;
  IterationState& db = *b.state;
  try {
    da.compute(SizeIndex::nat(top));
    db.compute(SizeIndex::nat(top));
  } catch (const BudgetError&) {
    throw;
  }
  std::vector<FiniteFn> g{FiniteFn::from_empty(db.object(nat.bottom()))};
  for (std::size_t n = 1; n <= top; ++n) {
    SizeIndex prev = SizeIndex::nat(n - 1), cur = SizeIndex::nat(n);
    std::vector<FiniteFn> args = fs;
    args.push_back(g.back());
    FiniteFn step = compose(db.cocone(cur).legs[0], eval_functor_mor(body, args, opts));
    g.push_back(da.cocone(cur).induced_map({step}, db.object(cur)));
    (void)prev;
  }
  auto to_top = [&](IterationState& s, std::size_t from) {
    return from == top ? FiniteFn::identity(s.object(SizeIndex::nat(top)))
                       : s.connecting(SizeIndex::nat(from), SizeIndex::nat(top));
  };
  FiniteFn up = to_top(da, sa);
  FiniteFn down = to_top(db, sb);
  if (!iso_check(down.dom(), down.cod(), down))
    fail(ErrorKind::InternalInvariant, "connecting map after stationarity is not bijective");
  return compose(inverse(down), compose(g[top], up));
}

namespace detail {

inline FiniteSet mu_param_object(const node::MuParam& m, const std::vector<FiniteSet>& xs,
                                 const EvalOptions& opts) {
  MuResult r = mu_parameterized(m.body, xs, opts.mu_budget, opts);
  if (!r.stationary())
    throw BudgetError("mu " + m.var + " did not stabilise within " +
                          std::to_string(opts.mu_budget) + " stages",
                      r.profile);
  return r.algebra->carrier;
}

inline FiniteFn mu_param_morphism(const node::MuParam& m, const std::vector<FiniteFn>& fs,
                                  const EvalOptions& opts) {
  return mu_parameterized_map(m.body, fs, opts.mu_budget, opts);
}

inline std::string mu_param_describe(const node::MuParam& m, const std::vector<FiniteSet>& xs,
                                     std::size_t idx, const LeafDescriber& leaf,
                                     const EvalOptions& opts) {
  MuResult r = mu_parameterized(m.body, xs, opts.mu_budget, opts);
  if (!r.stationary())
    throw BudgetError("mu " + m.var + " did not stabilise", r.profile);
  IterationState& st = *r.state;
  const std::size_t n = xs.size();
  auto go = [&](auto&& self, const SizeIndex& i, std::size_t e) -> std::string {
    const Cocone& c = st.cocone(i);
    const auto& basis = st.basis(i);
    for (std::size_t p = 0; p < basis.size(); ++p)
      for (std::size_t y = 0; y < c.legs[p].dom().size(); ++y)
        if (c.legs[p](y) == e) {
          SizeIndex below = basis[p];
          std::vector<FiniteSet> args = xs;
          args.push_back(st.object(below));
          return describe(m.body, args, y,
                          [&](std::size_t k, std::size_t z) {
                            return k < n ? leaf(k, z) : self(self, below, z);
                          },
                          opts);
        }
    fail(ErrorKind::InternalInvariant, "element outside every colimit leg");
  };
  return go(go, *r.stationary_at, idx);
}

}  // namespace detail

struct NuResult {
  std::vector<std::size_t> sizes;
  bool budget_exceeded = false;
  std::string message;
  std::optional<std::size_t> stationary_at;
  FiniteSet carrier;
  /// Coalgebra structure carrier -> F(carrier), when stationary.
  std::optional<FiniteFn> structure;

  bool stationary() const noexcept { return stationary_at.has_value(); }
};

/// nu_n = lim_{j<n} F(nu_j) over the natural numbers, nu_0 = 1. Stationary at
/// n when the restriction nu_n -> nu_{n-1} is a bijection.
inline NuResult deflationary_nu(const FunctorExpr& f, std::size_t budget, EvalOptions opts = {}) {
  if (output_arity(f, 1) != 1) fail(ErrorKind::ShapeMismatch, "nu needs a unary set-valued functor");
  NuResult r;
  std::vector<Cone> cones;
  std::vector<FiniteSet> applied;
  // proj[i][j] : nu_i -> nu_j for j < i
  std::vector<std::vector<FiniteFn>> proj;
  for (std::size_t n = 0;; ++n) {
    if (n >= budget) {
      r.budget_exceeded = true;
      r.message = "stage budget of " + std::to_string(budget) + " exhausted before stage " + std::to_string(n);
      return r;
    }
    std::vector<CatArrow> arrows;
    try {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
          arrows.push_back({i, j, eval_functor_mor(f, proj[i][j], opts)});
      cones.push_back(finite_limit(applied, arrows));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      r.budget_exceeded = true;
      r.message = e.what();
      return r;
    }
    const Cone& cur = cones.back();
    proj.emplace_back();
    for (std::size_t j = 0; j < n; ++j) {
      // family restricted to positions < j, located in nu_j
      const Cone& low = cones[j];
      std::map<std::vector<std::size_t>, std::size_t> where;
      for (std::size_t e = 0; e < low.apex.size(); ++e) {
        std::vector<std::size_t> fam;
        for (std::size_t k = 0; k < j; ++k) fam.push_back(low.legs[k](e));
        where[fam] = e;
      }
      std::vector<std::size_t> t(cur.apex.size());
      for (std::size_t e = 0; e < t.size(); ++e) {
        std::vector<std::size_t> fam;
        for (std::size_t k = 0; k < j; ++k) fam.push_back(cur.legs[k](e));
        t[e] = where.at(fam);
      }
      proj.back().emplace_back(cur.apex, low.apex, std::move(t));
    }
    r.sizes.push_back(cur.apex.size());
    if (n >= 1 && iso_check(cur.apex, cones[n - 1].apex, proj[n][n - 1])) {
      r.stationary_at = n;
      r.carrier = cur.apex;
      FiniteFn up = eval_functor_mor(f, inverse(proj[n][n - 1]), opts);
      r.structure = compose(up, cur.legs[n - 1]);
      return r;
    }
    applied.push_back(eval_functor(f, cur.apex, opts));
  }
}

inline nlohmann::json to_json(const std::vector<StageRecord>& profile) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& s : profile) a.push_back({{"index", s.label}, {"size", s.size}});
  return a;
}

}  // namespace sizedmu
