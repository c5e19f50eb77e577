#pragma once

// Expressions denoting sized set functors Sets^n -> Sets^m, their action on
// objects and morphisms, and the signature each one is attributed.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sizedmu/colimit.hpp"
#include "sizedmu/finset.hpp"
#include "sizedmu/signature.hpp"

namespace sizedmu {

/// Groupoid of operation symbols with an arity functor. Each generating
/// arrow is a bijection B(src) -> B(dst); composites and inverses are implied.
struct Groupoid {
  std::vector<std::string> names;
  std::vector<std::size_t> arity;
  struct Arrow {
    std::size_t src;
    std::size_t dst;
    std::vector<std::size_t> perm;
    bool operator==(const Arrow&) const = default;
  };
  std::vector<Arrow> arrows;

  bool operator==(const Groupoid& o) const {
    return arity == o.arity && arrows == o.arrows;
  }
};

/// A functor X |-> K x X^E.
struct Monomial {
  std::string name;
  FiniteSet coeff;
  std::size_t exponent = 0;
  bool operator==(const Monomial& o) const {
    return coeff == o.coeff && exponent == o.exponent;
  }
};

/// Natural map K x X^E -> K' x X^E', (k, f) |-> (coeff_map k, f . reindex)
/// with reindex : E' -> E.
struct MonomialArrow {
  std::size_t src;
  std::size_t dst;
  FiniteFn coeff_map;
  FiniteFn reindex;
  bool operator==(const MonomialArrow&) const = default;
};

struct MonomialDiagram {
  std::vector<Monomial> objects;
  std::vector<MonomialArrow> arrows;
  bool operator==(const MonomialDiagram&) const = default;
};

struct FunctorNode;
using FunctorExpr = std::shared_ptr<const FunctorNode>;

namespace node {
struct Identity {};
struct Constant {
  FiniteSet set;
  std::string name;
};
struct Projection {
  std::size_t index;
};
struct Pairing {
  std::vector<FunctorExpr> parts;
};
struct Sum {
  std::vector<FunctorExpr> parts;
};
struct FiniteProduct {
  std::vector<FunctorExpr> parts;
};
struct Compose {
  FunctorExpr outer;
  FunctorExpr inner;
};
struct Container {
  Signature sig;
  std::string name;
};
struct SymContainer {
  Groupoid group;
  std::string name;
};
struct ColimOver {
  MonomialDiagram diagram;
};
/// mu Y. body, where body takes one more argument than the result.
struct MuParam {
  FunctorExpr body;
  std::string var;
};
}  // namespace node

struct FunctorNode {
  std::variant<node::Identity, node::Constant, node::Projection, node::Pairing, node::Sum,
               node::FiniteProduct, node::Compose, node::Container, node::SymContainer,
               node::ColimOver, node::MuParam>
      v;
};

namespace fx {

inline FunctorExpr make(auto n) { return std::make_shared<const FunctorNode>(FunctorNode{std::move(n)}); }

inline FunctorExpr identity() { return make(node::Identity{}); }
inline FunctorExpr constant(FiniteSet s, std::string name = "") {
  return make(node::Constant{std::move(s), std::move(name)});
}
inline FunctorExpr constant(std::size_t n) { return constant(FiniteSet(n)); }
inline FunctorExpr projection(std::size_t k) { return make(node::Projection{k}); }
inline FunctorExpr pairing(std::vector<FunctorExpr> ps) { return make(node::Pairing{std::move(ps)}); }
inline FunctorExpr sum(std::vector<FunctorExpr> ps) { return make(node::Sum{std::move(ps)}); }
inline FunctorExpr product(std::vector<FunctorExpr> ps) {
  return make(node::FiniteProduct{std::move(ps)});
}
inline FunctorExpr compose(FunctorExpr outer, FunctorExpr inner) {
  return make(node::Compose{std::move(outer), std::move(inner)});
}
inline FunctorExpr container(Signature sig, std::string name = "") {
  return make(node::Container{std::move(sig), std::move(name)});
}

inline void check_groupoid(const Groupoid& g) {
  if (g.names.size() != g.arity.size())
    fail(ErrorKind::ShapeMismatch, "groupoid: one arity per object required");
  for (const auto& a : g.arrows) {
    if (a.src >= g.arity.size() || a.dst >= g.arity.size())
      fail(ErrorKind::ShapeMismatch, "groupoid arrow refers to an unknown object");
    if (g.arity[a.src] != g.arity[a.dst] || a.perm.size() != g.arity[a.src])
      fail(ErrorKind::NonInvertibleGroupoidArrow,
           "groupoid arrow is not a bijection between arity sets");
    std::vector<bool> hit(a.perm.size(), false);
    for (std::size_t v : a.perm) {
      if (v >= hit.size() || hit[v])
        fail(ErrorKind::NonInvertibleGroupoidArrow, "groupoid arrow is not a bijection");
      hit[v] = true;
    }
  }
}

inline FunctorExpr sym(Groupoid g, std::string name = "") {
  check_groupoid(g);
  return make(node::SymContainer{std::move(g), std::move(name)});
}

inline FunctorExpr colim(MonomialDiagram d) {
  for (const auto& a : d.arrows) {
    if (a.src >= d.objects.size() || a.dst >= d.objects.size())
      fail(ErrorKind::IllTypedArrow, "colim: arrow refers to an unknown object");
    const auto& s = d.objects[a.src];
    const auto& t = d.objects[a.dst];
    if (a.coeff_map.dom().size() != s.coeff.size() || a.coeff_map.cod().size() != t.coeff.size() ||
        a.reindex.dom().size() != t.exponent || a.reindex.cod().size() != s.exponent)
      fail(ErrorKind::IllTypedArrow, "colim: arrow does not match its monomials");
  }
  return make(node::ColimOver{std::move(d)});
}

inline FunctorExpr mu(FunctorExpr body, std::string var = "Y") {
  return make(node::MuParam{std::move(body), std::move(var)});
}

/// X^k as a k-fold product.
inline FunctorExpr power(FunctorExpr base, std::size_t k) {
  return product(std::vector<FunctorExpr>(k, base));
}

}  // namespace fx

inline bool operator==(const FunctorNode& a, const FunctorNode& b);

inline bool equal(const FunctorExpr& a, const FunctorExpr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline bool equal(const std::vector<FunctorExpr>& a, const std::vector<FunctorExpr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (!equal(a[k], b[k])) return false;
  return true;
}

inline bool operator==(const FunctorNode& a, const FunctorNode& b) {
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, node::Identity>) return true;
        else if constexpr (std::is_same_v<T, node::Constant>) return x.set == y.set;
        else if constexpr (std::is_same_v<T, node::Projection>) return x.index == y.index;
        else if constexpr (std::is_same_v<T, node::Compose>)
          return equal(x.outer, y.outer) && equal(x.inner, y.inner);
        else if constexpr (std::is_same_v<T, node::Container>) return x.sig == y.sig;
        else if constexpr (std::is_same_v<T, node::SymContainer>) return x.group == y.group;
        else if constexpr (std::is_same_v<T, node::ColimOver>) return x.diagram == y.diagram;
        else if constexpr (std::is_same_v<T, node::MuParam>) return equal(x.body, y.body);
        else return equal(x.parts, y.parts);
      },
      a.v);
}

/// Number of outputs for the given number of inputs; ShapeMismatch if ill-typed.
inline std::size_t output_arity(const FunctorExpr& e, std::size_t inputs) {
  return std::visit(
      [&](const auto& n) -> std::size_t {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Identity>) {
          return inputs;
        } else if constexpr (std::is_same_v<T, node::Constant>) {
          return 1;
        } else if constexpr (std::is_same_v<T, node::Projection>) {
          if (n.index >= inputs)
            fail(ErrorKind::ShapeMismatch, "projection " + std::to_string(n.index) +
                                               " out of range for " + std::to_string(inputs) +
                                               " arguments");
          return 1;
        } else if constexpr (std::is_same_v<T, node::Pairing>) {
          std::size_t m = 0;
          for (const auto& p : n.parts) m += output_arity(p, inputs);
          return m;
        } else if constexpr (std::is_same_v<T, node::Sum> || std::is_same_v<T, node::FiniteProduct>) {
          for (const auto& p : n.parts)
            if (output_arity(p, inputs) != 1)
              fail(ErrorKind::ShapeMismatch, "sum/product summands must be set-valued");
          return 1;
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          return output_arity(n.outer, output_arity(n.inner, inputs));
        } else if constexpr (std::is_same_v<T, node::MuParam>) {
          if (output_arity(n.body, inputs + 1) != 1)
            fail(ErrorKind::ShapeMismatch, "mu body must be set-valued");
          return 1;
        } else {
          if (inputs != 1)
            fail(ErrorKind::ShapeMismatch, "containers act on a single argument");
          return 1;
        }
      },
      e->v);
}

struct EvalOptions {
  /// Stage budget for each inner initial-algebra computation of a mu node.
  std::size_t mu_budget = 64;
};

namespace detail {
// Defined in iteration.hpp.
inline FiniteSet mu_param_object(const node::MuParam& m, const std::vector<FiniteSet>& xs,
                          const EvalOptions& opts);
inline FiniteFn mu_param_morphism(const node::MuParam& m, const std::vector<FiniteFn>& fs,
                           const EvalOptions& opts);
inline std::string mu_param_describe(const node::MuParam& m, const std::vector<FiniteSet>& xs,
                              std::size_t idx,
                              const std::function<std::string(std::size_t, std::size_t)>& leaf,
                              const EvalOptions& opts);

inline std::vector<FiniteSet> sym_objects(const Groupoid& g, std::size_t carrier) {
  std::vector<FiniteSet> objs;
  for (std::size_t b : g.arity) objs.push_back(FiniteSet(checked_pow(carrier, b)));
  return objs;
}

// A generator s : a -> a' acts by f |-> f . s^{-1}, i.e. g(s(y)) = f(y).
inline Cocone sym_colimit(const Groupoid& g, std::size_t carrier) {
  auto objs = sym_objects(g, carrier);
  std::vector<CatArrow> arrows;
  for (const auto& a : g.arrows) {
    Exponential ex(carrier, g.arity[a.src]);
    std::vector<std::size_t> t(objs[a.src].size());
    for (std::size_t v = 0; v < t.size(); ++v) {
      auto f = ex.decode(v);
      std::vector<std::size_t> h(f.size());
      for (std::size_t y = 0; y < f.size(); ++y) h[a.perm[y]] = f[y];
      t[v] = ex.encode(h);
    }
    arrows.push_back({a.src, a.dst, FiniteFn(objs[a.src], objs[a.dst], std::move(t))});
  }
  return finite_cat_colimit(objs, arrows);
}

inline std::vector<FiniteSet> monomial_objects(const MonomialDiagram& d, std::size_t carrier) {
  std::vector<FiniteSet> objs;
  for (const auto& m : d.objects)
    objs.push_back(FiniteSet(checked_mul(m.coeff.size(), checked_pow(carrier, m.exponent))));
  return objs;
}

inline Cocone monomial_colimit(const MonomialDiagram& d, std::size_t carrier) {
  auto objs = monomial_objects(d, carrier);
  std::vector<CatArrow> arrows;
  for (const auto& a : d.arrows) {
    const auto& s = d.objects[a.src];
    const auto& t = d.objects[a.dst];
    Exponential es(carrier, s.exponent), et(carrier, t.exponent);
    std::vector<std::size_t> tab(objs[a.src].size());
    for (std::size_t v = 0; v < tab.size(); ++v) {
      std::size_t k = v / es.set().size();
      auto f = es.decode(v % es.set().size());
      std::vector<std::size_t> g(t.exponent);
      for (std::size_t y = 0; y < t.exponent; ++y) g[y] = f[a.reindex(y)];
      tab[v] = a.coeff_map(k) * et.set().size() + et.encode(g);
    }
    arrows.push_back({a.src, a.dst, FiniteFn(objs[a.src], objs[a.dst], std::move(tab))});
  }
  return finite_cat_colimit(objs, arrows);
}

}  // namespace detail

/// Object part. Returns one set per output.
inline std::vector<FiniteSet> eval_objects(const FunctorExpr& e, const std::vector<FiniteSet>& xs,
                                           const EvalOptions& opts = {}) {
  output_arity(e, xs.size());
  return std::visit(
      [&](const auto& n) -> std::vector<FiniteSet> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Identity>) {
          return xs;
        } else if constexpr (std::is_same_v<T, node::Constant>) {
          return {n.set};
        } else if constexpr (std::is_same_v<T, node::Projection>) {
          return {xs[n.index]};
        } else if constexpr (std::is_same_v<T, node::Pairing>) {
          std::vector<FiniteSet> out;
          for (const auto& p : n.parts)
            for (auto& s : eval_objects(p, xs, opts)) out.push_back(std::move(s));
          return out;
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          std::vector<std::size_t> sizes;
          for (const auto& p : n.parts) sizes.push_back(eval_objects(p, xs, opts)[0].size());
          return {Coproduct(sizes).set()};
        } else if constexpr (std::is_same_v<T, node::FiniteProduct>) {
          std::vector<std::size_t> sizes;
          for (const auto& p : n.parts) sizes.push_back(eval_objects(p, xs, opts)[0].size());
          return {Product(sizes).set()};
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          return eval_objects(n.outer, eval_objects(n.inner, xs, opts), opts);
        } else if constexpr (std::is_same_v<T, node::Container>) {
          return {container_apply(n.sig, xs[0])};
        } else if constexpr (std::is_same_v<T, node::SymContainer>) {
          return {detail::sym_colimit(n.group, xs[0].size()).apex};
        } else if constexpr (std::is_same_v<T, node::ColimOver>) {
          return {detail::monomial_colimit(n.diagram, xs[0].size()).apex};
        } else {
          return {detail::mu_param_object(n, xs, opts)};
        }
      },
      e->v);
}

/// Morphism part on a tuple of functions.
inline std::vector<FiniteFn> eval_morphisms(const FunctorExpr& e, const std::vector<FiniteFn>& fs,
                                            const EvalOptions& opts = {}) {
  output_arity(e, fs.size());
  return std::visit(
      [&](const auto& n) -> std::vector<FiniteFn> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Identity>) {
          return fs;
        } else if constexpr (std::is_same_v<T, node::Constant>) {
          return {FiniteFn::identity(n.set)};
        } else if constexpr (std::is_same_v<T, node::Projection>) {
          return {fs[n.index]};
        } else if constexpr (std::is_same_v<T, node::Pairing>) {
          std::vector<FiniteFn> out;
          for (const auto& p : n.parts)
            for (auto& f : eval_morphisms(p, fs, opts)) out.push_back(std::move(f));
          return out;
        } else if constexpr (std::is_same_v<T, node::Sum> || std::is_same_v<T, node::FiniteProduct>) {
          std::vector<FiniteFn> parts;
          std::vector<std::size_t> ds, cs;
          for (const auto& p : n.parts) {
            parts.push_back(eval_morphisms(p, fs, opts)[0]);
            ds.push_back(parts.back().dom().size());
            cs.push_back(parts.back().cod().size());
          }
          if constexpr (std::is_same_v<T, node::Sum>) {
            Coproduct d(ds), c(cs);
            std::vector<std::size_t> t(d.set().size());
            for (std::size_t v = 0; v < t.size(); ++v) {
              auto [k, x] = d.locate(v);
              t[v] = c.inject(k, parts[k](x));
            }
            return {FiniteFn(d.set(), c.set(), std::move(t))};
          } else {
            Product d(ds), c(cs);
            std::vector<std::size_t> t(d.set().size());
            for (std::size_t v = 0; v < t.size(); ++v) {
              auto tuple = d.decode(v);
              for (std::size_t k = 0; k < tuple.size(); ++k) tuple[k] = parts[k](tuple[k]);
              t[v] = c.encode(tuple);
            }
            return {FiniteFn(d.set(), c.set(), std::move(t))};
          }
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          return eval_morphisms(n.outer, eval_morphisms(n.inner, fs, opts), opts);
        } else if constexpr (std::is_same_v<T, node::Container>) {
          return {container_map(n.sig, fs[0])};
        } else if constexpr (std::is_same_v<T, node::SymContainer> ||
                             std::is_same_v<T, node::ColimOver>) {
          const FiniteFn& f = fs[0];
          Cocone src, dst;
          std::vector<std::size_t> exps;
          if constexpr (std::is_same_v<T, node::SymContainer>) {
            src = detail::sym_colimit(n.group, f.dom().size());
            dst = detail::sym_colimit(n.group, f.cod().size());
            exps = n.group.arity;
          } else {
            src = detail::monomial_colimit(n.diagram, f.dom().size());
            dst = detail::monomial_colimit(n.diagram, f.cod().size());
            for (const auto& m : n.diagram.objects) exps.push_back(m.exponent);
          }
          std::vector<FiniteFn> maps;
          for (std::size_t a = 0; a < exps.size(); ++a) {
            Exponential es(f.dom().size(), exps[a]), et(f.cod().size(), exps[a]);
            std::vector<std::size_t> t(src.legs[a].dom().size());
            for (std::size_t v = 0; v < t.size(); ++v) {
              std::size_t k = v / es.set().size();
              auto tuple = es.decode(v % es.set().size());
              for (auto& y : tuple) y = f(y);
              t[v] = dst.class_of(a, k * et.set().size() + et.encode(tuple));
            }
            maps.emplace_back(src.legs[a].dom(), dst.apex, std::move(t));
          }
          return {src.induced_map(maps, dst.apex)};
        } else {
          return {detail::mu_param_morphism(n, fs, opts)};
        }
      },
      e->v);
}

inline FiniteSet eval_functor(const FunctorExpr& e, const std::vector<FiniteSet>& xs,
                              const EvalOptions& opts = {}) {
  auto out = eval_objects(e, xs, opts);
  if (out.size() != 1) fail(ErrorKind::ShapeMismatch, "functor is not set-valued");
  return out[0];
}

inline FiniteSet eval_functor(const FunctorExpr& e, const FiniteSet& x, const EvalOptions& opts = {}) {
  return eval_functor(e, std::vector<FiniteSet>{x}, opts);
}

inline FiniteFn eval_functor_mor(const FunctorExpr& e, const std::vector<FiniteFn>& fs,
                                 const EvalOptions& opts = {}) {
  auto out = eval_morphisms(e, fs, opts);
  if (out.size() != 1) fail(ErrorKind::ShapeMismatch, "functor is not set-valued");
  return out[0];
}

inline FiniteFn eval_functor_mor(const FunctorExpr& e, const FiniteFn& f, const EvalOptions& opts = {}) {
  return eval_functor_mor(e, std::vector<FiniteFn>{f}, opts);
}

/// Attribution following the closure rules: cocontinuous leaves get the
/// empty signature, composites the sum of their children's.
inline Signature infer_signature(const FunctorExpr& e) {
  return std::visit(
      [&](const auto& n) -> Signature {
        using T = std::decay_t<decltype(n)>;
        auto sum_of = [](const std::vector<FunctorExpr>& ps) {
          std::vector<Signature> sigs;
          for (const auto& p : ps) sigs.push_back(infer_signature(p));
          return signature_sum(sigs).sum;
        };
        if constexpr (std::is_same_v<T, node::Identity> || std::is_same_v<T, node::Constant> ||
                      std::is_same_v<T, node::Projection>) {
          return Signature::empty();
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          return signature_sum({infer_signature(n.outer), infer_signature(n.inner)}).sum;
        } else if constexpr (std::is_same_v<T, node::Container>) {
          return n.sig;
        } else if constexpr (std::is_same_v<T, node::SymContainer>) {
          return Signature(n.group.names, n.group.arity);
        } else if constexpr (std::is_same_v<T, node::ColimOver>) {
          std::vector<Signature> parts;
          for (const auto& m : n.diagram.objects) {
            std::vector<std::string> names;
            for (std::size_t k = 0; k < m.coeff.size(); ++k) names.push_back(m.coeff.label(k));
            parts.emplace_back(names, std::vector<std::size_t>(m.coeff.size(), m.exponent));
          }
          return signature_sum(parts).sum;
        } else if constexpr (std::is_same_v<T, node::MuParam>) {
          return infer_signature(n.body);
        } else {
          return sum_of(n.parts);
        }
      },
      e->v);
}

using LeafDescriber = std::function<std::string(std::size_t, std::size_t)>;

/// Readable term for element idx of output `component` of e(xs). Argument
/// elements are rendered by leaf(argument position, element).
inline std::string describe(const FunctorExpr& e, const std::vector<FiniteSet>& xs,
                            std::size_t component, std::size_t idx, const LeafDescriber& leaf,
                            const EvalOptions& opts = {}) {
  auto args = [](const std::vector<std::string>& parts, char open, char close) {
    std::string s(1, open);
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (k) s += ',';
      s += parts[k];
    }
    return s + close;
  };
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, node::Identity>) {
          return leaf(component, idx);
        } else if constexpr (std::is_same_v<T, node::Constant>) {
          if (!n.set.has_labels() && n.set.size() == 1) return "*";
          return n.set.label(idx);
        } else if constexpr (std::is_same_v<T, node::Projection>) {
          return leaf(n.index, idx);
        } else if constexpr (std::is_same_v<T, node::Pairing>) {
          for (const auto& p : n.parts) {
            std::size_t m = output_arity(p, xs.size());
            if (component < m) return describe(p, xs, component, idx, leaf, opts);
            component -= m;
          }
          fail(ErrorKind::ShapeMismatch, "describe: component out of range");
        } else if constexpr (std::is_same_v<T, node::Sum>) {
          std::vector<std::size_t> sizes;
          for (const auto& p : n.parts) sizes.push_back(eval_objects(p, xs, opts)[0].size());
          auto [k, x] = Coproduct(sizes).locate(idx);
          return "in" + std::to_string(k) + "(" + describe(n.parts[k], xs, 0, x, leaf, opts) + ")";
        } else if constexpr (std::is_same_v<T, node::FiniteProduct>) {
          std::vector<std::size_t> sizes;
          for (const auto& p : n.parts) sizes.push_back(eval_objects(p, xs, opts)[0].size());
          auto tuple = Product(sizes).decode(idx);
          std::vector<std::string> parts;
          for (std::size_t k = 0; k < tuple.size(); ++k)
            parts.push_back(describe(n.parts[k], xs, 0, tuple[k], leaf, opts));
          return args(parts, '(', ')');
        } else if constexpr (std::is_same_v<T, node::Compose>) {
          auto mid = eval_objects(n.inner, xs, opts);
          LeafDescriber inner = [&](std::size_t k, std::size_t y) {
            return describe(n.inner, xs, k, y, leaf, opts);
          };
          return describe(n.outer, mid, component, idx, inner, opts);
        } else if constexpr (std::is_same_v<T, node::Container>) {
          auto [op, tuple] = ContainerLayout(n.sig, xs[0].size()).decode(idx);
          std::vector<std::string> parts;
          for (std::size_t y : tuple) parts.push_back(leaf(0, y));
          return n.sig.name(op) + (parts.empty() ? std::string() : args(parts, '(', ')'));
        } else if constexpr (std::is_same_v<T, node::SymContainer> ||
                             std::is_same_v<T, node::ColimOver>) {
          Cocone c;
          std::vector<std::size_t> exps;
          std::vector<std::string> names;
          if constexpr (std::is_same_v<T, node::SymContainer>) {
            c = detail::sym_colimit(n.group, xs[0].size());
            exps = n.group.arity;
            names = n.group.names;
          } else {
            c = detail::monomial_colimit(n.diagram, xs[0].size());
            for (const auto& m : n.diagram.objects) {
              exps.push_back(m.exponent);
              names.push_back(m.name);
            }
          }
          // least representative of the class
          for (std::size_t a = 0; a < c.legs.size(); ++a)
            for (std::size_t v = 0; v < c.legs[a].dom().size(); ++v) {
              if (c.legs[a](v) != idx) continue;
              Exponential ex(xs[0].size(), exps[a]);
              std::size_t k = v / ex.set().size();
              std::vector<std::string> parts;
              for (std::size_t y : ex.decode(v % ex.set().size())) parts.push_back(leaf(0, y));
              std::string head = names[a];
              if constexpr (std::is_same_v<T, node::ColimOver>)
                if (n.diagram.objects[a].coeff.size() != 1)
                  head += "#" + n.diagram.objects[a].coeff.label(k);
              return head + args(parts, '{', '}');
            }
          fail(ErrorKind::InternalInvariant, "describe: empty colimit class");
        } else {
          return detail::mu_param_describe(n, xs, idx, leaf, opts);
        }
      },
      e->v);
}

inline std::string describe(const FunctorExpr& e, const std::vector<FiniteSet>& xs, std::size_t idx,
                            const LeafDescriber& leaf, const EvalOptions& opts = {}) {
  return describe(e, xs, 0, idx, leaf, opts);
}

/// Canonical map colim_i F(D_i) -> F(colim_i D_i) for a unary F.
inline ProductMapReport preservation_map(const FunctorExpr& f, const Diagram& d,
                                         const EvalOptions& opts = {}) {
  Cocone inner = subdiagram_colimit(d);
  Diagram fd;
  for (std::size_t p = 0; p < d.size(); ++p) fd.add(d.indices[p], eval_functor(f, d.objects[p], opts));
  for (const auto& [e, g] : d.arrows) fd.connect(e.first, e.second, eval_functor_mor(f, g, opts));
  Cocone outer = subdiagram_colimit(fd);
  FiniteSet target = eval_functor(f, inner.apex, opts);
  std::vector<FiniteFn> maps;
  for (std::size_t p = 0; p < d.size(); ++p) maps.push_back(eval_functor_mor(f, inner.legs[p], opts));
  FiniteFn m = outer.induced_map(maps, target);
  bool inj = is_injective(m), surj = is_surjective(m);
  return {std::move(m), inj, surj};
}

}  // namespace sizedmu

#include "sizedmu/iteration.hpp"
