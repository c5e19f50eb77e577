#pragma once

// Colimits (and the few limits the deflationary iteration needs) of finite
// diagrams of finite sets.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sizedmu/finset.hpp"
#include "sizedmu/size.hpp"

namespace sizedmu {

/// A semi-functor from a finite fragment of a size into finite sets.
/// Edges are position pairs (j, i) meaning j < i.
struct Diagram {
  std::vector<SizeIndex> indices;
  std::vector<FiniteSet> objects;
  std::map<std::pair<std::size_t, std::size_t>, FiniteFn> arrows;

  std::size_t size() const noexcept { return objects.size(); }

  bool has_edge(std::size_t j, std::size_t i) const { return arrows.count({j, i}) > 0; }
  const FiniteFn& arrow(std::size_t j, std::size_t i) const { return arrows.at({j, i}); }

  std::optional<std::size_t> position(const SizeIndex& i) const {
    auto it = std::find(indices.begin(), indices.end(), i);
    if (it == indices.end()) return std::nullopt;
    return static_cast<std::size_t>(it - indices.begin());
  }

  std::size_t add(SizeIndex idx, FiniteSet obj) {
    indices.push_back(std::move(idx));
    objects.push_back(std::move(obj));
    return objects.size() - 1;
  }

  void connect(std::size_t j, std::size_t i, FiniteFn f) { arrows[{j, i}] = std::move(f); }

  /// Positions strictly below i.
  std::vector<std::size_t> below(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j)
      if (has_edge(j, i)) out.push_back(j);
    return out;
  }

  /// The full subdiagram on the given positions, in that order.
  Diagram restrict(const std::vector<std::size_t>& keep) const {
    Diagram d;
    for (std::size_t p : keep) d.add(indices.at(p), objects.at(p));
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = 0; b < keep.size(); ++b)
        if (has_edge(keep[a], keep[b])) d.connect(a, b, arrow(keep[a], keep[b]));
    return d;
  }

  /// Arrow typing, composition law and irreflexivity.
  void validate() const {
    if (indices.size() != objects.size())
      fail(ErrorKind::NonFunctorialDiagram, "diagram has unequal index and object counts");
    for (const auto& [e, f] : arrows) {
      auto [j, i] = e;
      if (j >= size() || i >= size() || j == i)
        fail(ErrorKind::NonFunctorialDiagram, "diagram edge out of range or reflexive");
      if (f.dom().size() != objects[j].size() || f.cod().size() != objects[i].size())
        fail(ErrorKind::NonFunctorialDiagram,
             "arrow " + std::to_string(j) + "->" + std::to_string(i) + " is ill-typed");
    }
    for (const auto& [e1, f] : arrows)
      for (const auto& [e2, g] : arrows) {
        if (e1.second != e2.first) continue;
        auto k = e1.first, i = e2.second;
        auto it = arrows.find({k, i});
        if (it == arrows.end())
          fail(ErrorKind::NonFunctorialDiagram, "edge relation is not transitive");
        if (compose(g, f) != it->second)
          fail(ErrorKind::NonFunctorialDiagram,
               "arrows do not compose at " + std::to_string(k) + "<" +
                   std::to_string(e1.second) + "<" + std::to_string(i));
      }
  }

  /// Every pair of positions has a common upper bound (reflexively).
  bool directed() const {
    auto under = [&](std::size_t a, std::size_t u) { return a == u || has_edge(a, u); };
    for (std::size_t a = 0; a < size(); ++a)
      for (std::size_t b = a + 1; b < size(); ++b) {
        bool found = false;
        for (std::size_t u = 0; u < size() && !found; ++u) found = under(a, u) && under(b, u);
        if (!found) return false;
      }
    return true;
  }
};

struct Cocone {
  FiniteSet apex;
  std::vector<FiniteFn> legs;

  std::size_t class_of(std::size_t p, std::size_t x) const { return legs.at(p)(x); }

  /// The unique u : apex -> target with u . leg_p = maps[p] for every p.
  /// Throws NonFunctorialDiagram when the maps do not form a cocone.
  FiniteFn induced_map(const std::vector<FiniteFn>& maps, const FiniteSet& target) const {
    if (maps.size() != legs.size())
      fail(ErrorKind::IndexMismatch, "induced_map: one map per leg required");
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> t(apex.size(), unset);
    for (std::size_t p = 0; p < legs.size(); ++p) {
      if (maps[p].dom().size() != legs[p].dom().size() || maps[p].cod().size() != target.size())
        fail(ErrorKind::IllTypedArrow, "induced_map: map does not match leg");
      for (std::size_t x = 0; x < legs[p].dom().size(); ++x) {
        std::size_t c = legs[p](x);
        if (t[c] == unset)
          t[c] = maps[p](x);
        else if (t[c] != maps[p](x))
          fail(ErrorKind::NonFunctorialDiagram, "induced_map: maps disagree on a class");
      }
    }
    for (std::size_t c = 0; c < t.size(); ++c)
      if (t[c] == unset) fail(ErrorKind::InternalInvariant, "cocone legs are not jointly surjective");
    return FiniteFn(apex, target, std::move(t));
  }
};

namespace detail {

/// Sum of the objects quotiented by (j, x) ~ (i, f(x)) for every arrow f : j -> i.
inline Cocone sum_quotient(const std::vector<FiniteSet>& objects,
                           const std::vector<std::pair<std::pair<std::size_t, std::size_t>,
                                                       const FiniteFn*>>& arrows) {
  std::vector<std::size_t> sizes;
  for (const auto& o : objects) sizes.push_back(o.size());
  Coproduct sum(sizes);
  detail::UnionFind uf(sum.set().size());
  for (const auto& [e, f] : arrows)
    for (std::size_t x = 0; x < f->dom().size(); ++x)
      uf.unite(sum.inject(e.first, x), sum.inject(e.second, (*f)(x)));
  FiniteFn proj = detail::projection_from(uf, sum.set().size());
  Cocone c{proj.cod(), {}};
  for (std::size_t p = 0; p < objects.size(); ++p) {
    std::vector<std::size_t> t(objects[p].size());
    for (std::size_t x = 0; x < t.size(); ++x) t[x] = proj(sum.inject(p, x));
    c.legs.emplace_back(objects[p], c.apex, std::move(t));
  }
  return c;
}

}  // namespace detail

/// Colimit of a directed (or empty) diagram as a quotient of the disjoint sum.
/// Apex elements are numbered by their least representative in the sum.
inline Cocone subdiagram_colimit(const Diagram& d) {
  d.validate();
  if (!d.directed()) fail(ErrorKind::NotDirected, "diagram index fragment is not directed");
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, const FiniteFn*>> arrows;
  for (const auto& [e, f] : d.arrows) arrows.push_back({e, &f});
  return detail::sum_quotient(d.objects, arrows);
}

/// c_{j,i} : colim_{k<j} D_k -> colim_{k<i} D_k, determined by
/// c_{j,i} . inc_k = inc_k for all k < j.
inline FiniteFn connecting_map(const Diagram& d, const SizeIndex& j, const SizeIndex& i) {
  auto pj = d.position(j), pi = d.position(i);
  if (!pj || !pi) fail(ErrorKind::NoSuchIndex, "connecting_map: index not in diagram");
  if (!d.has_edge(*pj, *pi)) fail(ErrorKind::NoSuchIndex, "connecting_map: indices are not related");
  auto below_j = d.below(*pj), below_i = d.below(*pi);
  Cocone cj = subdiagram_colimit(d.restrict(below_j));
  Cocone ci = subdiagram_colimit(d.restrict(below_i));
  std::vector<FiniteFn> maps;
  for (std::size_t k : below_j) {
    auto pos = std::find(below_i.begin(), below_i.end(), k);
    if (pos == below_i.end())
      fail(ErrorKind::NonFunctorialDiagram, "edge relation is not transitive");
    maps.push_back(ci.legs[static_cast<std::size_t>(pos - below_i.begin())]);
  }
  return cj.induced_map(maps, ci.apex);
}

struct CatArrow {
  std::size_t src;
  std::size_t dst;
  FiniteFn map;
};

/// Colimit of a finite category presented by objects and generating arrows:
/// the sum quotiented by (c, x) ~ (c', h(x)) for each h : c -> c'.
inline Cocone finite_cat_colimit(const std::vector<FiniteSet>& objects,
                                 const std::vector<CatArrow>& arrows) {
  std::vector<std::pair<std::pair<std::size_t, std::size_t>, const FiniteFn*>> as;
  for (const auto& a : arrows) {
    if (a.src >= objects.size() || a.dst >= objects.size() ||
        a.map.dom().size() != objects[a.src].size() ||
        a.map.cod().size() != objects[a.dst].size())
      fail(ErrorKind::IllTypedArrow, "finite_cat_colimit: arrow does not match its endpoints");
    as.push_back({{a.src, a.dst}, &a.map});
  }
  return detail::sum_quotient(objects, as);
}

struct ProductMapReport {
  FiniteFn map;
  bool injective;
  bool surjective;
};

/// can : colim_i prod_x F_x(D_i) -> prod_x colim_i F_x(D_i),
/// [i, f] |-> (x |-> [i, f(x)]). One diagram per x, all on the same indices.
inline ProductMapReport canonical_product_map(const std::vector<Diagram>& families) {
  if (families.empty()) {
    FiniteSet one = FiniteSet::unit();
    return {FiniteFn::identity(one), true, true};
  }
  const Diagram& shape = families.front();
  for (const auto& f : families) {
    if (f.indices != shape.indices)
      fail(ErrorKind::IndexMismatch, "canonical_product_map: families use different indices");
    if (f.arrows.size() != shape.arrows.size())
      fail(ErrorKind::IndexMismatch, "canonical_product_map: families use different edges");
    for (const auto& [e, g] : shape.arrows)
      if (!f.has_edge(e.first, e.second))
        fail(ErrorKind::IndexMismatch, "canonical_product_map: families use different edges");
  }
  const std::size_t nx = families.size();

  std::vector<Cocone> right;
  std::vector<std::size_t> right_sizes;
  for (const auto& f : families) {
    right.push_back(subdiagram_colimit(f));
    right_sizes.push_back(right.back().apex.size());
  }
  Product right_prod(right_sizes);

  Diagram prod;
  std::vector<Product> layouts;
  for (std::size_t p = 0; p < shape.size(); ++p) {
    std::vector<std::size_t> sizes;
    for (const auto& f : families) sizes.push_back(f.objects[p].size());
    layouts.emplace_back(sizes);
    prod.add(shape.indices[p], layouts.back().set());
  }
  for (const auto& [e, g] : shape.arrows) {
    auto [j, i] = e;
    std::vector<std::size_t> t(prod.objects[j].size());
    for (std::size_t v = 0; v < t.size(); ++v) {
      auto tuple = layouts[j].decode(v);
      for (std::size_t x = 0; x < nx; ++x) tuple[x] = families[x].arrow(j, i)(tuple[x]);
      t[v] = layouts[i].encode(tuple);
    }
    prod.connect(j, i, FiniteFn(prod.objects[j], prod.objects[i], std::move(t)));
  }
  Cocone left = subdiagram_colimit(prod);

  std::vector<FiniteFn> maps;
  for (std::size_t p = 0; p < shape.size(); ++p) {
    std::vector<std::size_t> t(prod.objects[p].size());
    for (std::size_t v = 0; v < t.size(); ++v) {
      auto tuple = layouts[p].decode(v);
      for (std::size_t x = 0; x < nx; ++x) tuple[x] = right[x].class_of(p, tuple[x]);
      t[v] = right_prod.encode(tuple);
    }
    maps.emplace_back(prod.objects[p], right_prod.set(), std::move(t));
  }
  FiniteFn can = left.induced_map(maps, right_prod.set());
  bool inj = is_injective(can), surj = is_surjective(can);
  return {std::move(can), inj, surj};
}

/// Bijectivity of colim(D^k) -> (colim D)^k on the given fragment.
inline bool colimit_commutes_with_finite_limits_check(const Diagram& d, std::size_t k) {
  if (!d.directed()) fail(ErrorKind::NotDirected, "finite-limit check needs a directed diagram");
  auto r = canonical_product_map(std::vector<Diagram>(k, d));
  return r.injective && r.surjective;
}

struct Cone {
  FiniteSet apex;
  std::vector<FiniteFn> legs;
};

/// Limit of a finite diagram: the compatible families (x_p)_p with
/// f(x_j) = x_i for every arrow f : j -> i, ordered lexicographically.
inline Cone finite_limit(const std::vector<FiniteSet>& objects, const std::vector<CatArrow>& arrows) {
  for (const auto& a : arrows)
    if (a.src >= objects.size() || a.dst >= objects.size() ||
        a.map.dom().size() != objects[a.src].size() ||
        a.map.cod().size() != objects[a.dst].size())
      fail(ErrorKind::IllTypedArrow, "finite_limit: arrow does not match its endpoints");
  const std::size_t n = objects.size();
  std::vector<std::vector<std::size_t>> families;
  std::vector<std::size_t> current(n);
  // Assign from the last position down; later positions tend to determine earlier ones.
  auto consistent = [&](std::size_t p) {
    for (const auto& a : arrows) {
      bool touches = a.src == p || a.dst == p;
      if (touches && a.src >= p && a.dst >= p && a.map(current[a.src]) != current[a.dst])
        return false;
    }
    return true;
  };
  auto search = [&](auto&& self, std::size_t remaining) -> void {
    if (remaining == 0) {
      families.push_back(current);
      if (families.size() > kMaxCardinality)
        fail(ErrorKind::BudgetExceeded, "limit cardinality exceeds bound");
      return;
    }
    std::size_t p = remaining - 1;
    for (std::size_t x = 0; x < objects[p].size(); ++x) {
      current[p] = x;
      if (consistent(p)) self(self, p);
    }
  };
  search(search, n);
  std::sort(families.begin(), families.end());
  Cone c{FiniteSet(families.size()), {}};
  for (std::size_t p = 0; p < n; ++p) {
    std::vector<std::size_t> t(families.size());
    for (std::size_t f = 0; f < families.size(); ++f) t[f] = families[f][p];
    c.legs.emplace_back(c.apex, objects[p], std::move(t));
  }
  return c;
}

inline nlohmann::json to_json(const Cocone& c) {
  nlohmann::json legs = nlohmann::json::array();
  for (const auto& l : c.legs) legs.push_back(l.table());
  return {{"apex", to_json(c.apex)}, {"legs", legs}};
}

}  // namespace sizedmu
