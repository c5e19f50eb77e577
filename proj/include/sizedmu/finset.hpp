#pragma once

// Finite sets and total functions: the working category of the engine.
// Elements are canonical indices 0..n-1. Labels are display metadata only
// and never take part in equality.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sizedmu/error.hpp"

namespace sizedmu {

/// Upper bound on the cardinality of any materialised set. Iterations that
/// would exceed it are reported as budget exhaustion rather than attempted.
inline constexpr std::size_t kMaxCardinality = std::size_t{1} << 24;

class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::size_t size) : size_(size) {}
  FiniteSet(std::size_t size, std::vector<std::string> labels)
      : size_(size), labels_(std::move(labels)) {
    if (labels_->size() != size_)
      fail(ErrorKind::ShapeMismatch, "label count differs from set size");
    std::set<std::string> seen(labels_->begin(), labels_->end());
    if (seen.size() != labels_->size())
      fail(ErrorKind::ShapeMismatch, "duplicate element label");
  }

  static FiniteSet empty() { return FiniteSet(0); }
  static FiniteSet unit() { return FiniteSet(1); }

  std::size_t size() const noexcept { return size_; }
  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::optional<std::vector<std::string>>& labels() const noexcept {
    return labels_;
  }

  std::string label(std::size_t x) const {
    if (labels_) return (*labels_)[x];
    return std::to_string(x);
  }

  friend bool operator==(const FiniteSet& a, const FiniteSet& b) {
    return a.size_ == b.size_;
  }

 private:
  std::size_t size_ = 0;
  std::optional<std::vector<std::string>> labels_;
};

class FiniteFn {
 public:
  FiniteFn() = default;
  FiniteFn(FiniteSet dom, FiniteSet cod, std::vector<std::size_t> table)
      : dom_(std::move(dom)), cod_(std::move(cod)), table_(std::move(table)) {
    if (table_.size() != dom_.size())
      fail(ErrorKind::IllTypedArrow, "function table length " +
                                         std::to_string(table_.size()) +
                                         " differs from domain size " +
                                         std::to_string(dom_.size()));
    for (std::size_t y : table_)
      if (y >= cod_.size())
        fail(ErrorKind::IllTypedArrow,
             "function value " + std::to_string(y) + " outside codomain of size " +
                 std::to_string(cod_.size()));
  }

  static FiniteFn identity(const FiniteSet& x) {
    std::vector<std::size_t> t(x.size());
    std::iota(t.begin(), t.end(), std::size_t{0});
    return FiniteFn(x, x, std::move(t));
  }

  /// The unique map out of the empty set.
  static FiniteFn from_empty(const FiniteSet& cod) {
    return FiniteFn(FiniteSet::empty(), cod, {});
  }

  static FiniteFn constant(const FiniteSet& dom, const FiniteSet& cod,
                           std::size_t value) {
    return FiniteFn(dom, cod, std::vector<std::size_t>(dom.size(), value));
  }

  const FiniteSet& dom() const noexcept { return dom_; }
  const FiniteSet& cod() const noexcept { return cod_; }
  const std::vector<std::size_t>& table() const noexcept { return table_; }

  std::size_t operator()(std::size_t x) const { return table_.at(x); }

  friend bool operator==(const FiniteFn& a, const FiniteFn& b) {
    return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.table_ == b.table_;
  }

 private:
  FiniteSet dom_;
  FiniteSet cod_;
  std::vector<std::size_t> table_;
};

/// g after f.
inline FiniteFn compose(const FiniteFn& g, const FiniteFn& f) {
  if (f.cod().size() != g.dom().size())
    fail(ErrorKind::IllTypedArrow, "composition of non-matching functions");
  std::vector<std::size_t> t(f.dom().size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = g(f(x));
  return FiniteFn(f.dom(), g.cod(), std::move(t));
}

inline bool is_injective(const FiniteFn& f) {
  std::vector<bool> hit(f.cod().size(), false);
  for (std::size_t y : f.table()) {
    if (hit[y]) return false;
    hit[y] = true;
  }
  return true;
}

inline bool is_surjective(const FiniteFn& f) {
  std::vector<bool> hit(f.cod().size(), false);
  for (std::size_t y : f.table()) hit[y] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

/// True iff f : x -> y is a bijection.
inline bool iso_check(const FiniteSet& x, const FiniteSet& y, const FiniteFn& f) {
  if (f.dom().size() != x.size() || f.cod().size() != y.size())
    fail(ErrorKind::IllTypedArrow, "iso_check: function does not have the given type");
  return x.size() == y.size() && is_injective(f);
}

inline FiniteFn inverse(const FiniteFn& f) {
  if (!iso_check(f.dom(), f.cod(), f))
    fail(ErrorKind::InternalInvariant, "inverse of a non-bijective function");
  std::vector<std::size_t> t(f.cod().size());
  for (std::size_t x = 0; x < f.dom().size(); ++x) t[f(x)] = x;
  return FiniteFn(f.cod(), f.dom(), std::move(t));
}

inline std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > kMaxCardinality / a)
    fail(ErrorKind::BudgetExceeded, "set cardinality exceeds " +
                                        std::to_string(kMaxCardinality));
  return a * b;
}

inline std::size_t checked_add(std::size_t a, std::size_t b) {
  if (a + b > kMaxCardinality)
    fail(ErrorKind::BudgetExceeded, "set cardinality exceeds " +
                                        std::to_string(kMaxCardinality));
  return a + b;
}

inline std::size_t checked_pow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

/// The set X^B of all total maps B -> X. Tables are enumerated
/// lexicographically with entry 0 most significant.
class Exponential {
 public:
  Exponential(std::size_t base, std::size_t exponent)
      : base_(base), exponent_(exponent), set_(checked_pow(base, exponent)) {}

  const FiniteSet& set() const noexcept { return set_; }
  std::size_t base() const noexcept { return base_; }
  std::size_t exponent() const noexcept { return exponent_; }

  std::size_t encode(std::span<const std::size_t> table) const {
    if (table.size() != exponent_)
      fail(ErrorKind::ShapeMismatch, "exponential encode: wrong table length");
    std::size_t idx = 0;
    for (std::size_t v : table) {
      if (v >= base_) fail(ErrorKind::ShapeMismatch, "exponential encode: entry out of range");
      idx = idx * base_ + v;
    }
    return idx;
  }

  std::vector<std::size_t> decode(std::size_t idx) const {
    if (idx >= set_.size())
      fail(ErrorKind::ShapeMismatch, "exponential decode: index out of range");
    std::vector<std::size_t> t(exponent_);
    for (std::size_t k = exponent_; k-- > 0;) {
      t[k] = idx % base_;
      idx /= base_;
    }
    return t;
  }

 private:
  std::size_t base_;
  std::size_t exponent_;
  FiniteSet set_;
};

inline Exponential exponential(const FiniteSet& x, const FiniteSet& b) {
  return Exponential(x.size(), b.size());
}

/// Disjoint sum with offsets; summand k occupies [offset(k), offset(k+1)).
class Coproduct {
 public:
  explicit Coproduct(std::span<const std::size_t> sizes) : offsets_{0} {
    for (std::size_t s : sizes) offsets_.push_back(checked_add(offsets_.back(), s));
  }

  FiniteSet set() const { return FiniteSet(offsets_.back()); }
  std::size_t parts() const noexcept { return offsets_.size() - 1; }
  std::size_t offset(std::size_t k) const { return offsets_.at(k); }
  std::size_t size_of(std::size_t k) const { return offsets_.at(k + 1) - offsets_[k]; }
  std::size_t inject(std::size_t k, std::size_t x) const { return offsets_.at(k) + x; }

  std::pair<std::size_t, std::size_t> locate(std::size_t idx) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), idx);
    std::size_t k = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {k, idx - offsets_[k]};
  }

 private:
  std::vector<std::size_t> offsets_;
};

/// Finite cartesian product, mixed radix with component 0 most significant.
class Product {
 public:
  explicit Product(std::span<const std::size_t> sizes)
      : sizes_(sizes.begin(), sizes.end()), total_(1) {
    for (std::size_t s : sizes_) total_ = checked_mul(total_, s);
  }

  FiniteSet set() const { return FiniteSet(total_); }
  std::size_t arity() const noexcept { return sizes_.size(); }
  std::size_t component_size(std::size_t k) const { return sizes_.at(k); }

  std::size_t encode(std::span<const std::size_t> tuple) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < sizes_.size(); ++k) idx = idx * sizes_[k] + tuple[k];
    return idx;
  }

  std::vector<std::size_t> decode(std::size_t idx) const {
    std::vector<std::size_t> t(sizes_.size());
    for (std::size_t k = sizes_.size(); k-- > 0;) {
      t[k] = idx % sizes_[k];
      idx /= sizes_[k];
    }
    return t;
  }

 private:
  std::vector<std::size_t> sizes_;
  std::size_t total_;
};

struct Relation {
  FiniteSet base;
  std::set<std::pair<std::size_t, std::size_t>> pairs;

  Relation() = default;
  Relation(FiniteSet b, std::set<std::pair<std::size_t, std::size_t>> ps)
      : base(std::move(b)), pairs(std::move(ps)) {
    for (const auto& [x, y] : pairs)
      if (x >= base.size() || y >= base.size())
        fail(ErrorKind::ShapeMismatch, "relation pair outside its base set");
  }

  bool contains(std::size_t x, std::size_t y) const { return pairs.count({x, y}) > 0; }

  static Relation diagonal(const FiniteSet& b) {
    std::set<std::pair<std::size_t, std::size_t>> ps;
    for (std::size_t x = 0; x < b.size(); ++x) ps.insert({x, x});
    return Relation(b, std::move(ps));
  }
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // The smaller root wins so that roots are least class members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Classes numbered in order of their least element.
inline FiniteFn projection_from(UnionFind& uf, std::size_t n) {
  std::vector<std::size_t> class_of_root(n, n);
  std::vector<std::size_t> t(n);
  std::size_t classes = 0;
  for (std::size_t x = 0; x < n; ++x) {
    std::size_t r = uf.find(x);
    if (class_of_root[r] == n) class_of_root[r] = classes++;
    t[x] = class_of_root[r];
  }
  return FiniteFn(FiniteSet(n), FiniteSet(classes), std::move(t));
}

}  // namespace detail

struct Quotient {
  FiniteSet classes;
  FiniteFn projection;
  /// Least element of each class.
  std::vector<std::size_t> representatives;
};

/// Quotient by the equivalence relation generated by rel.
inline Quotient quotient(const FiniteSet& base, const Relation& rel) {
  if (rel.base.size() != base.size())
    fail(ErrorKind::ShapeMismatch, "relation is over a different base set");
  detail::UnionFind uf(base.size());
  for (const auto& [x, y] : rel.pairs) uf.unite(x, y);
  FiniteFn proj = detail::projection_from(uf, base.size());
  std::vector<std::size_t> reps(proj.cod().size(), base.size());
  for (std::size_t x = base.size(); x-- > 0;) reps[proj(x)] = x;
  FiniteSet classes = proj.cod();
  return Quotient{classes, std::move(proj), std::move(reps)};
}

inline Relation kernel(const FiniteFn& p) {
  std::set<std::pair<std::size_t, std::size_t>> ps;
  const std::size_t n = p.dom().size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (p(a) == p(b)) ps.insert({a, b});
  return Relation(p.dom(), std::move(ps));
}

inline bool is_reflexive(const Relation& r) {
  for (std::size_t x = 0; x < r.base.size(); ++x)
    if (!r.contains(x, x)) return false;
  return true;
}

inline bool is_symmetric(const Relation& r) {
  return std::all_of(r.pairs.begin(), r.pairs.end(),
                     [&](const auto& p) { return r.contains(p.second, p.first); });
}

inline bool is_transitive(const Relation& r) {
  for (const auto& [a, b] : r.pairs)
    for (auto it = r.pairs.lower_bound({b, 0}); it != r.pairs.end() && it->first == b; ++it)
      if (!r.contains(a, it->second)) return false;
  return true;
}

inline nlohmann::json to_json(const FiniteSet& s) {
  nlohmann::json j;
  j["size"] = s.size();
  if (s.labels()) j["labels"] = *s.labels();
  return j;
}

inline nlohmann::json to_json(const FiniteFn& f) {
  nlohmann::json j;
  j["size"] = f.dom().size();
  if (f.dom().labels()) j["labels"] = *f.dom().labels();
  j["cod"] = f.cod().size();
  j["table"] = f.table();
  return j;
}

}  // namespace sizedmu
