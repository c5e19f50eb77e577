#pragma once

// Signatures (containers), their polynomial functors and well-founded trees.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sizedmu/finset.hpp"

namespace sizedmu {

/// A container (A, B): operation symbols with finite arities.
class Signature {
 public:
  Signature() = default;
  Signature(std::vector<std::string> names, std::vector<std::size_t> arities)
      : ops_(names.size(), names), arity_(std::move(arities)) {
    if (arity_.size() != ops_.size())
      fail(ErrorKind::ShapeMismatch, "signature: one arity per operation symbol required");
  }

  static Signature empty() { return Signature({}, {}); }

  const FiniteSet& ops() const noexcept { return ops_; }
  std::size_t op_count() const noexcept { return ops_.size(); }
  std::size_t arity(std::size_t op) const { return arity_.at(op); }
  FiniteSet arity_set(std::size_t op) const { return FiniteSet(arity(op)); }
  const std::vector<std::size_t>& arities() const noexcept { return arity_; }
  std::string name(std::size_t op) const { return ops_.label(op); }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t a = 0; a < op_count(); ++a)
      if (ops_.label(a) == name) return a;
    return std::nullopt;
  }

  /// Structural equality: same arities in the same order. Names are display data.
  friend bool operator==(const Signature& a, const Signature& b) {
    return a.arity_ == b.arity_;
  }

 private:
  FiniteSet ops_;
  std::vector<std::size_t> arity_;
};

/// A well-founded tree sup_a f. Ordered lexicographically on (op, children).
struct WTree {
  std::size_t op = 0;
  std::vector<WTree> children;

  friend bool operator==(const WTree& a, const WTree& b) {
    return a.op == b.op && a.children == b.children;
  }
  friend std::strong_ordering operator<=>(const WTree& a, const WTree& b) {
    if (auto c = a.op <=> b.op; c != 0) return c;
    const std::size_t n = std::min(a.children.size(), b.children.size());
    for (std::size_t k = 0; k < n; ++k)
      if (auto c = a.children[k] <=> b.children[k]; c != 0) return c;
    return a.children.size() <=> b.children.size();
  }
};

inline WTree sup(std::size_t op, std::vector<WTree> children = {}) {
  return WTree{op, std::move(children)};
}

/// Height of a nullary sup is 0.
inline std::size_t height(const WTree& t) {
  std::size_t h = 0;
  for (const WTree& c : t.children) h = std::max(h, height(c) + 1);
  return h;
}

inline bool well_formed(const Signature& sig, const WTree& t) {
  if (t.op >= sig.op_count() || t.children.size() != sig.arity(t.op)) return false;
  return std::all_of(t.children.begin(), t.children.end(),
                     [&](const WTree& c) { return well_formed(sig, c); });
}

inline std::string render(const Signature& sig, const WTree& t) {
  std::string s = sig.name(t.op);
  if (t.children.empty()) return s;
  s += '(';
  for (std::size_t k = 0; k < t.children.size(); ++k) {
    if (k) s += ',';
    s += render(sig, t.children[k]);
  }
  s += ')';
  return s;
}

/// Sum over a family of signatures. Each op of the sum remembers which part
/// and which op of that part it came from.
struct SignatureSum {
  Signature sum;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
};

inline SignatureSum signature_sum(const std::vector<Signature>& parts) {
  std::vector<std::string> names;
  std::vector<std::size_t> arities;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  for (std::size_t c = 0; c < parts.size(); ++c)
    for (std::size_t a = 0; a < parts[c].op_count(); ++a) {
      names.push_back(std::to_string(c) + "." + parts[c].name(a));
      arities.push_back(parts[c].arity(a));
      origin.emplace_back(c, a);
    }
  return SignatureSum{Signature(std::move(names), std::move(arities)), std::move(origin)};
}

/// Encoding of sum_a X^{B(a)}: summand a occupies a contiguous block, each
/// block enumerated as an exponential.
class ContainerLayout {
 public:
  ContainerLayout(const Signature& sig, std::size_t carrier)
      : carrier_(carrier), offsets_{0} {
    for (std::size_t a = 0; a < sig.op_count(); ++a) {
      blocks_.emplace_back(carrier, sig.arity(a));
      offsets_.push_back(checked_add(offsets_.back(), blocks_.back().set().size()));
    }
  }

  FiniteSet set() const { return FiniteSet(offsets_.back()); }
  std::size_t carrier() const noexcept { return carrier_; }

  std::size_t encode(std::size_t op, std::span<const std::size_t> args) const {
    return offsets_.at(op) + blocks_.at(op).encode(args);
  }

  std::pair<std::size_t, std::vector<std::size_t>> decode(std::size_t idx) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), idx);
    std::size_t op = static_cast<std::size_t>(it - offsets_.begin()) - 1;
    return {op, blocks_[op].decode(idx - offsets_[op])};
  }

 private:
  std::size_t carrier_;
  std::vector<Exponential> blocks_;
  std::vector<std::size_t> offsets_;
};

inline FiniteSet container_apply(const Signature& sig, const FiniteSet& x) {
  return ContainerLayout(sig, x.size()).set();
}

/// Post-composes every argument tuple with f.
inline FiniteFn container_map(const Signature& sig, const FiniteFn& f) {
  ContainerLayout src(sig, f.dom().size());
  ContainerLayout dst(sig, f.cod().size());
  const std::size_t n = src.set().size();
  std::vector<std::size_t> t(n);
  for (std::size_t e = 0; e < n; ++e) {
    auto [op, args] = src.decode(e);
    for (std::size_t& v : args) v = f(v);
    t[e] = dst.encode(op, args);
  }
  return FiniteFn(src.set(), dst.set(), std::move(t));
}

/// All trees of height < depth, sorted canonically.
inline std::vector<WTree> wtype_enumerate(const Signature& sig, std::size_t depth) {
  std::vector<WTree> level;  // trees of height < k
  for (std::size_t k = 0; k < depth; ++k) {
    std::vector<WTree> next;
    for (std::size_t a = 0; a < sig.op_count(); ++a) {
      Exponential e(level.size(), sig.arity(a));
      for (std::size_t idx = 0; idx < e.set().size(); ++idx) {
        std::vector<WTree> ch;
        for (std::size_t c : e.decode(idx)) ch.push_back(level[c]);
        next.push_back(sup(a, std::move(ch)));
      }
    }
    std::sort(next.begin(), next.end());
    level = std::move(next);
  }
  return level;
}

}  // namespace sizedmu
