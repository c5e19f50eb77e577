#pragma once

// Sizes: transitive, directed, well-founded orders used to index iterations.
// Two backends are provided: the natural numbers and the plump order on
// W-trees of a signature extended with a fresh nullary and binary symbol.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sizedmu/signature.hpp"

namespace sizedmu {

class SizeIndex {
 public:
  SizeIndex() : payload_(std::uint64_t{0}) {}
  static SizeIndex nat(std::uint64_t n) { return SizeIndex(n); }
  static SizeIndex plump(WTree t) { return SizeIndex(std::move(t)); }

  bool is_nat() const noexcept { return std::holds_alternative<std::uint64_t>(payload_); }
  bool is_plump() const noexcept { return !is_nat(); }
  std::uint64_t numeral() const { return std::get<std::uint64_t>(payload_); }
  const WTree& tree() const { return std::get<WTree>(payload_); }

  friend bool operator==(const SizeIndex& a, const SizeIndex& b) { return a.payload_ == b.payload_; }
  friend std::strong_ordering operator<=>(const SizeIndex& a, const SizeIndex& b) {
    if (a.is_nat() != b.is_nat()) return a.is_nat() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_nat()) return a.numeral() <=> b.numeral();
    return a.tree() <=> b.tree();
  }

 private:
  explicit SizeIndex(std::uint64_t n) : payload_(n) {}
  explicit SizeIndex(WTree t) : payload_(std::move(t)) {}
  std::variant<std::uint64_t, WTree> payload_;
};

struct PlumpVerdict {
  bool lt;
  bool leq;
};

namespace detail {

inline bool plump_leq(const WTree& s, const WTree& t);

// t < sup_a f  iff  t <= f(x) for some x
inline bool plump_lt(const WTree& s, const WTree& t) {
  return std::any_of(t.children.begin(), t.children.end(),
                     [&](const WTree& c) { return plump_leq(s, c); });
}

// sup_a f <= t  iff  f(x) < t for all x
inline bool plump_leq(const WTree& s, const WTree& t) {
  return std::all_of(s.children.begin(), s.children.end(),
                     [&](const WTree& c) { return plump_lt(c, t); });
}

}  // namespace detail

/// Decides both plump relations between s and t by structural recursion.
inline PlumpVerdict plump_compare(const WTree& s, const WTree& t) {
  return {detail::plump_lt(s, t), detail::plump_leq(s, t)};
}

class SizeBackend {
 public:
  enum class Kind { nat, plump };

  static SizeBackend nat() { return SizeBackend(); }

  /// Plump order over sig extended by fresh symbols n:0 and b:2.
  static SizeBackend plump(const Signature& sig, std::string sig_name = "") {
    SizeBackend k;
    k.kind_ = Kind::plump;
    k.base_ = std::make_shared<Signature>(sig);
    k.sig_name_ = std::move(sig_name);
    std::vector<std::string> names;
    std::vector<std::size_t> arities;
    for (std::size_t a = 0; a < sig.op_count(); ++a) {
      names.push_back(sig.name(a));
      arities.push_back(sig.arity(a));
    }
    auto fresh = [&](std::string stem) {
      while (std::find(names.begin(), names.end(), stem) != names.end()) stem += '\'';
      return stem;
    };
    k.nullary_ = names.size();
    names.push_back(fresh("n"));
    arities.push_back(0);
    k.binary_ = names.size();
    names.push_back(fresh("b"));
    arities.push_back(2);
    k.augmented_ = std::make_shared<Signature>(std::move(names), std::move(arities));
    return k;
  }

  Kind kind() const noexcept { return kind_; }
  bool is_nat() const noexcept { return kind_ == Kind::nat; }

  std::string name() const {
    return is_nat() ? std::string("nat") : "plump:" + sig_name_;
  }

  /// The extended signature whose trees are the indices (plump only).
  const Signature& augmented() const { return *augmented_; }
  const Signature& base() const { return *base_; }
  std::size_t nullary_symbol() const noexcept { return nullary_; }
  std::size_t binary_symbol() const noexcept { return binary_; }

  bool lt(const SizeIndex& a, const SizeIndex& b) const {
    check(a);
    check(b);
    if (is_nat()) return a.numeral() < b.numeral();
    return detail::plump_lt(a.tree(), b.tree());
  }

  bool leq(const SizeIndex& a, const SizeIndex& b) const {
    check(a);
    check(b);
    if (is_nat()) return a.numeral() <= b.numeral();
    return detail::plump_leq(a.tree(), b.tree());
  }

  SizeIndex bottom() const {
    if (is_nat()) return SizeIndex::nat(0);
    return SizeIndex::plump(sup(nullary_));
  }

  SizeIndex join(const SizeIndex& a, const SizeIndex& b) const {
    check(a);
    check(b);
    if (is_nat()) return SizeIndex::nat(std::max(a.numeral(), b.numeral()) + 1);
    return SizeIndex::plump(sup(binary_, {a.tree(), b.tree()}));
  }

  SizeIndex succ(const SizeIndex& a) const { return join(a, a); }

  /// Finite family such that every j < i is <= some member.
  std::vector<SizeIndex> predecessor_basis(const SizeIndex& i) const {
    check(i);
    if (is_nat()) {
      if (i.numeral() == 0) return {};
      return {SizeIndex::nat(i.numeral() - 1)};
    }
    std::vector<SizeIndex> out;
    for (const WTree& c : i.tree().children) out.push_back(SizeIndex::plump(c));
    return out;
  }

  /// Numeral for nat, tree height for plump.
  std::size_t rank(const SizeIndex& i) const {
    check(i);
    return is_nat() ? static_cast<std::size_t>(i.numeral()) : height(i.tree());
  }

  std::string render(const SizeIndex& i) const {
    check(i);
    if (is_nat()) return std::to_string(i.numeral());
    return sizedmu::render(*augmented_, i.tree());
  }

  /// i, succ i, succ succ i, ... starting from bottom.
  SizeIndex stage(std::size_t n) const {
    SizeIndex i = bottom();
    for (std::size_t k = 0; k < n; ++k) i = succ(i);
    return i;
  }

  /// Upper bound for an op's argument family: sup_a f when the op belongs to
  /// this backend's base signature, 1 + max for nat, a fold of joins otherwise.
  SizeIndex bound(std::size_t op, const std::vector<SizeIndex>& family,
                  const Signature& sig) const {
    if (family.empty()) return bottom();
    if (is_nat()) {
      std::uint64_t m = 0;
      for (const auto& f : family) m = std::max(m, f.numeral());
      return SizeIndex::nat(m + 1);
    }
    if (sig == *base_ && op < base_->op_count()) {
      std::vector<WTree> ch;
      for (const auto& f : family) ch.push_back(f.tree());
      return SizeIndex::plump(sup(op, std::move(ch)));
    }
    SizeIndex acc = family.front();
    for (std::size_t k = 1; k < family.size(); ++k) acc = join(acc, family[k]);
    return family.size() == 1 ? succ(acc) : acc;
  }

 private:
  SizeBackend() = default;

  void check(const SizeIndex& i) const {
    if (is_nat() != i.is_nat())
      fail(ErrorKind::ShapeMismatch, "size index belongs to a different backend");
    if (!is_nat() && !well_formed(*augmented_, i.tree()))
      fail(ErrorKind::ShapeMismatch, "plump index is not a tree of the size signature");
  }

  Kind kind_ = Kind::nat;
  std::string sig_name_;
  std::shared_ptr<const Signature> base_;
  std::shared_ptr<const Signature> augmented_;
  std::size_t nullary_ = 0;
  std::size_t binary_ = 0;
};

inline SizeBackend nat_backend() { return SizeBackend::nat(); }

inline SizeBackend kappa_sigma(const Signature& sig, std::string name = "") {
  return SizeBackend::plump(sig, std::move(name));
}

struct FilteredSample {
  std::size_t op;
  std::vector<SizeIndex> family;
};

struct FilteredReport {
  bool ok = true;
  std::vector<SizeIndex> witnesses;
};

/// For every sampled f : B(a) -> kappa, finds i with f(x) < i for all x and
/// confirms each comparison with the backend's decision procedure.
inline FilteredReport filtered_sample_check(const SizeBackend& kappa, const Signature& sig,
                                            const std::vector<FilteredSample>& samples) {
  FilteredReport r;
  for (const auto& s : samples) {
    if (s.op >= sig.op_count() || s.family.size() != sig.arity(s.op))
      fail(ErrorKind::ShapeMismatch, "filtered sample does not match the op's arity");
    SizeIndex w = kappa.bound(s.op, s.family, sig);
    for (const auto& f : s.family)
      if (!kappa.lt(f, w)) r.ok = false;
    r.witnesses.push_back(std::move(w));
  }
  return r;
}

}  // namespace sizedmu
