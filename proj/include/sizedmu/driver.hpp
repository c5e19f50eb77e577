#pragma once

// Executes parsed scripts and renders the results as text or JSON.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "sizedmu/checks.hpp"
#include "sizedmu/dsl.hpp"

namespace sizedmu {

/// Defaults for commands that do not set the corresponding option.
struct Flags {
  std::string size = "nat";
  std::size_t budget = 16;
  std::size_t depth = 3;
  std::uint64_t seed = 1;
};

struct RunResult {
  int exit_code = 0;
  nlohmann::json json;
  std::string text;
};

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::BudgetExceeded: return 2;
    case ErrorKind::NonFunctorialDiagram:
    case ErrorKind::NotDirected:
    case ErrorKind::InternalInvariant: return 3;
    default: return 1;
  }
}

namespace detail {

constexpr std::size_t kMaxListed = 256;
constexpr const char* kStationarityNote =
    "stationarity is semi-decided: a stage whose connecting map to its successor is a bijection "
    "is accepted, and the structure map is checked to be a bijection; budget exhaustion means "
    "no such stage was found, not that none exists";

inline std::string stages_text(const std::vector<StageRecord>& profile) {
  std::string s;
  for (const auto& r : profile) s += "  D[" + r.label + "] = " + std::to_string(r.size) + "\n";
  return s;
}

inline std::vector<std::string> elements(std::size_t n, const std::function<std::string(std::size_t)>& show) {
  std::vector<std::string> out;
  for (std::size_t e = 0; e < std::min(n, kMaxListed); ++e) out.push_back(show(e));
  return out;
}

inline std::string list_text(const std::vector<std::string>& xs, std::size_t total) {
  std::string s = "{";
  for (std::size_t k = 0; k < xs.size(); ++k) s += (k ? ", " : "") + xs[k];
  if (total > xs.size()) s += ", ...";
  return s + "}";
}

class Runner {
 public:
  Runner(const dsl::Script& script, const Flags& flags) : script_(script), flags_(flags) {}

  RunResult run() {
    RunResult out;
    out.json = {{"results", nlohmann::json::array()}};
    dsl::Environment env;
    for (const auto& st : script_.statements) {
      if (!std::holds_alternative<dsl::Command>(st.v)) {
        declare(env, st);
        continue;
      }
      const auto& cmd = std::get<dsl::Command>(st.v);
      nlohmann::json j = {{"command", cmd.verb}, {"line", st.pos.line}};
      std::string text = dsl::print(st) + "\n";
      int code = 0;
      try {
        code = execute(env, cmd, st.pos, j, text);
      } catch (const Error& e) {
        code = exit_code_for(e.kind());
        j["status"] = "error";
        j["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        text += "  error: " + std::string(to_string(e.kind())) + ": " + e.what() + "\n";
      }
      out.exit_code = std::max(out.exit_code, code);
      out.json["results"].push_back(std::move(j));
      out.text += text;
    }
    out.json["exitCode"] = out.exit_code;
    return out;
  }

 private:
  void declare(dsl::Environment& env, const dsl::Statement& st) {
    // commands only see the declarations that precede them
    seen_.statements.push_back(st);
    env = dsl::resolve(seen_);
  }

  std::size_t option(const dsl::Command& c, const char* key, std::size_t fallback) const {
    auto it = c.options.find(key);
    return it == c.options.end() ? fallback : std::stoul(it->second);
  }

  SizeBackend backend(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p,
                      std::string& name) const {
    auto it = c.options.find("size");
    name = it == c.options.end() ? flags_.size : it->second;
    return env.backend(name, p);
  }

  int execute(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p, nlohmann::json& j,
              std::string& text) {
    if (c.verb == "iterate") return iterate(env, c, p, j, text);
    if (c.verb == "mu") return mu(env, c, p, j, text, false);
    if (c.verb == "free") return mu(env, c, p, j, text, true);
    if (c.verb == "cata") return cata(env, c, p, j, text);
    if (c.verb == "nu") return nu(env, c, p, j, text);
    if (c.verb == "enumerate") return enumerate(env, c, p, j, text);
    return check(env, c, j, text);
  }

  static void functor_fields(const dsl::Environment& env, const std::string& name, const dsl::Pos& p,
                             nlohmann::json& j) {
    j["functor"] = name;
    j["expression"] = dsl::print(*env.functor(name, p).syntax);
  }

  int iterate(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p, nlohmann::json& j,
              std::string& text) {
    std::string size;
    SizeBackend kappa = backend(env, c, p, size);
    const std::size_t budget = option(c, "budget", flags_.budget);
    const std::size_t upto = option(c, "upto", 4);
    functor_fields(env, c.args[0], p, j);
    j["size"] = size;
    j["budget"] = budget;
    IterationState st(env.functor(c.args[0], p).expr, kappa, budget);
    int code = 0;
    try {
      for (std::size_t n = 0; n <= upto; ++n) st.compute(kappa.stage(n));
      j["status"] = "ok";
    } catch (const BudgetError& e) {
      j["status"] = "budgetExceeded";
      j["message"] = e.what();
      code = 2;
    }
    j["stages"] = to_json(st.profile());
    text += stages_text(st.profile());
    if (code) text += "  budget exceeded: " + j["message"].get<std::string>() + "\n";
    return code;
  }

  int mu(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p, nlohmann::json& j,
         std::string& text, bool free) {
    std::string size;
    SizeBackend kappa = backend(env, c, p, size);
    const std::size_t budget = option(c, "budget", flags_.budget);
    functor_fields(env, c.args[0], p, j);
    FunctorExpr f = env.functor(c.args[0], p).expr;
    if (free) {
      FiniteSet gens = env.set_operand(c.args[1], p);
      j["generators"] = to_json(gens);
      f = fx::sum({f, fx::constant(gens, c.args[1])});
    }
    j["size"] = size;
    j["budget"] = budget;
    MuResult r = mu_initial_algebra(f, kappa, budget);
    j["stages"] = to_json(r.profile);
    j["note"] = kStationarityNote;
    text += stages_text(r.profile);
    if (!r.stationary()) {
      j["status"] = "budgetExceeded";
      j["message"] = r.message;
      text += "  budget exceeded: " + r.message + "\n";
      return 2;
    }
    j["status"] = "stationary";
    j["stationaryAt"] = kappa.render(*r.stationary_at);
    IterationState& st = *r.state;
    const SizeIndex s = *r.stationary_at;
    const FiniteSet& carrier = r.algebra->carrier;
    auto show = [&](std::size_t e) { return st.describe(s, e); };
    auto elems = elements(carrier.size(), show);
    j["carrier"] = {{"size", carrier.size()}, {"elements", elems}};
    const FiniteFn& iota = r.algebra->structure;
    j["iota"] = to_json(iota);
    j["iotaBijective"] = r.iota_bijective;
    text += "  stationary at " + kappa.render(s) + "; carrier has " + std::to_string(carrier.size()) +
            " elements " + list_text(elems, carrier.size()) + "\n";
    text += std::string("  structure map is ") + (r.iota_bijective ? "" : "not ") + "a bijection\n";
    if (!r.iota_bijective) return 3;
    return 0;
  }

  int cata(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p, nlohmann::json& j,
           std::string& text) {
    std::string size;
    SizeBackend kappa = backend(env, c, p, size);
    const std::size_t budget = option(c, "budget", flags_.budget);
    functor_fields(env, c.args[0], p, j);
    j["algebra"] = c.args[1];
    j["size"] = size;
    j["budget"] = budget;
    const auto& alg = env.algebras.at(c.args[1]);
    if (alg.functor != c.args[0])
      fail(ErrorKind::NoAlgebra, "algebra '" + c.args[1] + "' is an algebra for " + alg.functor + ", not " + c.args[0]);
    FunctorExpr f = env.functor(c.args[0], p).expr;
    std::shared_ptr<IterationState> st;
    SizeIndex at;
    std::string verdict;
    if (auto it = c.options.find("at"); it != c.options.end()) {
      st = std::make_shared<IterationState>(f, kappa, budget);
      at = kappa.stage(std::stoul(it->second));
      try {
        st->compute(at);
      } catch (const BudgetError& e) {
        j["status"] = "budgetExceeded";
        j["message"] = e.what();
        j["stages"] = to_json(st->profile());
        text += stages_text(st->profile()) + "  budget exceeded: " + e.what() + "\n";
        return 2;
      }
      j["status"] = "ok";
    } else {
      MuResult r = mu_initial_algebra(f, kappa, budget);
      st = r.state;
      if (!r.stationary()) {
        j["status"] = "budgetExceeded";
        j["message"] = r.message;
        j["stages"] = to_json(r.profile);
        text += stages_text(r.profile) + "  budget exceeded: " + r.message + "\n";
        return 2;
      }
      at = *r.stationary_at;
      j["status"] = "stationary";
      j["stationaryAt"] = kappa.render(at);
      FiniteFn h = catamorphism(*st, alg.spec, at);
      const FiniteFn& iota = r.algebra->structure;
      bool hom = compose(h, iota) == compose(alg.spec.structure, eval_functor_mor(f, h));
      j["algebraMorphism"] = hom;
      verdict = std::string("  fold is ") + (hom ? "" : "not ") + "an algebra morphism out of the initial algebra\n";
    }
    j["stages"] = to_json(st->profile());
    j["index"] = kappa.render(at);
    FiniteFn h = catamorphism(*st, alg.spec, at);
    j["map"] = to_json(h);
    std::vector<std::string> rows;
    for (std::size_t e = 0; e < std::min(h.dom().size(), kMaxListed); ++e)
      rows.push_back(st->describe(at, e) + " -> " + alg.spec.carrier.label(h(e)));
    j["rows"] = rows;
    text = text + stages_text(st->profile()) + "  fold at " + kappa.render(at) + ":\n";
    for (const auto& row : rows) text += "    " + row + "\n";
    text += verdict;
    if (j.contains("algebraMorphism") && !j["algebraMorphism"].get<bool>()) return 3;
    return 0;
  }

  int nu(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p, nlohmann::json& j,
         std::string& text) {
    const std::size_t budget = option(c, "budget", flags_.budget);
    functor_fields(env, c.args[0], p, j);
    j["size"] = "nat";
    j["budget"] = budget;
    NuResult r = deflationary_nu(env.functor(c.args[0], p).expr, budget);
    std::vector<StageRecord> profile;
    for (std::size_t n = 0; n < r.sizes.size(); ++n) profile.push_back({SizeIndex::nat(n), std::to_string(n), r.sizes[n]});
    j["stages"] = to_json(profile);
    j["note"] = "stationarity is semi-decided: a stage whose restriction to its predecessor is a bijection is accepted";
    std::string s;
    for (const auto& rec : profile) s += "  nu[" + rec.label + "] = " + std::to_string(rec.size) + "\n";
    text += s;
    if (!r.stationary()) {
      j["status"] = "budgetExceeded";
      j["message"] = r.message;
      text += "  budget exceeded: " + r.message + "\n";
      return 2;
    }
    j["status"] = "stationary";
    j["stationaryAt"] = std::to_string(*r.stationary_at);
    j["carrier"] = {{"size", r.carrier.size()}};
    j["structure"] = to_json(*r.structure);
    text += "  stationary at " + std::to_string(*r.stationary_at) + "; carrier has " +
            std::to_string(r.carrier.size()) + " elements\n";
    return 0;
  }

  int enumerate(const dsl::Environment& env, const dsl::Command& c, const dsl::Pos& p, nlohmann::json& j,
                std::string& text) {
    const std::size_t depth = option(c, "depth", flags_.depth);
    const Signature& sig = env.signature(c.args[0], p);
    j["signature"] = c.args[0];
    j["depth"] = depth;
    std::vector<std::size_t> levels;
    for (std::size_t d = 0; d <= depth; ++d) levels.push_back(wtype_enumerate(sig, d).size());
    auto trees = wtype_enumerate(sig, depth);
    std::vector<std::string> shown;
    for (std::size_t k = 0; k < std::min(trees.size(), kMaxListed); ++k) shown.push_back(render(sig, trees[k]));
    j["status"] = "ok";
    j["levels"] = levels;
    j["count"] = trees.size();
    j["trees"] = shown;
    text += "  trees of height < " + std::to_string(depth) + ": " + std::to_string(trees.size()) + "\n";
    for (const auto& t : shown) text += "    " + t + "\n";
    if (trees.size() > shown.size()) text += "    ...\n";
    return 0;
  }

  int check(const dsl::Environment& env, const dsl::Command& c, nlohmann::json& j, std::string& text) {
    const std::uint64_t seed = c.options.count("seed") ? std::stoull(c.options.at("seed")) : flags_.seed;
    j["seed"] = seed;
    std::vector<SuiteResult> suites;
    auto add = [&](SuiteResult r, const std::string& subject) {
      r.name += " " + subject;
      suites.push_back(std::move(r));
    };
    std::vector<std::pair<std::string, Signature>> sigs;
    for (const auto& [n, s] : env.sigs) sigs.emplace_back(n, s.first);
    if (sigs.empty()) sigs.emplace_back("Tree", Signature({"leaf", "node"}, {0, 2}));
    for (const auto& [n, s] : sigs) {
      SizeBackend k = kappa_sigma(s, n);
      if (std::none_of(k.augmented().arities().begin(), k.augmented().arities().end(),
                       [](std::size_t a) { return a == 0; }))
        continue;
      add(order_laws(k, 2000, 4, seed), "plump:" + n);
    }
    for (const auto& name : env.functor_order) {
      const FunctorExpr& f = env.functors.at(name).expr;
      try {
        eval_functor(f, FiniteSet(2));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExceeded) throw;
        SuiteResult skip{"functor-suites"};
        skip.skipped = e.what();
        add(skip, name);
        continue;
      }
      add(functor_laws(f, 2), name);
      add(preservation(f, 2, 3), name);
      IterationState st(f, nat_backend(), 8);
      try {
        for (std::size_t n = 0; n <= 4; ++n) st.compute(SizeIndex::nat(n));
      } catch (const BudgetError&) {
      }
      add(cocone_coherence(st), name);
      SuiteResult ext{"legs-jointly-epic"};
      for (const auto& i : std::vector<SizeIndex>(st.memoized())) {
        SuiteResult r = legs_jointly_epic(st, i);
        ext.cases += r.cases;
        ext.failures += r.failures;
      }
      add(ext, name);
      for (const auto& [an, alg] : env.algebras)
        if (alg.functor == name) add(cata_coherence(st, alg.spec), an);
    }
    bool ok = true;
    j["suites"] = nlohmann::json::array();
    for (const auto& s : suites) {
      ok = ok && s.ok();
      j["suites"].push_back(to_json(s));
      text += "  " + s.name + ": " + std::to_string(s.cases) + " cases, " + std::to_string(s.failures) +
              " failures\n";
      for (const auto& w : s.witnesses) text += "    " + w + "\n";
      if (!s.skipped.empty()) text += "    skipped: " + s.skipped + "\n";
    }
    j["status"] = ok ? "ok" : "failed";
    return ok ? 0 : 3;
  }

  const dsl::Script& script_;
  Flags flags_;
  dsl::Script seen_;
};

}  // namespace detail

/// Runs every command in order. Later commands still run after a failure;
/// the exit code is the largest one produced.
inline RunResult run(const dsl::Script& script, const Flags& flags = {}) {
  return detail::Runner(script, flags).run();
}

inline nlohmann::json error_json(const Error& e) {
  nlohmann::json err = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
  if (auto* s = dynamic_cast<const SourceError*>(&e)) {
    err["line"] = s->line();
    err["column"] = s->column();
  }
  return {{"error", err}, {"exitCode", exit_code_for(e.kind())}};
}

inline std::string error_text(const Error& e) {
  std::string where;
  if (auto* s = dynamic_cast<const SourceError*>(&e))
    where = " at " + std::to_string(s->line()) + ":" + std::to_string(s->column());
  return "error: " + std::string(to_string(e.kind())) + where + ": " + e.what() + "\n";
}

/// Parses and runs source text, turning parse errors into a report.
inline RunResult run_source(const std::string& source, const Flags& flags = {}) {
  dsl::Script script;
  try {
    script = dsl::parse_dsl(source);
  } catch (const Error& e) {
    return {exit_code_for(e.kind()), error_json(e), error_text(e)};
  }
  return run(script, flags);
}

inline std::string render(const RunResult& r, const std::string& format) {
  if (format == "json") return r.json.dump(2) + "\n";
  return r.text;
}

}  // namespace sizedmu
