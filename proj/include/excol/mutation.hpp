#pragma once
//
// Ordered collections of sheaves on the blow-up and the rewrite rules used to
// turn Orlov's decomposition into a collection of line bundles:
//
//   transpose   swap an adjacent pair whose graded Hom vanishes;
//   right E     (iota_* pi^* M (x) O(kE), L (x) O((k-1)E)) -> (L (x) O((k-1)E), L (x) O(kE))
//               when RHom of the pair is one-dimensional in degree 1;
//   left E      (L, iota_* pi^* M) -> (L (x) O(-E), L) when RHom is k[0];
//   serre       rotate an end object across the collection, twisting by the
//               (anti)canonical bundle.
//
// Every rule checks its hypothesis against computed Ext groups and throws if
// it does not hold; nothing else is ever applied.
//

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "excol/cohomology.hpp"
#include "excol/error.hpp"
#include "excol/fan.hpp"
#include "excol/split_bundle.hpp"
#include "excol/types.hpp"

namespace excol {

/// f^*(p^*O(alpha) (x) O_p(beta)) (x) O(kE), stored as a blow-up class.
struct LineBundle {
  PicClass cls;
  friend bool operator==(const LineBundle&, const LineBundle&) = default;
};

/// iota_* pi^* M (x) O(kE) with M = q^*O(alpha) (x) O_q(beta) on Y.
struct PushforwardTwist {
  PicClass m;
  std::int64_t k = 0;
  friend bool operator==(const PushforwardTwist&, const PushforwardTwist&) = default;
};

using SheafObject = std::variant<LineBundle, PushforwardTwist>;

inline SheafObject line(std::int64_t alpha, std::int64_t beta, std::int64_t k = 0) {
  return LineBundle{PicClass::blowup(alpha, beta, k)};
}

inline SheafObject push(std::int64_t alpha, std::int64_t beta, std::int64_t k) {
  return PushforwardTwist{PicClass::center(alpha, beta), k};
}

inline bool is_line(const SheafObject& o) { return std::holds_alternative<LineBundle>(o); }

inline std::string describe(const SheafObject& o) {
  std::ostringstream os;
  if (const auto* l = std::get_if<LineBundle>(&o)) {
    const auto k = l->cls.k();
    const char* primes = k == 0 ? "" : k == 1 ? "'" : k == -1 ? "''" : nullptr;
    os << "L" << (primes ? primes : "") << '[' << l->cls.alpha() << ',' << l->cls.beta();
    if (!primes) os << ";" << k << "E";
    os << ']';
  } else {
    const auto& p = std::get<PushforwardTwist>(o);
    os << "P[" << p.m.alpha() << ',' << p.m.beta() << ";" << p.k << "E]";
  }
  return os.str();
}

/// Tensor by a blow-up class. Pushforwards absorb the (alpha, beta) part by
/// restriction and the E part into their twist index.
inline SheafObject tensor_object(const SheafObject& o, const PicClass& t) {
  if (t.basis != PicBasis::blowup) throw std::invalid_argument("tensor_object expects a blow-up class");
  if (const auto* l = std::get_if<LineBundle>(&o)) return LineBundle{l->cls + t};
  const auto& p = std::get<PushforwardTwist>(o);
  return PushforwardTwist{p.m + PicClass::center(t.alpha(), t.beta()), p.k + t.k()};
}

struct LogEntry {
  std::string rule;
  std::size_t index = 0;
  std::vector<SheafObject> before;  // the objects the rule consumed
  std::optional<HVector> evidence;  // graded Hom that justified the rule
};

struct Collection {
  std::vector<SheafObject> objects;
  std::vector<LogEntry> log;
};

class NotOrthogonal : public Error {
 public:
  NotOrthogonal(const std::string& what, HVector ext) : Error(what), ext_(std::move(ext)) {}
  const HVector& ext() const { return ext_; }

 private:
  HVector ext_;
};

class HypothesisFailed : public Error {
 public:
  using Error::Error;
};

/// A script aborted; carries the collection and log as far as they got.
class ScriptFailure : public Error {
 public:
  ScriptFailure(const std::string& what, Collection partial) : Error(what), partial_(std::move(partial)) {}
  const Collection& partial() const { return partial_; }

 private:
  Collection partial_;
};

enum class Rotation { forward, backward };

/// Reverse lexicographic order on index pairs: by beta, then by alpha.
inline std::vector<std::pair<std::int64_t, std::int64_t>> revlex_range(std::int64_t alpha_lo, std::int64_t alpha_hi,
                                                                       std::int64_t beta_lo, std::int64_t beta_hi) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  for (auto b = beta_lo; b <= beta_hi; ++b)
    for (auto a = alpha_lo; a <= alpha_hi; ++a) out.emplace_back(a, b);
  return out;
}

class MutationEngine {
 public:
  MutationEngine(const BlowupSetup& setup, CohomologyOracle& oracle) : setup_(setup), oracle_(oracle) {}

  const BlowupSetup& setup() const { return setup_; }
  const CenterGeometry& geometry() const { return setup_.geometry; }

  PicClass canonical() const { return canonical_class(setup_.blowup_fan); }

  /// dim Ext^i(a, b) on the blow-up, i = 0..dim.
  HVector graded_hom(const SheafObject& a, const SheafObject& b) const {
    const auto& g = setup_.geometry;
    const auto* la = std::get_if<LineBundle>(&a);
    const auto* lb = std::get_if<LineBundle>(&b);
    if (la && lb) return oracle_.dims(setup_.blowup_fan, lb->cls - la->cls);
    if (!la && lb) {
      const auto& p = std::get<PushforwardTwist>(a);
      const auto shift = p.k - lb->cls.k();
      if (shift < 1 || shift > g.codim - 1)
        throw UnsupportedExt("Ext(pushforward, line) needs E-twist difference in 1..c-1, got " +
                             std::to_string(shift));
      return ext_lemA(g, p.m, static_cast<int>(shift), lb->cls);
    }
    if (la && !lb) {
      const auto& p = std::get<PushforwardTwist>(b);
      const auto shift = la->cls.k() - p.k;
      if (shift != 0 && shift != 1)
        throw UnsupportedExt("Ext(line, pushforward) needs E-twist difference 0 or 1, got " + std::to_string(shift));
      return ext_line_to_pushforward(g, static_cast<int>(shift), la->cls, p.m);
    }
    throw UnsupportedExt("Ext between two pushforward objects is not computed");
  }

  /// Orlov's decomposition with the projective-bundle collections filled in.
  Collection initial_collection() const {
    const auto& g = setup_.geometry;
    Collection col;
    if (g.codim == 3) {
      const auto a = g.degree_sum;
      for (auto [al, be] : revlex_range(-g.s_prime - 1 + a, -1 + a, -g.r_prime - 1, -1))
        col.objects.push_back(push(al, be, 2));
    } else if (g.codim != 2) {
      throw InvalidSpec("only codimension 2 and 3 centers are supported");
    }
    for (auto [al, be] : revlex_range(0, g.s_prime, 0, g.r_prime)) col.objects.push_back(push(al, be, 1));
    for (auto [al, be] : revlex_range(0, g.s, 0, g.r)) col.objects.push_back(line(al, be, 0));
    return col;
  }

  Collection serre_rotate(Collection col, Rotation dir) const {
    if (col.objects.empty()) throw std::invalid_argument("cannot rotate an empty collection");
    const PicClass omega = canonical();
    LogEntry entry;
    if (dir == Rotation::forward) {
      SheafObject first = col.objects.front();
      col.objects.erase(col.objects.begin());
      col.objects.push_back(tensor_object(first, -omega));
      entry = {"serre_forward", 0, {first}, std::nullopt};
    } else {
      SheafObject last = col.objects.back();
      col.objects.pop_back();
      col.objects.insert(col.objects.begin(), tensor_object(last, omega));
      entry = {"serre_backward", col.objects.size() - 1, {last}, std::nullopt};
    }
    col.log.push_back(std::move(entry));
    return col;
  }

  /// Swaps positions i and i+1 when RHom(obj_i, obj_{i+1}) = 0; then both
  /// the left and the right mutation of the pair are the swap.
  Collection transpose_if_orthogonal(Collection col, std::size_t i) const {
    check_pair(col, i);
    HVector h = graded_hom(col.objects[i], col.objects[i + 1]);
    if (!h.is_zero()) {
      std::ostringstream os;
      os << "cannot transpose " << describe(col.objects[i]) << " and " << describe(col.objects[i + 1])
         << ": Ext = " << h;
      throw NotOrthogonal(os.str(), h);
    }
    col.log.push_back({"transpose", i, {col.objects[i], col.objects[i + 1]}, h});
    std::swap(col.objects[i], col.objects[i + 1]);
    return col;
  }

  /// R_{L (x) O((k-1)E)}(iota_* pi^* L|_Y (x) O(kE)) = L (x) O(kE).
  Collection right_mutation_E_twist(Collection col, std::size_t i) const {
    check_pair(col, i);
    const auto* p = std::get_if<PushforwardTwist>(&col.objects[i]);
    const auto* l = std::get_if<LineBundle>(&col.objects[i + 1]);
    if (!p || !l) throw HypothesisFailed("right E-mutation needs (pushforward, line bundle)");
    if (p->k < 1 || p->k > geometry().codim - 1 || l->cls.k() != p->k - 1)
      throw HypothesisFailed("right E-mutation: E-twists do not match");
    if (p->m != PicClass::center(l->cls.alpha(), l->cls.beta()))
      throw HypothesisFailed("right E-mutation: " + describe(col.objects[i + 1]) + " does not restrict to " +
                             describe(col.objects[i]));
    HVector h = graded_hom(col.objects[i], col.objects[i + 1]);
    if (!h.is_point_in_degree(1)) {
      std::ostringstream os;
      os << "right E-mutation: expected RHom = k[-1], got " << h;
      throw HypothesisFailed(os.str());
    }
    col.log.push_back({"right_E", i, {col.objects[i], col.objects[i + 1]}, h});
    const PicClass c = l->cls;
    col.objects[i] = LineBundle{c};
    col.objects[i + 1] = LineBundle{c + PicClass::blowup(0, 0, 1)};
    return col;
  }

  /// L_L(iota_* pi^* L|_Y) = L (x) O(-E) up to shift.
  Collection left_mutation_E_twist(Collection col, std::size_t i) const {
    check_pair(col, i);
    const auto* l = std::get_if<LineBundle>(&col.objects[i]);
    const auto* p = std::get_if<PushforwardTwist>(&col.objects[i + 1]);
    if (!l || !p) throw HypothesisFailed("left E-mutation needs (line bundle, pushforward)");
    if (l->cls.k() != 0 || p->k != 0) throw HypothesisFailed("left E-mutation needs untwisted objects");
    if (p->m != PicClass::center(l->cls.alpha(), l->cls.beta()))
      throw HypothesisFailed("left E-mutation: " + describe(col.objects[i]) + " does not restrict to " +
                             describe(col.objects[i + 1]));
    HVector h = graded_hom(col.objects[i], col.objects[i + 1]);
    if (!h.is_point_in_degree(0)) {
      std::ostringstream os;
      os << "left E-mutation: expected RHom = k[0], got " << h;
      throw HypothesisFailed(os.str());
    }
    col.log.push_back({"left_E", i, {col.objects[i], col.objects[i + 1]}, h});
    const PicClass c = l->cls;
    col.objects[i] = LineBundle{c - PicClass::blowup(0, 0, 1)};
    col.objects[i + 1] = LineBundle{c};
    return col;
  }

  /// Moves every O(E)-twisted pushforward at the front of the collection
  /// right to its matching L and replaces the pair by (L, L (x) O(E)).
  void resolve_right(Collection& col, std::size_t count) const {
    for (std::size_t idx = count; idx-- > 0;) {
      const auto& p = std::get<PushforwardTwist>(col.objects.at(idx));
      const SheafObject target = line(p.m.alpha(), p.m.beta(), p.k - 1);
      std::size_t pos = idx;
      while (true) {
        if (pos + 1 >= col.objects.size())
          throw HypothesisFailed("no matching line bundle for " + describe(col.objects[pos]));
        if (col.objects[pos + 1] == target) break;
        col = transpose_if_orthogonal(col, pos);
        ++pos;
      }
      col = right_mutation_E_twist(col, pos);
    }
  }

  /// Codimension two: the full collection of line bundles
  /// L_{0,0}, L'_{0,0}, ..., L_{s',r'}, L'_{s',r'}, L_{s'+1,r'}, ..., L_{s,r}.
  Collection construct_codim2() const {
    if (setup_.geometry.codim != 2) throw InvalidSpec("construct_codim2 needs a codimension-2 center");
    Collection col = initial_collection();
    try {
      resolve_right(col, block_size());
      return col;
    } catch (const Error& e) {
      throw ScriptFailure(e.what(), col);
    }
  }

  /// Codimension three: rotate the O(2E) block to the tail, run the
  /// codimension-two script on the O(E) block, then pull each trailing
  /// pushforward left to its matching L and replace the pair by (L'', L).
  Collection construct_codim3() const {
    if (setup_.geometry.codim != 3) throw InvalidSpec("construct_codim3 needs a codimension-3 center");
    Collection col = initial_collection();
    try {
      const std::size_t block = block_size();
      for (std::size_t i = 0; i < block; ++i) col = serre_rotate(col, Rotation::forward);
      resolve_right(col, block);
      while (true) {
        std::size_t pos = 0;
        while (pos < col.objects.size() && is_line(col.objects[pos])) ++pos;
        if (pos == col.objects.size()) break;
        const auto& p = std::get<PushforwardTwist>(col.objects[pos]);
        const SheafObject target = line(p.m.alpha(), p.m.beta(), 0);
        while (true) {
          if (pos == 0) throw HypothesisFailed("no matching line bundle for " + describe(col.objects[0]));
          if (col.objects[pos - 1] == target) break;
          col = transpose_if_orthogonal(col, pos - 1);
          --pos;
        }
        col = left_mutation_E_twist(col, pos - 1);
      }
      return col;
    } catch (const Error& e) {
      throw ScriptFailure(e.what(), col);
    }
  }

  Collection construct() const {
    return setup_.geometry.codim == 2 ? construct_codim2() : construct_codim3();
  }

  /// Recomputes the evidence of every logged rule; returns the index of the
  /// first entry that does not reproduce, or nullopt.
  std::optional<std::size_t> recheck_log(const Collection& col) const {
    for (std::size_t i = 0; i < col.log.size(); ++i) {
      const auto& e = col.log[i];
      if (!e.evidence) continue;
      if (e.before.size() != 2 || graded_hom(e.before[0], e.before[1]) != *e.evidence) return i;
    }
    return std::nullopt;
  }

 private:
  std::size_t block_size() const {
    const auto& g = setup_.geometry;
    return static_cast<std::size_t>((g.s_prime + 1) * (g.r_prime + 1));
  }

  static void check_pair(const Collection& col, std::size_t i) {
    if (i + 1 >= col.objects.size()) throw std::out_of_range("mutation position out of range");
  }

  const BlowupSetup& setup_;
  CohomologyOracle& oracle_;
};

}  // namespace excol
