#pragma once
//
// Closed-form cohomology for projective bundles of split vector bundles over
// projective space, and the Ext formulas between pullback line bundles and
// pushforward objects iota_* pi^* M (x) O(kE) on the blow-up.
//
// Convention: p_* O_p(beta) = Sym^beta E for P(E) -> P^s.
//

#include <cstdint>
#include <map>
#include <vector>

#include "excol/cohomology.hpp"
#include "excol/error.hpp"
#include "excol/fan.hpp"
#include "excol/types.hpp"

namespace excol {

inline BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < k) return 0;
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Bott's formula for line bundles on P^s.
inline HVector bott_dims(int s, std::int64_t d) {
  HVector h(static_cast<std::size_t>(s) + 1);
  if (d >= 0) h[0] = binomial(d + s, s).convert_to<std::int64_t>();
  if (d <= -s - 1) h[static_cast<std::size_t>(s)] += binomial(-d - 1, s).convert_to<std::int64_t>();
  return h;
}

/// All multisets of size m drawn from the given values, as sums.
inline std::vector<std::int64_t> sym_degrees(const IntVec& degrees, std::int64_t m) {
  std::vector<std::int64_t> out;
  if (m < 0) return out;
  std::vector<std::int64_t> pick;
  auto rec = [&](auto&& self, std::size_t start, std::int64_t left, std::int64_t acc) -> void {
    if (left == 0) {
      out.push_back(acc);
      return;
    }
    for (std::size_t i = start; i < degrees.size(); ++i) self(self, i, left - 1, acc + degrees[i]);
  };
  rec(rec, 0, m, 0);
  return out;
}

/// Sym^m of a split bundle with the given line-bundle summands.
inline std::vector<PicClass> sym_summands(const std::vector<PicClass>& summands, std::int64_t m) {
  std::vector<PicClass> out;
  if (m < 0 || summands.empty()) return out;
  auto rec = [&](auto&& self, std::size_t start, std::int64_t left, PicClass acc) -> void {
    if (left == 0) {
      out.push_back(acc);
      return;
    }
    for (std::size_t i = start; i < summands.size(); ++i) self(self, i, left - 1, acc + summands[i]);
  };
  PicClass zero{summands.front().basis, IntVec(summands.front().coords.size(), 0)};
  rec(rec, 0, m, zero);
  return out;
}

/// R^q p_* O_p(beta) as lists of line-bundle degrees on the base, keyed by q.
/// Only q = 0 (beta >= 0) and q = r (beta <= -r-1) can be nonzero.
inline std::map<int, std::vector<std::int64_t>> pushforward_levels(const IntVec& degrees, std::int64_t beta) {
  std::map<int, std::vector<std::int64_t>> levels;
  const auto r = static_cast<std::int64_t>(degrees.size()) - 1;
  if (beta >= 0) {
    levels[0] = sym_degrees(degrees, beta);
  } else if (beta <= -r - 1) {
    std::int64_t total = 0;
    for (auto d : degrees) total += d;
    auto& lvl = levels[static_cast<int>(r)];
    for (auto e : sym_degrees(degrees, -beta - r - 1)) lvl.push_back(-total - e);
  }
  return levels;
}

/// h^i of q*O(alpha) (x) O_q(beta) on P_{P^s}(sum O(d_j)), via the degenerate
/// Leray spectral sequence.
inline HVector cohomology_on_bundle(int s, const IntVec& degrees, std::int64_t alpha, std::int64_t beta) {
  const std::size_t n = static_cast<std::size_t>(s) + degrees.size() - 1;
  HVector h(n + 1);
  for (const auto& [q, degs] : pushforward_levels(degrees, beta))
    for (auto d : degs) {
      HVector b = bott_dims(s, alpha + d);
      for (std::size_t p = 0; p < b.size(); ++p) h[p + static_cast<std::size_t>(q)] += b[p];
    }
  return h;
}

/// Cohomology on X of a class in bundle coordinates.
inline HVector cohomology_on_x(const BundleSpec& spec, const PicClass& cls) {
  return cohomology_on_bundle(spec.s, spec.fiber_degrees, cls.alpha(), cls.beta());
}

/// Cohomology on the center Y; classes on X restrict with the same (alpha, beta).
inline HVector cohomology_on_center(const CenterGeometry& g, std::int64_t alpha, std::int64_t beta) {
  return cohomology_on_bundle(g.s_prime, g.survivor_degrees, alpha, beta);
}

namespace detail {

inline PicClass as_center(const PicClass& c) {
  if (c.coords.size() < 2) throw std::invalid_argument("expected an (alpha, beta) class");
  return PicClass::center(c.alpha(), c.beta());
}

/// Pads a Y-cohomology vector into Ext degrees on the blow-up, shifted by `shift`.
inline void add_shifted(HVector& out, const HVector& h, int shift) {
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto deg = static_cast<std::int64_t>(i) + shift;
    if (deg < 0 || deg >= static_cast<std::int64_t>(out.size())) {
      if (h[i] != 0) throw std::logic_error("Ext degree out of range");
      continue;
    }
    out[static_cast<std::size_t>(deg)] += h[i];
  }
}

}  // namespace detail

/// dim Ext^i(iota_* pi^* M (x) O(kE), f^* L) for 1 <= k <= c-1, computed as
/// sum over t in Sym^{k-1}(conormal) of h^{i-1}_Y(L|_Y + t - M).
inline HVector ext_lemA(const CenterGeometry& g, const PicClass& m, int k, const PicClass& l) {
  if (k < 1 || k > g.codim - 1)
    throw KOutOfRange("E-twist " + std::to_string(k) + " outside 1.." + std::to_string(g.codim - 1));
  const PicClass base = detail::as_center(l) - detail::as_center(m);
  HVector out(static_cast<std::size_t>(g.s + g.r) + 1);
  for (const auto& t : sym_summands(g.conormal_summands, k - 1)) {
    const PicClass c = base + t;
    detail::add_shifted(out, cohomology_on_center(g, c.alpha(), c.beta()), 1);
  }
  return out;
}

/// dim Ext^i(f^* L (x) O(jE), iota_* pi^* M) for j in {0, 1}:
/// j = 0 gives h^i_Y(M - L|_Y), j = 1 twists by the conormal bundle.
inline HVector ext_line_to_pushforward(const CenterGeometry& g, int j, const PicClass& l, const PicClass& m) {
  const PicClass base = detail::as_center(m) - detail::as_center(l);
  HVector out(static_cast<std::size_t>(g.s + g.r) + 1);
  if (j == 0) {
    detail::add_shifted(out, cohomology_on_center(g, base.alpha(), base.beta()), 0);
  } else if (j == 1) {
    for (const auto& t : g.conormal_summands) {
      const PicClass c = base + t;
      detail::add_shifted(out, cohomology_on_center(g, c.alpha(), c.beta()), 0);
    }
  } else {
    throw KOutOfRange("line-to-pushforward twist must be 0 or 1");
  }
  return out;
}

/// Whether f^* L (x) O(kE) has no higher cohomology on the blow-up.
inline bool is_acyclic_twist(CohomologyOracle& oracle, const Fan& blowup_fan, const CenterGeometry& g,
                             const PicClass& l, int k) {
  if (k < 0 || k > g.codim - 1) throw KOutOfRange("E-twist outside 0..c-1");
  HVector h = oracle.dims(blowup_fan, PicClass::blowup(l.alpha(), l.beta(), k));
  return h.concentrated_in_degree(0);
}

inline bool is_acyclic(const HVector& h) { return h.concentrated_in_degree(0); }

}  // namespace excol
