#pragma once
//
// Fans of P_{P^s}(O(a_0) + ... + O(a_r)), their star subdivisions along
// torus-invariant centers, and the induced fans of the centers themselves.
//
// Every fan carries a fixed Picard basis. basis_divisors[i] is a T-divisor
// representing the i-th basis class, so lifting a class to a T-divisor is a
// linear combination of those rows.
//

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "excol/error.hpp"
#include "excol/lattice.hpp"
#include "excol/types.hpp"

namespace excol {

using IntVec = std::vector<std::int64_t>;

struct Ray {
  std::string name;
  IntVec vec;
};

class Fan {
 public:
  Fan(std::size_t dim, std::vector<Ray> rays, std::vector<std::vector<std::size_t>> cones, PicBasis basis,
      std::vector<IntVec> ray_classes, std::vector<IntVec> basis_divisors)
      : dim_(dim),
        rays_(std::move(rays)),
        cones_(std::move(cones)),
        basis_(basis),
        ray_classes_(std::move(ray_classes)),
        basis_divisors_(std::move(basis_divisors)) {
    for (auto& c : cones_) std::sort(c.begin(), c.end());
    std::sort(cones_.begin(), cones_.end());
    cone_masks_.reserve(cones_.size());
    for (const auto& c : cones_) {
      std::uint64_t m = 0;
      for (auto i : c) m |= std::uint64_t{1} << i;
      cone_masks_.push_back(m);
    }
    validate();
    key_ = canonical_json().dump();
  }

  std::size_t dim() const { return dim_; }
  std::size_t num_rays() const { return rays_.size(); }
  const std::vector<Ray>& rays() const { return rays_; }
  const Ray& ray(std::size_t i) const { return rays_.at(i); }
  const std::vector<std::vector<std::size_t>>& max_cones() const { return cones_; }
  const std::vector<std::uint64_t>& cone_masks() const { return cone_masks_; }
  PicBasis basis() const { return basis_; }
  std::size_t pic_rank() const { return excol::pic_rank(basis_); }

  /// False for center fans, whose ray classes are only defined up to the
  /// kernel of restriction.
  bool has_class_map() const { return !ray_classes_.empty(); }
  const IntVec& ray_class(std::size_t i) const { return ray_classes_.at(i); }
  const IntVec& basis_divisor(std::size_t i) const { return basis_divisors_.at(i); }

  std::size_t ray_index(const std::string& name) const {
    for (std::size_t i = 0; i < rays_.size(); ++i)
      if (rays_[i].name == name) return i;
    throw UnknownRay("unknown ray '" + name + "'");
  }

  bool has_ray(const std::string& name) const {
    return std::any_of(rays_.begin(), rays_.end(), [&](const Ray& r) { return r.name == name; });
  }

  /// True when the rays lie in a common max cone.
  bool spans_cone(std::span<const std::size_t> ray_ids) const {
    std::uint64_t m = 0;
    for (auto i : ray_ids) m |= std::uint64_t{1} << i;
    return std::any_of(cone_masks_.begin(), cone_masks_.end(), [m](std::uint64_t c) { return (c & m) == m; });
  }

  /// Sorted rays, sorted cones by ray name, basis divisors by ray name.
  nlohmann::json canonical_json() const {
    nlohmann::json j;
    j["dim"] = dim_;
    j["basis"] = to_string(basis_);
    nlohmann::json rays = nlohmann::json::object();
    for (const auto& r : rays_) rays[r.name] = r.vec;
    j["rays"] = rays;
    std::vector<std::vector<std::string>> cones;
    for (const auto& c : cones_) {
      std::vector<std::string> names;
      for (auto i : c) names.push_back(rays_[i].name);
      std::sort(names.begin(), names.end());
      cones.push_back(std::move(names));
    }
    std::sort(cones.begin(), cones.end());
    j["cones"] = cones;
    nlohmann::json divs = nlohmann::json::array();
    for (const auto& d : basis_divisors_) {
      nlohmann::json row = nlohmann::json::object();
      for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) row[rays_[i].name] = d[i];
      divs.push_back(row);
    }
    j["basis_divisors"] = divs;
    return j;
  }

  /// Canonical JSON dump; identifies the fan in caches.
  const std::string& key() const { return key_; }

 private:
  void validate() const;

  std::size_t dim_;
  std::vector<Ray> rays_;
  std::vector<std::vector<std::size_t>> cones_;
  std::vector<std::uint64_t> cone_masks_;
  PicBasis basis_;
  std::vector<IntVec> ray_classes_;
  std::vector<IntVec> basis_divisors_;
  std::string key_;
};

namespace detail {

inline IntMatrix columns_matrix(const std::vector<Ray>& rays, std::span<const std::size_t> ids, std::size_t dim) {
  IntMatrix m(dim, ids.size());
  for (std::size_t c = 0; c < ids.size(); ++c)
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = rays[ids[c]].vec[r];
  return m;
}

inline std::int64_t to_i64(const BigInt& b) { return b.convert_to<std::int64_t>(); }

}  // namespace detail

inline void Fan::validate() const {
  if (rays_.size() > 60) throw InvalidFan("too many rays");
  std::set<std::string> names;
  for (const auto& r : rays_) {
    if (r.vec.size() != dim_) throw InvalidFan("ray " + r.name + " has wrong dimension");
    if (!names.insert(r.name).second) throw InvalidFan("duplicate ray name " + r.name);
    std::int64_t g = 0;
    for (auto x : r.vec) g = std::gcd(g, x);
    if (g != 1) throw InvalidFan("ray " + r.name + " is not primitive");
  }
  if (cones_.empty()) throw InvalidFan("fan has no maximal cones");
  for (const auto& c : cones_) {
    if (c.size() != dim_) throw InvalidFan("maximal cone of wrong size");
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) throw InvalidFan("repeated ray in cone");
    for (auto i : c)
      if (i >= rays_.size()) throw InvalidFan("cone references missing ray");
    BigInt det = determinant(detail::columns_matrix(rays_, c, dim_));
    if (abs(det) != 1) throw InvalidFan("maximal cone is not unimodular");
  }

  if (dim_ >= 1) {
    // Completeness: every facet is shared by exactly two maximal cones, and
    // the facet-adjacency graph is connected.
    std::map<std::uint64_t, std::vector<std::size_t>> facets;
    for (std::size_t ci = 0; ci < cones_.size(); ++ci)
      for (auto drop : cones_[ci]) facets[cone_masks_[ci] & ~(std::uint64_t{1} << drop)].push_back(ci);
    std::vector<std::size_t> parent(cones_.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [mask, owners] : facets) {
      if (owners.size() != 2) throw InvalidFan("facet not shared by exactly two cones (fan incomplete)");
      parent[find(owners[0])] = find(owners[1]);
    }
    for (std::size_t ci = 0; ci < cones_.size(); ++ci)
      if (find(ci) != find(0)) throw InvalidFan("fan is disconnected");
  } else if (cones_.size() != 1) {
    throw InvalidFan("zero-dimensional fan must have a single cone");
  }

  const std::size_t k = excol::pic_rank(basis_);
  if (basis_divisors_.size() != k) throw InvalidFan("basis divisor count does not match Picard basis");
  for (const auto& d : basis_divisors_)
    if (d.size() != rays_.size()) throw InvalidFan("basis divisor of wrong length");
  if (ray_classes_.empty()) return;

  if (ray_classes_.size() != rays_.size()) throw InvalidFan("ray class count mismatch");
  for (const auto& c : ray_classes_)
    if (c.size() != k) throw InvalidFan("ray class of wrong length");
  // Principal divisors have trivial class.
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t t = 0; t < k; ++t) {
      std::int64_t sum = 0;
      for (std::size_t r = 0; r < rays_.size(); ++r) sum += rays_[r].vec[i] * ray_classes_[r][t];
      if (sum != 0) throw InvalidFan("class map does not vanish on principal divisors");
    }
  for (std::size_t b = 0; b < k; ++b)
    for (std::size_t t = 0; t < k; ++t) {
      std::int64_t sum = 0;
      for (std::size_t r = 0; r < rays_.size(); ++r) sum += basis_divisors_[b][r] * ray_classes_[r][t];
      if (sum != (b == t ? 1 : 0)) throw InvalidFan("basis divisors do not represent the basis classes");
    }
  std::vector<IntVec> ray_rows(dim_, IntVec(rays_.size()));
  for (std::size_t r = 0; r < rays_.size(); ++r)
    for (std::size_t i = 0; i < dim_; ++i) ray_rows[i][r] = rays_[r].vec[i];
  if (cokernel_basis(IntMatrix::from_rows(ray_rows, rays_.size())).free_rank != k)
    throw InvalidFan("Picard rank does not match the declared basis");
}

// ---------------------------------------------------------------------------
// Specs

/// X = P_{P^s}(O(a_0) + ... + O(a_r)) with 0 = a_0 <= a_1 <= ... <= a_r.
struct BundleSpec {
  int s = 1;
  IntVec fiber_degrees{0, 0};  // a_0..a_r

  int r() const { return static_cast<int>(fiber_degrees.size()) - 1; }
  std::int64_t degree_sum() const { return std::accumulate(fiber_degrees.begin(), fiber_degrees.end(), std::int64_t{0}); }
  int dim() const { return s + r(); }

  void validate() const {
    if (s < 1) throw InvalidSpec("base dimension must be at least 1");
    if (fiber_degrees.size() < 2) throw InvalidSpec("need at least two fiber degrees (r >= 1)");
    if (fiber_degrees.front() != 0)
      throw InvalidSpec("fiber degrees must start at 0; twist E so that a_0 = 0 (subtract a_0 from every degree)");
    for (std::size_t i = 1; i < fiber_degrees.size(); ++i)
      if (fiber_degrees[i] < fiber_degrees[i - 1]) throw InvalidSpec("fiber degrees must be non-decreasing");
  }

  friend bool operator==(const BundleSpec&, const BundleSpec&) = default;
};

struct CenterSpec {
  std::vector<std::string> ray_names;
  friend bool operator==(const CenterSpec&, const CenterSpec&) = default;
};

/// Y = P_{P^{s'}}(F), F the sum of the surviving O(a_j), and its conormal bundle.
struct CenterGeometry {
  int s = 0, r = 0;
  int s_prime = 0, r_prime = 0;
  int codim = 0;
  std::vector<int> base_cuts;        // indices i of cut b_i
  std::vector<int> fiber_cuts;       // indices j of cut f_j
  std::vector<int> fiber_survivors;  // indices j not cut
  IntVec survivor_degrees;           // a_j for surviving j
  std::vector<PicClass> conormal_summands;
  std::int64_t degree_sum = 0;       // a = sum of all a_j on X
};

namespace detail {

struct ParsedRay {
  bool base;
  int index;
};

inline std::optional<ParsedRay> parse_ray_name(const std::string& name, const BundleSpec& spec) {
  if (name.size() < 2 || (name[0] != 'b' && name[0] != 'f')) return std::nullopt;
  int idx = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
    idx = idx * 10 + (name[i] - '0');
    if (idx > 1000) return std::nullopt;
  }
  if (name.size() > 2 && name[1] == '0') return std::nullopt;
  bool base = name[0] == 'b';
  if (idx > (base ? spec.s : spec.r())) return std::nullopt;
  return ParsedRay{base, idx};
}

}  // namespace detail

/// Sorts the center's rays as b's by index, then f's by index.
inline CenterSpec normalize_center(const BundleSpec& spec, const CenterSpec& center) {
  std::vector<std::pair<std::pair<int, int>, std::string>> keyed;
  for (const auto& n : center.ray_names) {
    auto p = detail::parse_ray_name(n, spec);
    if (!p) throw UnknownRay("unknown ray '" + n + "' for this bundle");
    keyed.push_back({{p->base ? 0 : 1, p->index}, n});
  }
  std::sort(keyed.begin(), keyed.end());
  CenterSpec out;
  for (auto& [k, n] : keyed) out.ray_names.push_back(n);
  return out;
}

inline CenterGeometry center_geometry(const BundleSpec& spec, const CenterSpec& center_in) {
  spec.validate();
  CenterSpec center = normalize_center(spec, center_in);
  const auto& names = center.ray_names;
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) throw NotACone("repeated ray in center");
  if (names.size() != 2 && names.size() != 3)
    throw InvalidSpec("center must consist of 2 or 3 rays (codimension 2 or 3)");

  CenterGeometry g;
  g.s = spec.s;
  g.r = spec.r();
  g.codim = static_cast<int>(names.size());
  g.degree_sum = spec.degree_sum();
  for (const auto& n : names) {
    auto p = *detail::parse_ray_name(n, spec);
    (p.base ? g.base_cuts : g.fiber_cuts).push_back(p.index);
  }
  g.s_prime = g.s - static_cast<int>(g.base_cuts.size());
  g.r_prime = g.r - static_cast<int>(g.fiber_cuts.size());
  if (g.s_prime < 0 || g.r_prime < 0)
    throw DegenerateCenter("center cuts more rays of one factor than a cone allows (s'=" +
                           std::to_string(g.s_prime) + ", r'=" + std::to_string(g.r_prime) + ")");
  // Max cones omit exactly one base ray and one fiber ray, so s' >= 0 and
  // r' >= 0 already imply the center spans a cone.
  for (int j = 0; j <= g.r; ++j)
    if (std::find(g.fiber_cuts.begin(), g.fiber_cuts.end(), j) == g.fiber_cuts.end()) {
      g.fiber_survivors.push_back(j);
      g.survivor_degrees.push_back(spec.fiber_degrees[static_cast<std::size_t>(j)]);
    }
  for (std::size_t i = 0; i < g.base_cuts.size(); ++i) g.conormal_summands.push_back(PicClass::center(-1, 0));
  for (int j : g.fiber_cuts)
    g.conormal_summands.push_back(PicClass::center(spec.fiber_degrees[static_cast<std::size_t>(j)], -1));
  return g;
}

// ---------------------------------------------------------------------------
// Fan construction

inline Fan build_projective_bundle_fan(const BundleSpec& spec) {
  spec.validate();
  const int s = spec.s;
  const int r = spec.r();
  const std::size_t n = static_cast<std::size_t>(s + r);
  std::vector<Ray> rays;
  std::vector<IntVec> classes;

  IntVec b0(n, 0);
  for (int i = 0; i < s; ++i) b0[static_cast<std::size_t>(i)] = -1;
  for (int j = 1; j <= r; ++j) b0[static_cast<std::size_t>(s + j - 1)] = spec.fiber_degrees[static_cast<std::size_t>(j)];
  rays.push_back({"b0", b0});
  for (int i = 1; i <= s; ++i) {
    IntVec v(n, 0);
    v[static_cast<std::size_t>(i - 1)] = 1;
    rays.push_back({"b" + std::to_string(i), v});
  }
  IntVec f0(n, 0);
  for (int j = 1; j <= r; ++j) f0[static_cast<std::size_t>(s + j - 1)] = -1;
  rays.push_back({"f0", f0});
  for (int j = 1; j <= r; ++j) {
    IntVec v(n, 0);
    v[static_cast<std::size_t>(s + j - 1)] = 1;
    rays.push_back({"f" + std::to_string(j), v});
  }
  for (int i = 0; i <= s; ++i) classes.push_back({1, 0});
  for (int j = 0; j <= r; ++j) classes.push_back({-spec.fiber_degrees[static_cast<std::size_t>(j)], 1});

  // A max cone omits one base ray and one fiber ray.
  std::vector<std::vector<std::size_t>> cones;
  const std::size_t nb = static_cast<std::size_t>(s + 1);
  for (std::size_t ob = 0; ob < nb; ++ob)
    for (std::size_t of = 0; of <= static_cast<std::size_t>(r); ++of) {
      std::vector<std::size_t> c;
      for (std::size_t i = 0; i < nb; ++i)
        if (i != ob) c.push_back(i);
      for (std::size_t j = 0; j <= static_cast<std::size_t>(r); ++j)
        if (j != of) c.push_back(nb + j);
      cones.push_back(std::move(c));
    }

  IntVec hyper(rays.size(), 0), taut(rays.size(), 0);
  hyper[0] = 1;   // D_{b0}
  taut[nb] = 1;   // D_{f0}, class (-a_0, 1) = (0, 1)
  return Fan(n, std::move(rays), std::move(cones), PicBasis::bundle, std::move(classes), {hyper, taut});
}

/// P^n with rays x0 = -(e_1 + ... + e_n), x_i = e_i; basis class D_{x0}.
inline Fan projective_space_fan(std::size_t n) {
  if (n < 1) throw InvalidSpec("projective space dimension must be positive");
  std::vector<Ray> rays;
  rays.push_back({"x0", IntVec(n, -1)});
  for (std::size_t i = 1; i <= n; ++i) {
    IntVec v(n, 0);
    v[i - 1] = 1;
    rays.push_back({"x" + std::to_string(i), v});
  }
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t omit = 0; omit <= n; ++omit) {
    std::vector<std::size_t> c;
    for (std::size_t i = 0; i <= n; ++i)
      if (i != omit) c.push_back(i);
    cones.push_back(std::move(c));
  }
  std::vector<IntVec> classes(n + 1, IntVec{1});
  IntVec basis(n + 1, 0);
  basis[0] = 1;
  return Fan(n, std::move(rays), std::move(cones), PicBasis::projective, std::move(classes), {basis});
}

namespace detail {

inline std::vector<std::size_t> center_ray_ids(const Fan& fan, const CenterSpec& center) {
  std::vector<std::size_t> ids;
  for (const auto& n : center.ray_names) ids.push_back(fan.ray_index(n));
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw NotACone("repeated ray in center");
  if (ids.size() < 2) throw NotACone("center needs at least two rays");
  if (!fan.spans_cone(ids)) throw NotACone("center rays do not span a cone of the fan");
  return ids;
}

}  // namespace detail

/// Blow-up along the orbit closure of the cone spanned by the center rays.
/// The new ray is named "e"; the Picard basis gains the O(E) coordinate.
inline Fan star_subdivide(const Fan& fan, const CenterSpec& center) {
  if (fan.basis() != PicBasis::bundle) throw InvalidSpec("star_subdivide expects a projective bundle fan");
  const auto sigma = detail::center_ray_ids(fan, center);
  const std::size_t n = fan.dim();
  const std::size_t e = fan.num_rays();

  std::vector<Ray> rays = fan.rays();
  IntVec ev(n, 0);
  for (auto i : sigma)
    for (std::size_t d = 0; d < n; ++d) ev[d] += fan.ray(i).vec[d];
  std::int64_t g = 0;
  for (auto x : ev) g = std::gcd(g, x);
  for (auto& x : ev) x /= g;
  rays.push_back({"e", ev});

  std::uint64_t smask = 0;
  for (auto i : sigma) smask |= std::uint64_t{1} << i;
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t ci = 0; ci < fan.max_cones().size(); ++ci) {
    const auto& c = fan.max_cones()[ci];
    if ((fan.cone_masks()[ci] & smask) != smask) {
      cones.push_back(c);
      continue;
    }
    for (auto drop : sigma) {
      std::vector<std::size_t> nc;
      for (auto i : c)
        if (i != drop) nc.push_back(i);
      nc.push_back(e);
      cones.push_back(std::move(nc));
    }
  }

  // Strict transforms of D_rho, rho in the center, lose one copy of E.
  std::vector<IntVec> classes;
  for (std::size_t i = 0; i < fan.num_rays(); ++i) {
    IntVec c = fan.ray_class(i);
    c.push_back((smask >> i) & 1 ? -1 : 0);
    classes.push_back(std::move(c));
  }
  classes.push_back({0, 0, 1});

  // Pullback of a T-divisor: f*D = sum a_rho D~_rho + (sum_{rho in sigma} a_rho) E.
  std::vector<IntVec> basis;
  for (std::size_t b = 0; b < fan.pic_rank(); ++b) {
    IntVec d = fan.basis_divisor(b);
    std::int64_t on_e = 0;
    for (auto i : sigma) on_e += d[i];
    d.push_back(on_e);
    basis.push_back(std::move(d));
  }
  IntVec exc(e + 1, 0);
  exc[e] = 1;
  basis.push_back(std::move(exc));
  return Fan(n, std::move(rays), std::move(cones), PicBasis::blowup, std::move(classes), std::move(basis));
}

/// Quotient data for the orbit closure Y of a cone sigma: a unimodular basis
/// whose first |sigma| columns are the center rays.
class CenterRestriction {
 public:
  CenterRestriction(const Fan& fan, const CenterSpec& center) : sigma_(detail::center_ray_ids(fan, center)) {
    const std::size_t n = fan.dim();
    std::uint64_t smask = 0;
    for (auto i : sigma_) smask |= std::uint64_t{1} << i;
    std::vector<std::size_t> cols = sigma_;
    for (std::size_t ci = 0; ci < fan.max_cones().size(); ++ci)
      if ((fan.cone_masks()[ci] & smask) == smask) {
        for (auto i : fan.max_cones()[ci])
          if (!((smask >> i) & 1)) cols.push_back(i);
        break;
      }
    IntMatrix b = detail::columns_matrix(fan.rays(), cols, n);
    BigInt det = determinant(b);
    IntMatrix adj = adjugate(b);
    inverse_ = IntMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) inverse_(i, j) = adj(i, j) * det;  // det = +-1
    n_ = n;
    fan_ = &fan;
  }

  const std::vector<std::size_t>& sigma() const { return sigma_; }

  /// Coordinates of v in N / span(sigma).
  IntVec quotient(const IntVec& v) const {
    IntVec out;
    for (std::size_t i = sigma_.size(); i < n_; ++i) {
      BigInt x = 0;
      for (std::size_t j = 0; j < n_; ++j) x += inverse_(i, j) * v[j];
      out.push_back(detail::to_i64(x));
    }
    return out;
  }

  /// Adds a principal divisor so the coefficients on sigma vanish.
  IntVec normalize(const IntVec& coeffs) const {
    // u with <u, v_rho> = -a_rho on sigma and 0 on the completing rays,
    // i.e. u = -(B^T)^{-1} (a_sigma, 0) = -B^{-T} w.
    IntVec u(n_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
      BigInt x = 0;
      for (std::size_t i = 0; i < sigma_.size(); ++i) x -= inverse_(i, j) * coeffs[sigma_[i]];
      u[j] = detail::to_i64(x);
    }
    IntVec out = coeffs;
    for (std::size_t r = 0; r < fan_->num_rays(); ++r) {
      std::int64_t dot = 0;
      for (std::size_t d = 0; d < n_; ++d) dot += u[d] * fan_->ray(r).vec[d];
      out[r] += dot;
    }
    return out;
  }

 private:
  std::vector<std::size_t> sigma_;
  IntMatrix inverse_;
  std::size_t n_ = 0;
  const Fan* fan_ = nullptr;
};

/// Fan of the orbit closure Y (the star of the center cone, in N / span(sigma)).
/// Its basis divisors are the restrictions of the ambient basis divisors, so a
/// class (alpha, beta) on Y is the restriction of (alpha, beta) on X.
inline Fan center_fan(const Fan& xfan, const CenterSpec& center) {
  if (xfan.basis() != PicBasis::bundle) throw InvalidSpec("center_fan expects a projective bundle fan");
  CenterRestriction res(xfan, center);
  std::uint64_t smask = 0;
  for (auto i : res.sigma()) smask |= std::uint64_t{1} << i;

  std::vector<std::size_t> link;  // ambient ray ids adjacent to sigma
  std::vector<std::vector<std::size_t>> star_cones;
  for (std::size_t ci = 0; ci < xfan.max_cones().size(); ++ci) {
    if ((xfan.cone_masks()[ci] & smask) != smask) continue;
    std::vector<std::size_t> rest;
    for (auto i : xfan.max_cones()[ci])
      if (!((smask >> i) & 1)) {
        rest.push_back(i);
        if (std::find(link.begin(), link.end(), i) == link.end()) link.push_back(i);
      }
    star_cones.push_back(std::move(rest));
  }
  std::sort(link.begin(), link.end());
  auto local = [&](std::size_t ambient) {
    return static_cast<std::size_t>(std::find(link.begin(), link.end(), ambient) - link.begin());
  };

  std::vector<Ray> rays;
  for (auto i : link) rays.push_back({xfan.ray(i).name, res.quotient(xfan.ray(i).vec)});
  std::vector<std::vector<std::size_t>> cones;
  for (const auto& sc : star_cones) {
    std::vector<std::size_t> c;
    for (auto i : sc) c.push_back(local(i));
    cones.push_back(std::move(c));
  }
  std::vector<IntVec> basis;
  for (std::size_t b = 0; b < xfan.pic_rank(); ++b) {
    IntVec d = res.normalize(xfan.basis_divisor(b));
    IntVec y;
    for (auto i : link) y.push_back(d[i]);
    basis.push_back(std::move(y));
  }
  return Fan(xfan.dim() - res.sigma().size(), std::move(rays), std::move(cones), PicBasis::center, {},
             std::move(basis));
}

// ---------------------------------------------------------------------------
// Classes and divisors

inline PicClass divisor_class(const Fan& fan, const std::string& ray_name) {
  if (!fan.has_class_map()) throw InvalidSpec("fan has no class map");
  return {fan.basis(), fan.ray_class(fan.ray_index(ray_name))};
}

/// Class of the T-divisor sum a_rho D_rho.
inline PicClass class_of_divisor(const Fan& fan, const IntVec& coeffs) {
  if (!fan.has_class_map()) throw InvalidSpec("fan has no class map");
  PicClass c{fan.basis(), IntVec(fan.pic_rank(), 0)};
  for (std::size_t r = 0; r < fan.num_rays(); ++r)
    for (std::size_t t = 0; t < c.coords.size(); ++t) c.coords[t] += coeffs.at(r) * fan.ray_class(r)[t];
  return c;
}

/// K = -sum D_rho.
inline PicClass canonical_class(const Fan& fan) {
  return class_of_divisor(fan, IntVec(fan.num_rays(), -1));
}

/// A T-divisor in the given class (fixed section of the class map).
inline IntVec tdivisor_lift(const Fan& fan, const PicClass& cls) {
  if (cls.basis != fan.basis() || cls.coords.size() != fan.pic_rank())
    throw std::invalid_argument("tdivisor_lift: class does not belong to this fan");
  IntVec out(fan.num_rays(), 0);
  for (std::size_t b = 0; b < cls.coords.size(); ++b)
    for (std::size_t r = 0; r < out.size(); ++r) out[r] += cls.coords[b] * fan.basis_divisor(b)[r];
  return out;
}

/// div(chi^u) = sum <u, v_rho> D_rho.
inline IntVec principal_divisor(const Fan& fan, const IntVec& u) {
  IntVec out(fan.num_rays(), 0);
  for (std::size_t r = 0; r < out.size(); ++r)
    for (std::size_t d = 0; d < fan.dim(); ++d) out[r] += u.at(d) * fan.ray(r).vec[d];
  return out;
}

/// Ray-by-lattice-dimension matrix (rows are lattice coordinates).
inline IntMatrix ray_matrix(const Fan& fan) {
  IntMatrix m(fan.dim(), fan.num_rays());
  for (std::size_t r = 0; r < fan.num_rays(); ++r)
    for (std::size_t d = 0; d < fan.dim(); ++d) m(d, r) = fan.ray(r).vec[d];
  return m;
}

/// Everything derived from one (X, Y) pair.
struct BlowupSetup {
  BundleSpec spec;
  CenterSpec center;  // normalized
  CenterGeometry geometry;
  Fan x_fan;
  Fan blowup_fan;
  Fan y_fan;
};

inline BlowupSetup make_blowup(const BundleSpec& spec, const CenterSpec& center) {
  CenterGeometry g = center_geometry(spec, center);
  CenterSpec norm = normalize_center(spec, center);
  Fan x = build_projective_bundle_fan(spec);
  Fan xt = star_subdivide(x, norm);
  Fan y = center_fan(x, norm);
  return BlowupSetup{spec, std::move(norm), std::move(g), std::move(x), std::move(xt), std::move(y)};
}

}  // namespace excol
