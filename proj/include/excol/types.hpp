#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace excol {

/// Which variety a Picard class lives on; fixes the meaning of the coordinates.
enum class PicBasis {
  projective,  // P^n: (d)
  bundle,      // X = P(E) over P^s: (alpha, beta) for p*O(alpha) (x) O_p(beta)
  blowup,      // Bl_Y X: (alpha, beta, k) for f*(...) (x) O(kE)
  center,      // Y = P(F) over P^{s'}: (alpha, beta) for q*O(alpha) (x) O_q(beta)
};

inline const char* to_string(PicBasis b) {
  switch (b) {
    case PicBasis::projective: return "projective";
    case PicBasis::bundle: return "bundle";
    case PicBasis::blowup: return "blowup";
    case PicBasis::center: return "center";
  }
  return "?";
}

inline std::size_t pic_rank(PicBasis b) {
  switch (b) {
    case PicBasis::projective: return 1;
    case PicBasis::bundle:
    case PicBasis::center: return 2;
    case PicBasis::blowup: return 3;
  }
  return 0;
}

/// A line bundle class in the coordinates of its owning variety.
struct PicClass {
  PicBasis basis = PicBasis::bundle;
  std::vector<std::int64_t> coords;

  static PicClass projective(std::int64_t d) { return {PicBasis::projective, {d}}; }
  static PicClass bundle(std::int64_t alpha, std::int64_t beta) { return {PicBasis::bundle, {alpha, beta}}; }
  static PicClass blowup(std::int64_t alpha, std::int64_t beta, std::int64_t k) {
    return {PicBasis::blowup, {alpha, beta, k}};
  }
  static PicClass center(std::int64_t alpha, std::int64_t beta) { return {PicBasis::center, {alpha, beta}}; }

  std::int64_t alpha() const { return coords.at(0); }
  std::int64_t beta() const { return coords.at(1); }
  std::int64_t k() const { return coords.at(2); }

  friend bool operator==(const PicClass&, const PicClass&) = default;
  friend auto operator<=>(const PicClass&, const PicClass&) = default;

  friend PicClass operator+(const PicClass& a, const PicClass& b) {
    check_same(a, b);
    PicClass r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
    return r;
  }
  friend PicClass operator-(const PicClass& a, const PicClass& b) {
    check_same(a, b);
    PicClass r = a;
    for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
    return r;
  }
  friend PicClass operator-(const PicClass& a) {
    PicClass r = a;
    for (auto& c : r.coords) c = -c;
    return r;
  }

  friend std::ostream& operator<<(std::ostream& os, const PicClass& c) {
    os << to_string(c.basis) << '(';
    for (std::size_t i = 0; i < c.coords.size(); ++i) os << (i ? "," : "") << c.coords[i];
    return os << ')';
  }

 private:
  static void check_same(const PicClass& a, const PicClass& b) {
    if (a.basis != b.basis || a.coords.size() != b.coords.size())
      throw std::invalid_argument("PicClass: mixing classes of different varieties");
  }
};

/// Graded dimensions h^0..h^n (cohomology) or Ext^0..Ext^n.
struct HVector {
  std::vector<std::int64_t> dims;

  HVector() = default;
  explicit HVector(std::size_t length) : dims(length, 0) {}
  HVector(std::initializer_list<std::int64_t> d) : dims(d) {}

  std::size_t size() const { return dims.size(); }
  std::int64_t operator[](std::size_t i) const { return dims[i]; }
  std::int64_t& operator[](std::size_t i) { return dims[i]; }

  /// dims[i], or 0 outside the stored range.
  std::int64_t at_or_zero(std::int64_t i) const {
    return (i < 0 || i >= static_cast<std::int64_t>(dims.size())) ? 0 : dims[static_cast<std::size_t>(i)];
  }

  bool is_zero() const {
    for (auto d : dims)
      if (d != 0) return false;
    return true;
  }

  std::int64_t total() const { return std::accumulate(dims.begin(), dims.end(), std::int64_t{0}); }

  std::int64_t euler() const {
    std::int64_t e = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) e += (i % 2 == 0) ? dims[i] : -dims[i];
    return e;
  }

  /// True when all mass sits in degree 0 (strong-collection pattern).
  bool concentrated_in_degree(std::size_t deg) const {
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (i != deg && dims[i] != 0) return false;
    return true;
  }

  /// Exactly one dimension in degree deg and nothing else.
  bool is_point_in_degree(std::size_t deg) const {
    return deg < dims.size() && dims[deg] == 1 && concentrated_in_degree(deg);
  }

  HVector& operator+=(const HVector& o) {
    if (o.dims.size() > dims.size()) dims.resize(o.dims.size(), 0);
    for (std::size_t i = 0; i < o.dims.size(); ++i) dims[i] += o.dims[i];
    return *this;
  }

  friend bool operator==(const HVector&, const HVector&) = default;

  friend std::ostream& operator<<(std::ostream& os, const HVector& h) {
    os << '(';
    for (std::size_t i = 0; i < h.dims.size(); ++i) os << (i ? "," : "") << h.dims[i];
    return os << ')';
  }
};

}  // namespace excol
