#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "excol/cohomology.hpp"
#include "excol/error.hpp"
#include "excol/fan.hpp"
#include "excol/lattice.hpp"
#include "excol/mutation.hpp"
#include "excol/types.hpp"

namespace excol {

/// entries[i][j] = dim Ext^*(object_i, object_j).
struct ExtTable {
  std::vector<std::vector<HVector>> entries;

  std::size_t size() const { return entries.size(); }
  const HVector& at(std::size_t i, std::size_t j) const { return entries.at(i).at(j); }
};

struct Violation {
  std::string category;  // exceptional, semiorthogonal, strong, gram
  std::size_t i = 0, j = 0;
  HVector ext;
};

struct Report {
  bool exceptional = false;
  bool semiorthogonal = false;
  bool strong = false;
  bool gram_unimodular = false;
  bool length_ok = false;
  std::vector<std::vector<std::int64_t>> gram;
  BigInt gram_determinant = 0;
  std::size_t length_expected = 0;
  std::size_t length_actual = 0;
  std::vector<Violation> violations;

  bool all_passed() const { return exceptional && semiorthogonal && strong && gram_unimodular && length_ok; }
};

inline std::vector<PicClass> line_classes(const std::vector<SheafObject>& objects) {
  std::vector<PicClass> out;
  out.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const auto* l = std::get_if<LineBundle>(&objects[i]);
    if (!l) throw NonLineBundlePresent("object " + std::to_string(i) + " is " + describe(objects[i]));
    out.push_back(l->cls);
  }
  return out;
}

inline ExtTable ext_table(CohomologyOracle& oracle, const Fan& fan, const std::vector<PicClass>& classes) {
  ExtTable t;
  t.entries.resize(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    t.entries[i].reserve(classes.size());
    for (std::size_t j = 0; j < classes.size(); ++j) t.entries[i].push_back(oracle.dims(fan, classes[j] - classes[i]));
  }
  return t;
}

inline ExtTable ext_table(CohomologyOracle& oracle, const Fan& fan, const std::vector<SheafObject>& objects) {
  return ext_table(oracle, fan, line_classes(objects));
}

inline std::size_t expected_length(const BundleSpec& spec, const CenterSpec& center) {
  const auto g = center_geometry(spec, center);
  return static_cast<std::size_t>((g.s + 1) * (g.r + 1) + (g.codim - 1) * (g.s_prime + 1) * (g.r_prime + 1));
}

inline Report certify(CohomologyOracle& oracle, const Fan& fan, const std::vector<PicClass>& classes,
                      std::size_t expected) {
  const ExtTable t = ext_table(oracle, fan, classes);
  const std::size_t n = classes.size();
  Report rep;
  rep.length_expected = expected;
  rep.length_actual = n;
  rep.length_ok = expected == n;
  bool exc = true, semi = true, strong = true, upper = true;
  rep.gram.assign(n, std::vector<std::int64_t>(n, 0));
  IntMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const HVector& h = t.at(i, j);
      rep.gram[i][j] = h.euler();
      g(i, j) = h.euler();
      if (i == j && !h.is_point_in_degree(0)) {
        exc = false;
        rep.violations.push_back({"exceptional", i, j, h});
      } else if (i > j && !h.is_zero()) {
        semi = false;
        rep.violations.push_back({"semiorthogonal", i, j, h});
      } else if (i < j && !h.concentrated_in_degree(0)) {
        strong = false;
        rep.violations.push_back({"strong", i, j, h});
      }
      const std::int64_t want_diag = 1;
      if ((i == j && rep.gram[i][j] != want_diag) || (i > j && rep.gram[i][j] != 0)) {
        upper = false;
        rep.violations.push_back({"gram", i, j, h});
      }
    }
  rep.gram_determinant = n == 0 ? BigInt(1) : determinant(g);
  rep.exceptional = exc;
  rep.semiorthogonal = semi;
  rep.strong = strong;
  rep.gram_unimodular = upper && abs(rep.gram_determinant) == 1;
  return rep;
}

inline Report certify(CohomologyOracle& oracle, const Fan& fan, const Collection& col, std::size_t expected) {
  return certify(oracle, fan, line_classes(col.objects), expected);
}

}  // namespace excol
