#include <cstdlib>
#include <filesystem>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "excol/cohomology.hpp"
#include "excol/fan.hpp"
#include "excol/split_bundle.hpp"
#include "excol/sweep.hpp"

using namespace excol;

namespace {

// Lattice points u with <u, v_rho> >= -a_rho for every ray, by exhaustive box search.
std::int64_t polytope_points(const Fan& f, const IntVec& a, int box) {
  const std::size_t n = f.dim();
  IntVec u(n, -box);
  std::int64_t count = 0;
  while (true) {
    bool inside = true;
    for (std::size_t r = 0; r < f.num_rays() && inside; ++r) {
      std::int64_t dot = 0;
      for (std::size_t i = 0; i < n; ++i) dot += u[i] * f.ray(r).vec[i];
      inside = dot >= -a[r];
    }
    count += inside;
    std::size_t i = 0;
    while (i < n && u[i] == box) u[i++] = -box;
    if (i == n) break;
    ++u[i];
  }
  return count;
}

SupportComplex complex_of(std::vector<std::size_t> active, std::vector<std::vector<std::size_t>> facets) {
  return SupportComplex{std::move(active), std::move(facets)};
}

}  // namespace

TEST(ReducedCohomology, Examples) {
  EXPECT_EQ(reduced_cohomology_ranks(complex_of({}, {}), 1), (std::vector<std::int64_t>{1, 0, 0}));
  EXPECT_EQ(reduced_cohomology_ranks(complex_of({0, 1}, {{0}, {1}}), 1), (std::vector<std::int64_t>{0, 1, 0}));
  EXPECT_EQ(reduced_cohomology_ranks(complex_of({0, 1, 2}, {{0, 1}, {1, 2}, {0, 2}}), 1),
            (std::vector<std::int64_t>{0, 0, 1}));
  EXPECT_EQ(reduced_cohomology_ranks(complex_of({0, 1, 2}, {{0, 1, 2}}), 2), (std::vector<std::int64_t>{0, 0, 0, 0}));
}

TEST(ReducedCohomology, SphereBoundary) {
  // Boundary of a tetrahedron is a 2-sphere.
  const auto cx = complex_of({0, 1, 2, 3}, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
  EXPECT_EQ(reduced_cohomology_ranks(cx, 2), (std::vector<std::int64_t>{0, 0, 0, 1}));
}

TEST(SupportComplex, FullFanIsSphere) {
  const Fan f = projective_space_fan(2);
  const auto cx = support_complex(f, 0b111);
  EXPECT_EQ(cx.active_rays.size(), 3u);
  EXPECT_EQ(reduced_cohomology_ranks(cx, 2), (std::vector<std::int64_t>{0, 0, 1, 0}));
}

TEST(Oracle, ProjectiveLine) {
  const Fan p1 = projective_space_fan(1);
  EXPECT_EQ(cohomology_dims(p1, PicClass::projective(-2)), (HVector{0, 1}));
  EXPECT_EQ(cohomology_dims(p1, PicClass::projective(3)), (HVector{4, 0}));
  EXPECT_EQ(euler_pairing(p1, PicClass::projective(0), PicClass::projective(1)), 2);
}

TEST(Oracle, BottOnProjectiveSpaces) {
  for (int n = 1; n <= 4; ++n) {
    const Fan f = projective_space_fan(static_cast<std::size_t>(n));
    for (int d = -7; d <= 5; ++d) EXPECT_EQ(cohomology_dims(f, PicClass::projective(d)), bott_dims(n, d)) << n << " " << d;
  }
}

TEST(Oracle, BlownUpQuadricPoint) {
  const auto st = make_blowup(BundleSpec{1, {0, 0}}, CenterSpec{{"b1", "f1"}});
  EXPECT_EQ(cohomology_dims(st.blowup_fan, PicClass::blowup(1, 1, -1)), (HVector{3, 0, 0}));
  EXPECT_EQ(polytope_points(st.blowup_fan, tdivisor_lift(st.blowup_fan, PicClass::blowup(1, 1, -1)), 6), 3);
  EXPECT_EQ(cohomology_dims(st.blowup_fan, PicClass::blowup(0, 0, 0)), (HVector{1, 0, 0}));
  EXPECT_EQ(euler_pairing(st.x_fan, PicClass::bundle(0, 0), PicClass::bundle(-1, -1)), 0);
}

TEST(Oracle, GlobalSectionsCountLatticePoints) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-2, 3);
  const auto cases = enumerate_cases(3, 2, {2, 3});
  for (std::size_t ci = 0; ci < cases.size(); ci += 3) {
    const auto st = make_blowup(cases[ci].spec, cases[ci].center);
    for (int t = 0; t < 6; ++t) {
      const PicClass c = PicClass::blowup(d(rng), d(rng), d(rng));
      const IntVec a = tdivisor_lift(st.blowup_fan, c);
      EXPECT_EQ(cohomology_dims(st.blowup_fan, c)[0], polytope_points(st.blowup_fan, a, 14)) << c;
    }
  }
}

TEST(Oracle, ClassInvarianceUnderAlternativeLifts) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> d(-3, 3);
  for (const auto& job : enumerate_cases(4, 2, {2, 3})) {
    if (rng() % 8) continue;
    const auto st = make_blowup(job.spec, job.center);
    const Fan& f = st.blowup_fan;
    const PicClass c = PicClass::blowup(d(rng), d(rng), d(rng));
    IntVec lift = tdivisor_lift(f, c);
    IntVec u(f.dim());
    for (auto& x : u) x = d(rng);
    const IntVec p = principal_divisor(f, u);
    for (std::size_t i = 0; i < lift.size(); ++i) lift[i] += p[i];
    EXPECT_EQ(cohomology_of_divisor(f, lift), cohomology_dims(f, c));
  }
}

TEST(Oracle, SerreDualityOnBlowUps) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> d(-4, 4);
  for (const auto& job : enumerate_cases(4, 1, {2, 3})) {
    const auto st = make_blowup(job.spec, job.center);
    const PicClass k = canonical_class(st.blowup_fan);
    const std::size_t n = st.blowup_fan.dim();
    for (int t = 0; t < 5; ++t) {
      const PicClass c = PicClass::blowup(d(rng), d(rng), d(rng));
      const HVector h = cohomology_dims(st.blowup_fan, c), hd = cohomology_dims(st.blowup_fan, k - c);
      for (std::size_t i = 0; i <= n; ++i) EXPECT_EQ(h[i], hd[n - i]);
    }
  }
}

TEST(Oracle, EulerPairingOfStructureSheaf) {
  for (const auto& job : enumerate_cases(4, 2, {2, 3})) {
    const auto st = make_blowup(job.spec, job.center);
    const PicClass o = PicClass::blowup(0, 0, 0);
    EXPECT_EQ(euler_pairing(st.blowup_fan, o, o), 1);
  }
}

TEST(Oracle, MemoizesAndIsThreadSafe) {
  CohomologyOracle oracle;
  const auto st = make_blowup(BundleSpec{2, {0, 0, 1}}, CenterSpec{{"b1", "f0", "f1"}});
  std::vector<HVector> serial;
  for (int a = -3; a <= 3; ++a) serial.push_back(cohomology_dims(st.blowup_fan, PicClass::blowup(a, 1, -1)));
  std::vector<std::thread> pool;
  std::vector<std::vector<HVector>> got(4);
  for (int t = 0; t < 4; ++t)
    pool.emplace_back([&, t] {
      for (int a = -3; a <= 3; ++a) got[t].push_back(oracle.dims(st.blowup_fan, PicClass::blowup(a, 1, -1)));
    });
  for (auto& th : pool) th.join();
  for (const auto& g : got) EXPECT_EQ(g, serial);
  EXPECT_EQ(oracle.hits() + oracle.misses(), 28u);
  EXPECT_GE(oracle.misses(), 7u);
}

TEST(Oracle, RejectsForeignClasses) {
  CohomologyOracle oracle;
  EXPECT_THROW(oracle.dims(projective_space_fan(2), PicClass::bundle(0, 0)), std::invalid_argument);
}

TEST(DiskCache, RoundTripAndKeying) {
  const auto dir = std::filesystem::temp_directory_path() / ("excol-cache-test-" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  const Fan f = build_projective_bundle_fan(BundleSpec{1, {0, 1}});
  const PicClass c = PicClass::bundle(-3, 1);
  {
    CohomologyOracle oracle{DiskCache(dir)};
    EXPECT_EQ(oracle.dims(f, c), cohomology_dims(f, c));
  }
  DiskCache cache(dir);
  const auto key = DiskCache::key_for(f, c);
  ASSERT_TRUE(cache.load(key).has_value());
  EXPECT_EQ(*cache.load(key), cohomology_dims(f, c));
  EXPECT_NE(key, DiskCache::key_for(f, PicClass::bundle(-3, 2)));
  EXPECT_FALSE(cache.load(DiskCache::key_for(f, PicClass::bundle(9, 9))).has_value());
  std::filesystem::remove_all(dir);
}

TEST(DiskCache, DirectoryFromEnvironment) {
  ::setenv("EXCOL_CACHE_DIR", "/tmp/somewhere-else", 1);
  EXPECT_EQ(DiskCache::default_dir(), std::filesystem::path("/tmp/somewhere-else"));
  ::unsetenv("EXCOL_CACHE_DIR");
  EXPECT_EQ(DiskCache::default_dir(), std::filesystem::path(".excol-cache"));
}
