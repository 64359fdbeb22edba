#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "excol/json_io.hpp"
#include "excol/mutation.hpp"
#include "excol/sweep.hpp"
#include "excol/verifier.hpp"

using namespace excol;

namespace {

std::vector<PicClass> beilinson(std::size_t n) {
  std::vector<PicClass> out;
  for (std::size_t d = 0; d <= n; ++d) out.push_back(PicClass::projective(static_cast<std::int64_t>(d)));
  return out;
}

Collection build(const BundleSpec& spec, std::vector<std::string> center, CohomologyOracle& oracle,
                 std::optional<BlowupSetup>& keep) {
  keep.emplace(make_blowup(spec, CenterSpec{std::move(center)}));
  MutationEngine engine(*keep, oracle);
  return engine.construct();
}

}  // namespace

TEST(ExtTable, BeilinsonOnP2) {
  CohomologyOracle oracle;
  const Fan p2 = projective_space_fan(2);
  const ExtTable t = ext_table(oracle, p2, beilinson(2));
  EXPECT_EQ(t.at(0, 2), (HVector{6, 0, 0}));
  EXPECT_EQ(t.at(2, 0), (HVector{0, 0, 0}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(t.at(i, i), (HVector{1, 0, 0}));
}

TEST(ExtTable, RejectsPushforwards) {
  CohomologyOracle oracle;
  const auto st = make_blowup(BundleSpec{1, {0, 0}}, CenterSpec{{"b1", "f1"}});
  EXPECT_THROW(ext_table(oracle, st.blowup_fan, std::vector<SheafObject>{line(0, 0), push(0, 0, 1)}),
               NonLineBundlePresent);
}

TEST(Certify, BeilinsonCollections) {
  CohomologyOracle oracle;
  for (std::size_t n = 1; n <= 4; ++n) {
    const Report r = certify(oracle, projective_space_fan(n), beilinson(n), n + 1);
    EXPECT_TRUE(r.all_passed()) << n;
    EXPECT_EQ(r.gram_determinant, 1);
    EXPECT_TRUE(r.violations.empty());
  }
}

TEST(Certify, PointOnP1xP1) {
  CohomologyOracle oracle;
  std::optional<BlowupSetup> st;
  const auto col = build({1, {0, 0}}, {"b1", "f1"}, oracle, st);
  const Report r = certify(oracle, st->blowup_fan, col, 5);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(abs(r.gram_determinant), 1);
  EXPECT_EQ(r.length_actual, 5u);
}

TEST(Certify, PointOnP2xP1) {
  CohomologyOracle oracle;
  std::optional<BlowupSetup> st;
  const auto col = build({2, {0, 0}}, {"b1", "b2", "f1"}, oracle, st);
  const Report r = certify(oracle, st->blowup_fan, col, 8);
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.length_actual, 8u);
}

TEST(Certify, SwappedETwistBreaksSemiorthogonality) {
  CohomologyOracle oracle;
  std::optional<BlowupSetup> st;
  auto classes = line_classes(build({1, {0, 0}}, {"b1", "f1"}, oracle, st).objects);
  std::swap(classes[0], classes[1]);
  const Report r = certify(oracle, st->blowup_fan, classes, 5);
  EXPECT_FALSE(r.semiorthogonal);
  EXPECT_FALSE(r.all_passed());
  const auto it = std::find_if(r.violations.begin(), r.violations.end(),
                               [](const Violation& v) { return v.category == "semiorthogonal"; });
  ASSERT_NE(it, r.violations.end());
  EXPECT_EQ(it->i, 1u);
  EXPECT_EQ(it->j, 0u);
  EXPECT_GT(it->ext[0], 0);
}

TEST(Certify, FlagsMatchViolationCategories) {
  CohomologyOracle oracle;
  const Fan p2 = projective_space_fan(2);
  const std::vector<PicClass> bad{PicClass::projective(0), PicClass::projective(3), PicClass::projective(0)};
  const Report r = certify(oracle, p2, bad, 3);
  auto has = [&](const std::string& cat) {
    return std::any_of(r.violations.begin(), r.violations.end(), [&](const Violation& v) { return v.category == cat; });
  };
  EXPECT_EQ(!r.exceptional, has("exceptional"));
  EXPECT_EQ(!r.semiorthogonal, has("semiorthogonal"));
  EXPECT_EQ(!r.strong, has("strong"));
  EXPECT_FALSE(r.semiorthogonal);
  EXPECT_TRUE(r.length_ok);
  const Report shorter = certify(oracle, p2, beilinson(1), 3);
  EXPECT_FALSE(shorter.length_ok);
}

TEST(Certify, StrongnessViolationIsDetected) {
  CohomologyOracle oracle;
  const Fan q = build_projective_bundle_fan(BundleSpec{1, {0, 0}});
  const Report r = certify(oracle, q, {PicClass::bundle(0, 0), PicClass::bundle(-2, 1)}, 2);
  EXPECT_FALSE(r.strong);
  EXPECT_TRUE(r.semiorthogonal);
}

TEST(ExpectedLength, Examples) {
  EXPECT_EQ(expected_length(BundleSpec{1, {0, 0}}, CenterSpec{{"b1", "f1"}}), 5u);
  EXPECT_EQ(expected_length(BundleSpec{2, {0, 0}}, CenterSpec{{"b1", "b2", "f1"}}), 8u);
  EXPECT_EQ(expected_length(BundleSpec{1, {0, 0, 0}}, CenterSpec{{"b1", "f1"}}), 8u);
}

TEST(Certify, PermutationKeepsGramDeterminant) {
  CohomologyOracle oracle;
  std::mt19937_64 rng(9);
  std::optional<BlowupSetup> st;
  auto classes = line_classes(build({2, {0, 0, 1}}, {"b1", "f0", "f1"}, oracle, st).objects);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(classes.begin(), classes.end(), rng);
    const Report r = certify(oracle, st->blowup_fan, classes, classes.size());
    EXPECT_EQ(abs(r.gram_determinant), 1);
  }
}

TEST(Certify, IndependentOfEvaluationOrder) {
  std::optional<BlowupSetup> st;
  CohomologyOracle warm;
  const auto col = build({1, {0, 1, 1}}, {"b1", "f2"}, warm, st);
  CohomologyOracle cold;
  const auto classes = line_classes(col.objects);
  for (auto it = classes.rbegin(); it != classes.rend(); ++it) cold.dims(st->blowup_fan, *it - classes.front());
  const Report a = certify(warm, st->blowup_fan, col, classes.size());
  const Report b = certify(cold, st->blowup_fan, col, classes.size());
  EXPECT_EQ(report_to_json(a, "x").dump(), report_to_json(b, "x").dump());
}

TEST(Json, CollectionRoundTripAndStableBytes) {
  CohomologyOracle oracle;
  std::optional<BlowupSetup> st;
  const auto col = build({2, {0, 0, 1}}, {"b1", "f0", "f1"}, oracle, st);
  CollectionDocument doc{st->spec, st->center, col, "complete", std::nullopt};
  const std::string text = document_to_json(doc).dump();
  const auto back = document_from_json(json::parse(text));
  EXPECT_EQ(back.collection.objects, col.objects);
  EXPECT_EQ(back.collection.log.size(), col.log.size());
  EXPECT_EQ(document_to_json(back).dump(), text);
  MutationEngine engine(*st, oracle);
  EXPECT_FALSE(engine.recheck_log(back.collection).has_value());
  EXPECT_EQ(collection_hash(back.collection), collection_hash(col));
}

TEST(Json, ObjectSchema) {
  EXPECT_EQ(object_to_json(line(1, 2, -1)).dump(), R"({"alpha":1,"beta":2,"k":-1,"kind":"line"})");
  EXPECT_EQ(object_to_json(push(0, 3, 1)).dump(), R"({"alpha":0,"beta":3,"k":1,"kind":"push"})");
  EXPECT_THROW(object_from_json(json::parse(R"({"alpha":0,"beta":0,"k":0,"kind":"cone"})")), InvalidSpec);
}
