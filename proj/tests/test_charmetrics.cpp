#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "miner/charmetrics.hpp"
#include "miner/error.hpp"
#include "miner/profile_io.hpp"
#include "miner/synth.hpp"

using namespace miner;
using fixtures::Builder;
using fixtures::Img;
using fixtures::selfie;

namespace {

const Taxonomy kTax = fixtures::meal_flower();

UserPosts posts_of(const Dataset& d, const Taxonomy& tax = kTax) {
  const auto all = user_posts(d, tax);
  EXPECT_EQ(all.size(), 1u);
  return all.front();
}

Ratio r(std::int64_t n, std::int64_t d) { return {n, d}; }

::testing::AssertionResult Same(const Ratio& got, const Ratio& want) {
  if (same_value(got, want)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << got.num << "/" << got.den << " != " << want.num << "/" << want.den;
}

}  // namespace

TEST(Occurrences, CollapseMultiplicity) {
  const PostedMoment m{{"Meal", {}, FaceTag::Excluded}, {"Meal", {}, FaceTag::Excluded}, {"Flower", {}, FaceTag::Excluded}};
  EXPECT_EQ(occurrences(m), (std::set<std::string>{"Meal", "Flower"}));
  EXPECT_EQ(occurrences(PostedMoment{{"Selfie", SelfieKind::Indoor, FaceTag::OneFace}}),
            std::set<std::string>{"Selfie"});
}

TEST(Occurrences, CanonicalUser) {
  const auto counts = occurrence_counts(posts_of(fixtures::u1()));
  EXPECT_EQ(counts, (std::map<std::string, std::int64_t>{{"Selfie", 1}, {"Meal", 2}, {"Flower", 1}}));
}

TEST(Frequency, CanonicalUserWithSelfie) {
  const auto f = category_frequency(posts_of(fixtures::u1()), kTax, true);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_TRUE(Same(f[0], r(1, 2)));
  EXPECT_TRUE(Same(f[1], r(1, 4)));
  EXPECT_TRUE(Same(f[2], r(1, 4)));
}

TEST(Frequency, CanonicalUserSelfieRemoved) {
  const auto f = category_frequency(posts_of(fixtures::u1()), kTax, false);
  ASSERT_EQ(f.size(), 2u);
  EXPECT_TRUE(Same(f[0], r(2, 3)));
  EXPECT_TRUE(Same(f[1], r(1, 3)));
}

TEST(Frequency, OnlyMeal) {
  const auto d = Builder().moment("a", {{"Meal"}}).moment("a", {{"Meal"}, {"Meal"}}).build();
  const auto f = category_frequency(posts_of(d), kTax, true);
  EXPECT_TRUE(Same(f[0], r(1, 1)));
  EXPECT_TRUE(Same(f[1], r(0, 1)));
}

TEST(Frequency, NoOccurrencesIsUndefined) {
  const auto d = Builder().moment("a", {selfie(SelfieKind::Indoor)}).build();
  EXPECT_THROW(category_frequency(posts_of(d), kTax, false), UndefinedResult);
}

TEST(Inertia, Examples) {
  EXPECT_TRUE(Same(category_inertia(posts_of(fixtures::u1()), "Meal"), r(3, 2)));
  const auto ones = Builder().moment("a", {{"Meal"}, {"Flower"}}).moment("a", {{"Meal"}}).build();
  EXPECT_TRUE(Same(category_inertia(posts_of(ones), "Meal"), r(1, 1)));
  const std::vector<Img> nine(9, selfie(SelfieKind::Outdoor));
  EXPECT_TRUE(Same(category_inertia(posts_of(Builder().moment("a", nine).build()), "Selfie"), r(9, 1)));
  EXPECT_THROW(category_inertia(posts_of(ones), "Selfie"), UndefinedResult);
}

TEST(Singleness, Examples) {
  EXPECT_TRUE(Same(category_singleness(posts_of(fixtures::u1()), "Meal"), r(1, 2)));
  const auto alone = Builder().moment("a", {{"Meal"}}).moment("a", {{"Meal"}, {"Meal"}}).build();
  EXPECT_TRUE(Same(category_singleness(posts_of(alone), "Meal"), r(1, 1)));
  const auto never = Builder().moment("a", {{"Meal"}, {"Flower"}}).build();
  EXPECT_TRUE(Same(category_singleness(posts_of(never), "Meal"), r(0, 1)));
  EXPECT_THROW(category_singleness(posts_of(never), "Selfie"), UndefinedResult);
}

TEST(FFeature, CanonicalAndSparse) {
  const auto f = f_feature(posts_of(fixtures::u1()), kTax);
  EXPECT_FALSE(f.sparse);
  EXPECT_TRUE(Same(f.freq[0], r(2, 3)));
  EXPECT_TRUE(Same(f.freq[1], r(1, 3)));

  const auto all_selfie = f_feature(posts_of(Builder().moment("a", {selfie(SelfieKind::Indoor)}).build()), kTax);
  EXPECT_TRUE(all_selfie.sparse);
  for (const auto& x : all_selfie.freq) EXPECT_EQ(x.value(), 0.0);
}

TEST(FFeature, UniformOverFullTaxonomy) {
  const auto tax = Taxonomy::wechat();
  Builder b;
  for (const auto& c : tax.categories) b.moment("a", {{c}});
  const auto f = f_feature(posts_of(b.build(), tax), tax);
  ASSERT_EQ(f.freq.size(), 46u);
  for (const auto& x : f.freq) EXPECT_TRUE(Same(x, r(1, 46)));
}

TEST(IFeature, Examples) {
  EXPECT_TRUE(Same(i_feature(posts_of(fixtures::u1()), kTax), r(4, 3)));
  const auto singles = Builder().moment("a", {{"Meal"}, {"Flower"}}).moment("a", {{"Flower"}}).build();
  EXPECT_TRUE(Same(i_feature(posts_of(singles), kTax), r(1, 1)));
  const std::vector<Img> five(5, Img{"Meal"});
  EXPECT_TRUE(Same(i_feature(posts_of(Builder().moment("a", five).build()), kTax), r(5, 1)));
  EXPECT_THROW(i_feature(posts_of(Builder().moment("a", {selfie(SelfieKind::Indoor)}).build()), kTax),
               UndefinedResult);
}

TEST(SFeature, Examples) {
  EXPECT_TRUE(Same(s_feature(posts_of(fixtures::u1()), kTax), r(1, 1)));
  const auto mixed = Builder().moment("a", {{"Meal"}, {"Flower"}}).moment("a", {{"Flower"}, {"Meal"}}).build();
  EXPECT_TRUE(Same(s_feature(posts_of(mixed), kTax), r(0, 1)));
  const auto one = Builder().moment("a", {{"Meal"}}).moment("a", {selfie(SelfieKind::Indoor), {"Flower"}}).build();
  EXPECT_TRUE(Same(s_feature(posts_of(one), kTax), r(1, 1)));
  EXPECT_THROW(s_feature(posts_of(Builder().moment("a", {selfie(SelfieKind::Indoor)}).build()), kTax),
               UndefinedResult);
}

TEST(SelfieMeasures, CanonicalUser) {
  const auto m = selfie_measures(posts_of(fixtures::u1()), kTax);
  EXPECT_TRUE(Same(m[SelfieMeasure::Frequency], r(1, 4)));
  EXPECT_TRUE(Same(m[SelfieMeasure::Inertia], r(1, 1)));
  EXPECT_TRUE(Same(m[SelfieMeasure::Singleness], r(0, 1)));
  EXPECT_TRUE(Same(m[SelfieMeasure::GroupTendency], r(0, 1)));
  EXPECT_TRUE(Same(m[SelfieMeasure::OutdoorTendency], r(0, 1)));
}

TEST(SelfieMeasures, OutdoorTendency) {
  Builder b;
  for (int i = 0; i < 3; ++i) b.moment("a", {selfie(SelfieKind::Outdoor), selfie(SelfieKind::Outdoor)});
  b.moment("a", {selfie(SelfieKind::Indoor)});
  const auto m = selfie_measures(posts_of(b.build()), kTax);
  EXPECT_TRUE(Same(m[SelfieMeasure::OutdoorTendency], r(3, 4)));
  EXPECT_TRUE(Same(m[SelfieMeasure::HoldingTendency], r(0, 1)));
  EXPECT_EQ(m.counts.subcategory[static_cast<std::size_t>(SelfieKind::Outdoor)], 3);
}

TEST(SelfieMeasures, OnlyMultiFace) {
  const auto d = Builder()
                     .moment("a", {selfie(SelfieKind::Indoor, 2)})
                     .moment("a", {selfie(SelfieKind::Outdoor, 5), selfie(SelfieKind::Outdoor, 0)})
                     .build();
  EXPECT_TRUE(Same(selfie_measures(posts_of(d), kTax)[SelfieMeasure::GroupTendency], r(1, 1)));
}

TEST(SelfieMeasures, UndefinedIsExplicit) {
  const auto d = Builder().moment("a", {{"Meal"}}).build();
  const auto m = selfie_measures(posts_of(d), kTax);
  EXPECT_TRUE(Same(m[SelfieMeasure::Frequency], r(0, 1)));
  for (const auto k : {SelfieMeasure::Inertia, SelfieMeasure::Singleness, SelfieMeasure::GroupTendency,
                       SelfieMeasure::OutdoorTendency, SelfieMeasure::HoldingTendency,
                       SelfieMeasure::FaceMaskTendency}) {
    EXPECT_FALSE(m[k].defined()) << to_string(k);
    EXPECT_THROW(m[k].value(), UndefinedResult);
  }
  const auto p = to_profile(exact_profile(posts_of(d), kTax));
  EXPECT_EQ(p.measure(SelfieMeasure::Frequency), 0.0);
  EXPECT_FALSE(p.measure(SelfieMeasure::Inertia).has_value());
}

TEST(SelfieMeasures, NamesRoundTrip) {
  for (std::size_t i = 0; i < kSelfieMeasures; ++i) {
    const auto m = static_cast<SelfieMeasure>(i);
    EXPECT_EQ(selfie_measure_from_string(to_string(m)), m);
  }
  EXPECT_FALSE(selfie_measure_from_string("nope").has_value());
}

TEST(Metrics, PermutationInvariance) {
  SynthConfig c = SynthConfig::standard();
  c.users = 6;
  c.moments_min = 5;
  c.moments_max = 12;
  c.seed = 21;
  const auto g = generate(c);
  const auto d = with_true_categories(g.dataset, g.truth);
  auto moments = d.moments();
  std::mt19937_64 rng(5);
  std::shuffle(moments.begin(), moments.end(), rng);
  for (auto& m : moments) std::shuffle(m.image_ids.begin(), m.image_ids.end(), rng);
  const Dataset shuffled(d.embedding_dim(), moments, d.images());
  EXPECT_EQ(characterize(shuffled, c.taxonomy), characterize(d, c.taxonomy));
}

TEST(Metrics, DuplicateImageKeepsOccurrencesRaisesInertia) {
  const auto before = posts_of(fixtures::u1());
  const auto after = posts_of(Builder()
                                  .moment("u1", {selfie(SelfieKind::Indoor), {"Meal"}, {"Meal"}})
                                  .moment("u1", {{"Meal"}, {"Meal"}})
                                  .moment("u1", {{"Flower"}})
                                  .build());
  EXPECT_EQ(occurrence_counts(before), occurrence_counts(after));
  EXPECT_GT(category_inertia(after, "Meal").value(), category_inertia(before, "Meal").value());
}

TEST(Metrics, RangesOnGeneratedData) {
  SynthConfig c = SynthConfig::standard();
  c.users = 30;
  c.moments_min = 5;
  c.moments_max = 30;
  c.seed = 2;
  const auto g = generate(c);
  for (const auto& p : characterize(with_true_categories(g.dataset, g.truth), c.taxonomy)) {
    if (!p.sparse) {
      EXPECT_NEAR(p.freq.sum(), 1.0, 1e-12);
      EXPECT_GE(p.freq.minCoeff(), 0.0);
    }
    if (p.inertia) EXPECT_GE(*p.inertia, 1.0);
    if (p.singleness) EXPECT_TRUE(*p.singleness >= 0 && *p.singleness <= 1);
    for (std::size_t m = 0; m < kSelfieMeasures; ++m) {
      if (!p.selfie[m]) continue;
      if (m == static_cast<std::size_t>(SelfieMeasure::Inertia)) {
        EXPECT_GE(*p.selfie[m], 1.0);
      } else {
        EXPECT_TRUE(*p.selfie[m] >= 0 && *p.selfie[m] <= 1);
      }
    }
    EXPECT_NEAR(p.full_frequency().sum(), 1.0, 1e-12);
  }
}

TEST(UserPosts, Preconditions) {
  EXPECT_THROW(user_posts(Builder().moment("a", {{""}}).build(), kTax), PreconditionError);
  EXPECT_THROW(user_posts(Builder().moment("a", {{"Teapot"}}).build(), kTax), PreconditionError);
  EXPECT_THROW(user_posts(Builder().moment("a", {{"Selfie", "Sideways Selfie", 1}}).build(), kTax),
               PreconditionError);
}

TEST(Characterize, SortedByUser) {
  const auto d = Builder().moment("zed", {{"Meal"}}).moment("amy", {{"Flower"}}).build();
  const auto p = characterize(d, kTax);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_EQ(p[0].user_id, "amy");
  EXPECT_EQ(p[1].user_id, "zed");
  EXPECT_EQ(p[0].freq(1), 1.0);
}

TEST(ProfileCsv, RoundTripWithUndefinedFields) {
  SynthConfig c = SynthConfig::standard();
  c.users = 12;
  c.moments_min = 2;
  c.moments_max = 10;
  c.seed = 8;
  const auto g = generate(c);
  auto profiles = characterize(with_true_categories(g.dataset, g.truth), c.taxonomy);
  profiles.push_back(characterize(Builder().moment("zz", {selfie(SelfieKind::Indoor, 0)}).build(), c.taxonomy)[0]);
  const auto path = fixtures::temp_dir("profiles") / "profiles.csv";
  save_profiles(profiles, c.taxonomy, path);
  EXPECT_EQ(load_profiles(path, c.taxonomy), profiles);
  EXPECT_THROW(load_profiles(path, Taxonomy::wechat()), SchemaError);
  EXPECT_THROW(load_profiles("/nonexistent/profiles.csv", c.taxonomy), MissingInput);
}
