#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "miner/corpus.hpp"
#include "miner/error.hpp"
#include "miner/synth.hpp"

using namespace miner;
using fixtures::Builder;

namespace {

std::filesystem::path write_lines(const std::string& name, const std::vector<std::string>& lines) {
  const auto path = fixtures::temp_dir("corpus") / name;
  std::ofstream out(path);
  for (const auto& l : lines) out << l << '\n';
  return path;
}

const std::string kHeader = R"({"kind":"header","embedding_dim":2})";
const std::string kMoment = R"({"kind":"moment","moment_id":"m1","user_id":"a","image_ids":["i1","i2"]})";
const std::string kImage1 = R"({"kind":"image","image_id":"i1","user_id":"a","moment_id":"m1","embedding":[0,1],"face_count":1})";
const std::string kImage2 = R"({"kind":"image","image_id":"i2","user_id":"a","moment_id":"m1","embedding":[1,0]})";

}  // namespace

TEST(LoadDataset, MinimalFile) {
  const auto d = load_dataset(write_lines("minimal.jsonl", {kHeader, kMoment, kImage1, kImage2}));
  EXPECT_EQ(d.embedding_dim(), 2u);
  EXPECT_EQ(d.users().size(), 1u);
  EXPECT_EQ(d.moments().size(), 1u);
  EXPECT_EQ(d.images().size(), 2u);
  ASSERT_NE(d.find_image("i1"), nullptr);
  EXPECT_EQ(d.find_image("i1")->face_count, 1);
  EXPECT_FALSE(d.find_image("i2")->face_count.has_value());
}

TEST(LoadDataset, DanglingMomentIsNamed) {
  const std::string orphan =
      R"({"kind":"image","image_id":"i3","user_id":"a","moment_id":"ghost","embedding":[1,1],"face_count":0})";
  try {
    load_dataset(write_lines("dangling.jsonl", {kHeader, kMoment, kImage1, kImage2, orphan}));
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_NE(std::string(e.what()).find("ghost"), std::string::npos) << e.what();
  }
}

TEST(LoadDataset, MalformedLineReportsLineNumber) {
  try {
    load_dataset(write_lines("malformed.jsonl", {kHeader, kMoment, "{not json", kImage2}));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(LoadDataset, DimensionMismatchIsSchemaError) {
  const std::string bad =
      R"({"kind":"image","image_id":"i2","user_id":"a","moment_id":"m1","embedding":[1,0,2]})";
  EXPECT_THROW(load_dataset(write_lines("dim.jsonl", {kHeader, kMoment, kImage1, bad})), SchemaError);
}

TEST(LoadDataset, HeaderMustComeFirst) {
  EXPECT_THROW(load_dataset(write_lines("noheader.jsonl", {kMoment, kHeader, kImage1, kImage2})), ParseError);
}

TEST(LoadDataset, MissingFile) {
  EXPECT_THROW(load_dataset("/nonexistent/miner/none.jsonl"), MissingInput);
}

TEST(LoadDataset, SynthRoundTrip) {
  SynthConfig c = SynthConfig::standard();
  c.users = 50;
  c.moments_min = 3;
  c.moments_max = 6;
  c.seed = 11;
  const auto g = generate(c);
  const auto dir = fixtures::temp_dir("corpus_roundtrip");
  save_dataset(g.dataset, dir / "d.jsonl");
  const auto back = load_dataset(dir / "d.jsonl");
  EXPECT_EQ(back, g.dataset);
  EXPECT_EQ(back.users().size(), 50u);

  const auto categorized = with_true_categories(g.dataset, g.truth);
  save_assignments(categorized, dir / "a.jsonl");
  EXPECT_EQ(load_assignments(back, dir / "a.jsonl"), categorized);
}

TEST(Validate, MinimalDatasetIsClean) {
  const auto d = Builder().moment("a", {{"", std::nullopt, 1}, {"", std::nullopt, 0}}).build();
  const auto r = validate(d);
  EXPECT_TRUE(r.errors.empty());
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_TRUE(r.ok());
}

TEST(Validate, OversizedMomentWarns) {
  const std::vector<fixtures::Img> ten(10, fixtures::Img{"", std::nullopt, 0});
  const auto r = validate(Builder().moment("a", ten).build());
  EXPECT_EQ(r.errors.size(), 0u);
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Validate, ShortEmbeddingIsOneError) {
  const auto d = Builder(3).moment("a", {{"", std::nullopt, 1}}).build();
  auto images = d.images();
  images[0].embedding = Eigen::VectorXd::Zero(2);
  const auto r = validate(d.with_images(images));
  EXPECT_EQ(r.errors.size(), 1u);
}

TEST(Validate, MissingFaceCountWarns) {
  const auto r = validate(Builder().moment("a", {{""}}).build());
  EXPECT_TRUE(r.ok());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(Validate, UserMismatchAndOrdering) {
  auto d = Builder().moment("a", {{"", std::nullopt, 1}}).moment("b", {{"", std::nullopt, 1}}).build();
  auto images = d.images();
  images[0].user_id = "z";
  images[1].user_id = "z";
  const auto r = validate(d.with_images(images));
  ASSERT_EQ(r.errors.size(), 2u);
  EXPECT_LT(r.errors[0], r.errors[1]);
  EXPECT_EQ(validate(d.with_images(images)).errors, r.errors);
}

namespace {

// `n` single-category moments for one user.
void add_user(Builder& b, const std::string& user, int occurrences) {
  for (int i = 0; i < occurrences; ++i) b.moment(user, {{"Meal", std::nullopt, 0}});
}

}  // namespace

TEST(FilterUsers, StrictThresholdBoundary) {
  Builder b;
  add_user(b, "a49", 49);
  add_user(b, "b50", 50);
  const auto d = b.build();
  const auto kept = filter_users_by_min_occurrence(d);
  ASSERT_EQ(kept.users().size(), 1u);
  EXPECT_EQ(kept.users()[0], "b50");
  EXPECT_EQ(kept.images().size(), 50u);
  EXPECT_EQ(d.users().size(), 2u);
}

TEST(FilterUsers, OccurrencesCountCategoriesPerMoment) {
  Builder b;
  for (int i = 0; i < 25; ++i) b.moment("mixed", {{"Meal", std::nullopt, 0}, {"Flower", std::nullopt, 0}, {"Meal"}});
  for (int i = 0; i < 30; ++i) b.moment("dup", {{"Meal", std::nullopt, 0}, {"Meal", std::nullopt, 0}});
  const auto totals = occurrence_totals(b.build());
  EXPECT_EQ(totals.at("mixed"), 50);
  EXPECT_EQ(totals.at("dup"), 30);
  const auto kept = filter_users_by_min_occurrence(b.build());
  EXPECT_EQ(kept.users(), std::vector<std::string>{"mixed"});
}

TEST(FilterUsers, IdempotentAndRecountable) {
  SynthConfig c = SynthConfig::standard();
  c.users = 40;
  c.moments_min = 15;
  c.moments_max = 45;
  c.seed = 3;
  const auto g = generate(c);
  const auto d = with_true_categories(g.dataset, g.truth);
  const auto once = filter_users_by_min_occurrence(d, 40);
  EXPECT_EQ(filter_users_by_min_occurrence(once, 40), once);
  EXPECT_LT(once.users().size(), d.users().size());
  EXPECT_GT(once.users().size(), 0u);
  for (const auto& user : once.users()) {
    std::int64_t total = 0;
    for (const auto& m : once.moments()) {
      if (m.user_id != user) continue;
      std::set<std::string> seen;
      for (const auto& id : m.image_ids) seen.insert(*once.find_image(id)->category);
      total += static_cast<std::int64_t>(seen.size());
    }
    EXPECT_GE(total, 40) << user;
  }
  EXPECT_TRUE(validate(once).ok());
}

TEST(FilterUsers, UncategorizedIsPreconditionError) {
  const auto d = Builder().moment("a", {{""}}).build();
  EXPECT_THROW(filter_users_by_min_occurrence(d), PreconditionError);
}
