#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "miner/error.hpp"
#include "miner/stats.hpp"
#include "miner/synth.hpp"

using namespace miner;
using fixtures::Builder;

namespace {

Eigen::Vector3d v3(double a, double b, double c) { return {a, b, c}; }

UserProfile freq_user(const std::string& id, std::vector<double> f, std::optional<double> inertia = std::nullopt) {
  UserProfile p;
  p.user_id = id;
  p.freq = Eigen::Map<Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  p.total_occurrences = 10;
  p.inertia = inertia;
  return p;
}

}  // namespace

TEST(Pearson, Fixtures) {
  EXPECT_NEAR(pearson(v3(1, 2, 3), v3(2, 4, 6)), 1.0, 1e-12);
  EXPECT_NEAR(pearson(v3(1, 2, 3), v3(3, 2, 1)), -1.0, 1e-12);
  EXPECT_NEAR(pearson(v3(1, 2, 3), v3(1, 3, 2)), 0.5, 1e-12);
}

TEST(Pearson, Errors) {
  EXPECT_THROW(pearson(v3(1, 1, 1), v3(1, 2, 3)), UndefinedResult);
  EXPECT_THROW(pearson(v3(1, 2, 3), v3(4, 4, 4)), UndefinedResult);
  EXPECT_THROW(pearson(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)), ArgumentError);
  EXPECT_THROW(pearson(Eigen::VectorXd(v3(1, 2, 3)), Eigen::VectorXd(Eigen::Vector2d(1, 2))), ArgumentError);
}

TEST(Pearson, SymmetricAndAffine) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd x(15), y(15);
    for (int i = 0; i < 15; ++i) {
      x(i) = n(rng);
      y(i) = n(rng) + 0.5 * x(i);
    }
    const double r = pearson(x, y);
    EXPECT_NEAR(pearson(y, x), r, 1e-12);
    EXPECT_NEAR(pearson(Eigen::VectorXd((3.5 * x.array() + 2).matrix()), y), r, 1e-12);
    EXPECT_NEAR(pearson(Eigen::VectorXd((-0.25 * x.array() - 7).matrix()), y), -r, 1e-12);
  }
}

TEST(PearsonMatrix, IdenticalColumnsAndExclusion) {
  Eigen::MatrixXd data(4, 3);
  data << 1, 1, 5, 2, 2, 5, 3, 3, 5, 0, 0, 5;
  const auto m = pearson_matrix(data, {"a", "b", "c"});
  EXPECT_EQ(m.labels, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(m.excluded, std::vector<std::string>{"c"});
  EXPECT_NEAR(m.values(0, 1), 1.0, 1e-12);
}

TEST(PearsonMatrix, SymmetricUnitDiagonal) {
  SynthConfig c = SynthConfig::standard();
  c.users = 25;
  c.moments_min = 5;
  c.moments_max = 15;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    c.seed = seed;
    const auto g = generate(c);
    const auto m = pearson_matrix(characterize(with_true_categories(g.dataset, g.truth), c.taxonomy), c.taxonomy);
    ASSERT_EQ(m.values.rows(), static_cast<Eigen::Index>(m.labels.size()));
    EXPECT_TRUE((m.values.array() == m.values.transpose().array()).all());
    for (Eigen::Index i = 0; i < m.values.rows(); ++i) EXPECT_EQ(m.values(i, i), 1.0);
    EXPECT_EQ(m.labels.back(), "Selfie");
  }
}

TEST(PearsonMatrix, TooFewUsers) {
  const auto p = characterize(fixtures::u1(), fixtures::meal_flower());
  EXPECT_THROW(pearson_matrix(p, fixtures::meal_flower()), ArgumentError);
}

TEST(PearsonMatrix, PlantedPairCorrelates) {
  SynthConfig c = SynthConfig::standard();
  double total = 0;
  int below = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    c.seed = seed;
    const auto g = generate(c);
    const auto m = pearson_matrix(characterize(with_true_categories(g.dataset, g.truth), c.taxonomy), c.taxonomy);
    const auto at = [&](const std::string& l) {
      return std::find(m.labels.begin(), m.labels.end(), l) - m.labels.begin();
    };
    const double r = m.values(at("Cosmetic"), at("Cosmetics Ad"));
    total += r;
    below += r > 0.5 ? 0 : 1;
  }
  EXPECT_EQ(below, 0);
  EXPECT_GT(total / 20, 0.5);
}

TEST(CompareGroups, Examples) {
  const std::vector<UserProfile> meal{freq_user("a", {1, 0}), freq_user("b", {1, 0})};
  const std::vector<UserProfile> flower{freq_user("c", {0, 1})};
  const auto tax = fixtures::meal_flower();
  const auto d = compare_groups(meal, flower, tax);
  EXPECT_EQ(d.difference, Eigen::Vector2d(1, -1));
  EXPECT_EQ(d.labels, tax.categories);
  EXPECT_TRUE(compare_groups(meal, meal, tax).difference.isZero(0));
  EXPECT_THROW(compare_groups({}, meal, tax), ArgumentError);
}

TEST(CompareGroups, MeansWithinHull) {
  const std::vector<UserProfile> a{freq_user("a", {0.2, 0.8}, 1.0), freq_user("b", {0.6, 0.4}),
                                   freq_user("c", {0.5, 0.5}, 3.0)};
  const auto d = compare_groups(a, a, fixtures::meal_flower());
  EXPECT_NEAR(d.mean_a(0), 1.3 / 3, 1e-12);
  EXPECT_TRUE(d.mean_a(0) >= 0.2 && d.mean_a(0) <= 0.6);
  EXPECT_EQ(d.inertia_a, 2.0);
  EXPECT_FALSE(d.singleness_a.has_value());
}

TEST(CompareGroups, PlantedR1GroupsFavorPlantedCategories) {
  SynthConfig c = SynthConfig::standard();
  c.seed = 4;
  c.users = 120;
  const auto g = generate(c);
  const auto profiles = characterize(with_true_categories(g.dataset, g.truth), c.taxonomy);
  std::vector<UserProfile> hi, lo;
  for (const auto& p : profiles) (g.truth.find_user(p.user_id)->has_flag("selfie_addict") ? hi : lo).push_back(p);
  const auto d = compare_groups(hi, lo, c.taxonomy);
  for (const auto& cat : c.rules.front().categories) {
    EXPECT_GT(d.difference(static_cast<Eigen::Index>(*c.taxonomy.index_of(cat))), 0.0) << cat;
  }
}
