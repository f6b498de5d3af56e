#include <chrono>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "fvqa/evalmetrics.hpp"
#include "support/oracles.hpp"

namespace fvqa {
namespace {

QASample gold(std::string id, std::string answer, std::string verb = "cooking",
              std::string element = "FOOD", std::string question = "What is it?") {
  QASample s;
  s.sample_id = std::move(id);
  s.answer = std::move(answer);
  s.verb_id = std::move(verb);
  s.frame_element = std::move(element);
  s.question = std::move(question);
  return s;
}

TEST(Accuracy, Basics) {
  const std::vector<QASample> g = {gold("1", "boy"), gold("2", "meat"), gold("3", "wok"),
                                   gold("4", "shoe shop")};
  const std::vector<Prediction> all = {
      {"4", "Shoe Shop", {}}, {"3", "wok", {}}, {"2", "MEAT", {}}, {"1", "boy", {}}};
  EXPECT_EQ(accuracy(all, g), 100.0);
  const std::vector<Prediction> one = {
      {"1", "boy", {}}, {"2", "x", {}}, {"3", "x", {}}, {"4", "x", {}}};
  EXPECT_EQ(accuracy(one, g), 25.0);
}

TEST(Accuracy, AlignmentErrors) {
  const std::vector<QASample> g = {gold("1", "boy"), gold("2", "meat")};
  const std::vector<Prediction> missing = {{"1", "boy", {}}};
  try {
    accuracy(missing, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingPrediction);
  }
  const std::vector<Prediction> extra = {{"1", "boy", {}}, {"2", "x", {}}, {"9", "x", {}}};
  try {
    accuracy(extra, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kUnknownSample);
  }
}

TEST(Accuracy, EqualsWupsAtOne) {
  const auto t = Taxonomy::from_edges(
      {{"animal", "root"}, {"canine", "animal"}, {"dog", "canine"}, {"wolf", "canine"},
       {"plant", "root"}, {"tree", "plant"}});
  const std::vector<std::string> words = {"dog", "wolf", "tree", "plant", "root", "canine",
                                          "unknown", "other"};
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<QASample> g;
    std::vector<Prediction> p;
    const std::size_t n = 1 + rng() % 60;
    for (std::size_t i = 0; i < n; ++i) {
      g.push_back(gold(std::to_string(i), words[rng() % words.size()]));
      p.push_back({std::to_string(i), words[rng() % words.size()], {}});
    }
    EXPECT_EQ(accuracy(p, g), wups(p, g, t, {1.0, WupsMode::kBinary}));
  }
}

TEST(ChiSquare, PublishedTable) {
  const auto table = Contingency2x2::of(34905, 53065, 39522, 48448);
  EXPECT_NEAR(chi_square_2x2(table), 496.1854, 1e-3);
  EXPECT_NEAR(chi_square_2x2(table, false), 496.4004, 1e-3);
  EXPECT_NEAR(chi_square_2x2(table),
              testing::chi_square_shortcut(34905, 53065, 39522, 48448, true), 1e-9);
}

TEST(ChiSquare, HandComputedTable) {
  // Marginals 20/20 and 25/15, N = 40; expected 12.5/7.5 in both rows, every
  // |O - E| = 2.5, so chi2 = 2 * 6.25/12.5 + 2 * 6.25/7.5 = 8/3.
  const auto table = Contingency2x2::of(10, 10, 15, 5);
  EXPECT_NEAR(chi_square_2x2(table, false), 8.0 / 3.0, 1e-12);
  EXPECT_NEAR(chi_square_2x2(table, true), 2.0 * 4.0 / 12.5 + 2.0 * 4.0 / 7.5, 1e-12);
}

TEST(ChiSquare, IdenticalRowsAreZero) {
  EXPECT_EQ(chi_square_2x2(Contingency2x2::of(7, 3, 7, 3), false), 0.0);
  EXPECT_EQ(chi_square_2x2(Contingency2x2::of(7, 3, 7, 3), true), 0.0);
}

TEST(ChiSquare, Degenerate) {
  try {
    chi_square_2x2(Contingency2x2::of(0, 0, 3, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDegenerateTable);
  }
  EXPECT_THROW(chi_square_2x2(Contingency2x2::of(5, 0, 3, 0)), Error);
}

TEST(ChiSquare, PropertiesOnRandomTables) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint64_t a = 1 + rng() % 500, b = 1 + rng() % 500, c = 1 + rng() % 500,
                        d = 1 + rng() % 500;
    for (bool yates : {false, true}) {
      const double x = chi_square_2x2(Contingency2x2::of(a, b, c, d), yates);
      EXPECT_NEAR(x, chi_square_2x2(Contingency2x2::of(c, d, a, b), yates), 1e-9 * (1 + x));
      EXPECT_NEAR(x, chi_square_2x2(Contingency2x2::of(b, a, d, c), yates), 1e-9 * (1 + x));
      EXPECT_GE(x, 0.0);
    }
    const double plain = chi_square_2x2(Contingency2x2::of(a, b, c, d), false);
    EXPECT_NEAR(plain, testing::chi_square_shortcut(a, b, c, d, false), 1e-9 * (1 + plain));
    EXPECT_LE(chi_square_2x2(Contingency2x2::of(a, b, c, d), true), plain + 1e-12);
  }
}

TEST(Contingency, CountsCorrectness) {
  const std::vector<QASample> g = {gold("1", "a"), gold("2", "b"), gold("3", "c")};
  const std::vector<Prediction> x = {{"1", "a", {}}, {"2", "b", {}}, {"3", "x", {}}};
  const std::vector<Prediction> y = {{"1", "x", {}}, {"2", "x", {}}, {"3", "c", {}}};
  const auto t = contingency(x, y, g);
  EXPECT_EQ(t.counts[0][0], 2u);
  EXPECT_EQ(t.counts[0][1], 1u);
  EXPECT_EQ(t.counts[1][0], 1u);
  EXPECT_EQ(t.counts[1][1], 2u);
}

TEST(Breakdown, GroupsByKey) {
  const std::vector<QASample> g = {
      gold("1", "boy", "cooking", "AGENT", "Who is cooking?"),
      gold("2", "meat", "cooking", "FOOD", "What does the boy cook?"),
      gold("3", "woman", "buying", "AGENT", "Who is buying?"),
      gold("4", "shoe", "buying", "GOODS", "What item does the woman buy?")};
  const std::vector<Prediction> p = {
      {"1", "boy", {}}, {"2", "fish", {}}, {"3", "woman", {}}, {"4", "shoe", {}}};
  EXPECT_EQ(breakdown(p, g, BreakdownKey::kWh), (GroupAccuracy{{"what", 50.0}, {"who", 100.0}}));
  EXPECT_EQ(breakdown(p, g, BreakdownKey::kVerb),
            (GroupAccuracy{{"buying", 100.0}, {"cooking", 50.0}}));
  EXPECT_EQ(breakdown(p, g, BreakdownKey::kElement),
            (GroupAccuracy{{"AGENT", 100.0}, {"FOOD", 0.0}, {"GOODS", 100.0}}));
  EXPECT_EQ(parse_breakdown_key("role"), BreakdownKey::kElement);
  EXPECT_THROW(parse_breakdown_key("image"), Error);
}

std::size_t count_in(const std::vector<HistogramBin>& bins, const std::string& label) {
  for (const auto& b : bins) {
    if (b.label == label) return b.count;
  }
  ADD_FAILURE() << "no bin " << label;
  return 0;
}

TEST(DifferenceHistogram, Binning) {
  const auto edges = default_histogram_edges();
  const GroupAccuracy a = {{"x", 50}, {"y", 50}, {"z", 50}};
  const GroupAccuracy b = {{"x", 38}, {"y", 50}, {"z", 55}};
  const auto bins = difference_histogram(a, b, edges);
  EXPECT_EQ(count_in(bins, "(-20%,-10%]"), 1u);
  EXPECT_EQ(count_in(bins, "0%"), 1u);
  EXPECT_EQ(count_in(bins, "(0%,10%]"), 1u);
  EXPECT_EQ(bins.size(), 21u);

  const auto plus35 = difference_histogram({{"v", 10}}, {{"v", 45}}, edges);
  EXPECT_EQ(count_in(plus35, "(30%,40%]"), 1u);
  const auto edge = difference_histogram({{"v", 10}, {"w", 100}}, {{"v", 40}, {"w", 0}}, edges);
  EXPECT_EQ(count_in(edge, "(20%,30%]"), 1u);
  EXPECT_EQ(count_in(edge, "[-100%,-90%]"), 1u);
  const auto below = difference_histogram({{"v", 10}}, {{"v", 5}}, edges);
  EXPECT_EQ(count_in(below, "(-10%,0%)"), 1u);
}

TEST(DifferenceHistogram, IdenticalMapsAndSumLaw) {
  std::mt19937_64 rng(8);
  GroupAccuracy a, b;
  for (int i = 0; i < 100; ++i) {
    a["v" + std::to_string(i)] = static_cast<double>(rng() % 101);
    b["v" + std::to_string(i)] = static_cast<double>(rng() % 101);
  }
  const auto same = difference_histogram(a, a, default_histogram_edges());
  EXPECT_EQ(count_in(same, "0%"), 100u);
  std::size_t total = 0;
  for (const auto& bin : difference_histogram(a, b, default_histogram_edges())) total += bin.count;
  EXPECT_EQ(total, 100u);
}

TEST(DifferenceHistogram, Errors) {
  const auto edges = default_histogram_edges();
  try {
    difference_histogram({{"a", 1}}, {{"b", 1}}, edges);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kKeyMismatch);
  }
  EXPECT_THROW(difference_histogram({{"a", 1}}, {{"a", 1}, {"b", 2}}, edges), Error);
  EXPECT_THROW(difference_histogram({{"a", 1}}, {{"a", 2}}, {0.0}), Error);
  EXPECT_THROW(difference_histogram({{"a", 1}}, {{"a", 50}}, {-10, 0, 10}), Error);
}

TEST(Predictions, JsonRoundTrip) {
  const std::vector<Prediction> p = {{"a#0", "boy", "AGENT"}, {"a#1", "meat", std::nullopt}};
  std::ostringstream out;
  write_predictions_jsonl(out, p);
  std::istringstream in(out.str());
  std::vector<Prediction> back;
  for_each_jsonl(in, "<predictions>",
                 [&](const Json& j, std::size_t) { back.push_back(prediction_from_json(j)); });
  EXPECT_EQ(back, p);
}

}  // namespace
}  // namespace fvqa
