#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "msdet/errors.hpp"
#include "msdet/fusion.hpp"
#include "msdet/rng.hpp"
#include "oracles.hpp"

using namespace msdet;

namespace {

StreamLogits random_logits(Rng& rng) {
  auto pair = [&] { return LogitPair{rng.uniform(-8, 8), rng.uniform(-8, 8)}; };
  return StreamLogits{pair(), pair(), pair(), pair()};
}

double logit_sum_difference(const StreamLogits& sl) {
  double d = sl.mpn.c1 - sl.mpn.c0;
  if (sl.color) d += sl.color->c1 - sl.color->c0;
  if (sl.thermal) d += sl.thermal->c1 - sl.thermal->c0;
  if (sl.merged) d += sl.merged->c1 - sl.merged->c0;
  return d;
}

Detection det(double score, double x = 0) {
  return Detection{"f", Box(x, 0, 10, 10), score, {}};
}

}  // namespace

TEST_CASE("fuse_scores examples") {
  StreamLogits zeros{LogitPair{0, 0}, LogitPair{0, 0}, LogitPair{0, 0}, LogitPair{0, 0}};
  CHECK(fuse_scores(zeros) == 0.5);

  StreamLogits two{LogitPair{0, 2}, LogitPair{0, 0}, LogitPair{0, 0}, LogitPair{0, 0}};
  CHECK(fuse_scores(two) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
  CHECK(fuse_scores(two) == doctest::Approx(0.880797).epsilon(1e-6));
}

TEST_CASE("fuse_scores equals the logistic of the logit-sum difference") {
  Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    const auto sl = random_logits(rng);
    const double expected = 1.0 / (1.0 + std::exp(-logit_sum_difference(sl)));
    CHECK(std::abs(fuse_scores(sl) - expected) <= 1e-12);
  }
}

TEST_CASE("fuse_scores is invariant to per-stream constant shifts") {
  Rng rng(43);
  for (int i = 0; i < 500; ++i) {
    auto sl = random_logits(rng);
    const double base = fuse_scores(sl);
    auto shifted = sl;
    shifted.thermal->c0 += 7.3;
    shifted.thermal->c1 += 7.3;
    CHECK(std::abs(fuse_scores(shifted) - base) <= 1e-12);
  }
}

TEST_CASE("fuse_scores with only the proposal stream is the plain 2-way softmax") {
  StreamLogits sl{LogitPair{0.3, 1.7}, {}, {}, {}};
  const double e0 = std::exp(0.3), e1 = std::exp(1.7);
  CHECK(fuse_scores(sl) == doctest::Approx(e1 / (e0 + e1)).epsilon(1e-12));
}

TEST_CASE("fuse_scores monotonicity and range") {
  Rng rng(47);
  for (int i = 0; i < 300; ++i) {
    auto sl = random_logits(rng);
    const double base = fuse_scores(sl);
    CHECK(base > 0.0);
    CHECK(base < 1.0);
    auto up = sl;
    up.color->c1 += 0.5;
    CHECK(fuse_scores(up) > base);
    auto down = sl;
    down.merged->c0 += 0.5;
    CHECK(fuse_scores(down) < base);
  }
}

TEST_CASE("fuse_scores stream selection") {
  StreamLogits sl{LogitPair{0, 1}, LogitPair{0, 2}, LogitPair{0, 4}, LogitPair{0, 8}};
  const StreamSet mpn_only = StreamSet::from_names("mpn");
  CHECK(fuse_scores(sl, mpn_only) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
  const StreamSet pair = StreamSet::from_names("color,thermal");
  CHECK(fuse_scores(sl, pair) == doctest::Approx(1.0 / (1.0 + std::exp(-6.0))).epsilon(1e-12));
  CHECK_THROWS_AS(StreamSet::from_names("colour"), InputError);
  CHECK_THROWS_AS(StreamSet::from_names(""), InputError);

  // Selected-but-absent streams are skipped; nothing to fuse is an error.
  StreamLogits mpn_bare{LogitPair{0, 1}, {}, {}, {}};
  CHECK(fuse_scores(mpn_bare, StreamSet::from_names("mpn,merged")) ==
        doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));
  CHECK_THROWS_AS(fuse_scores(mpn_bare, StreamSet::from_names("merged")), InputError);
  CHECK_THROWS_AS(
      fuse_scores(StreamLogits{LogitPair{0, std::numeric_limits<double>::infinity()}, {}, {}, {}}),
      InputError);
}

TEST_CASE("filter_proposals keeps strictly greater scores and preserves order") {
  const std::vector<Detection> dets = {det(0.005), det(0.01), det(0.2)};
  const auto kept = filter_proposals(dets, 0.01);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].score == 0.2);

  const auto all = filter_proposals(dets, 0.0);
  CHECK(all.size() == 3);
  CHECK(filter_proposals(std::vector<Detection>{}).empty());

  const auto twice = filter_proposals(filter_proposals(dets, 0.01), 0.01);
  REQUIRE(twice.size() == kept.size());
  CHECK(twice[0].score == kept[0].score);
}

TEST_CASE("top_k selection and tie-breaking") {
  const std::vector<Detection> dets = {det(0.9, 0), det(0.5, 10), det(0.5, 20), det(0.1, 30)};

  const auto all = top_k(dets, 50);
  CHECK(all.size() == 4);

  const auto two = top_k(dets, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].score == 0.9);
  CHECK(two[1].score == 0.5);
  CHECK(two[1].box.x == 10);  // earlier input position wins the tie

  const auto one = top_k(dets, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].score == 0.9);
  CHECK_THROWS_AS(top_k(dets, 0), InputError);
}

TEST_CASE("nms basic behaviour") {
  const std::vector<Detection> same = {det(0.9), det(0.8)};
  const auto kept = nms(same, 0.5);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].score == 0.9);

  const std::vector<Detection> disjoint = {det(0.9, 0), det(0.8, 100)};
  CHECK(nms(disjoint, 0.5).size() == 2);
  CHECK_THROWS_AS(nms(disjoint, 0.0), InputError);
  CHECK_THROWS_AS(nms(disjoint, 1.0), InputError);
}

TEST_CASE("nms matches the brute-force suppression oracle") {
  Rng rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Detection> dets;
    const int n = 1 + static_cast<int>(rng.below(30));
    for (int i = 0; i < n; ++i)
      dets.push_back(Detection{"f",
                               Box(rng.uniform(0, 80), rng.uniform(0, 80), rng.uniform(5, 40),
                                   rng.uniform(5, 40)),
                               rng.uniform(0.05, 0.95),
                               {}});
    const auto expected = oracles::brute_nms(dets, 0.5);
    const auto actual = nms(dets, 0.5);
    REQUIRE(actual.size() == expected.size());
    for (std::size_t i = 0; i < actual.size(); ++i) {
      CHECK(actual[i].box == expected[i].box);
      CHECK(actual[i].score == expected[i].score);
    }
    for (std::size_t i = 0; i < actual.size(); ++i)
      for (std::size_t j = i + 1; j < actual.size(); ++j)
        CHECK(iou(actual[i].box, actual[j].box) <= 0.5);
  }
}
