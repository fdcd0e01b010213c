#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wirepoly/matching.hpp"

using namespace wirepoly;

namespace {

Segment2 seg(double ax, double ay, double bx, double by) { return {{ax, ay}, {bx, by}}; }

std::vector<Point2> random_points(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::vector<Point2> pts(n);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  return pts;
}

}  // namespace

TEST_CASE("line_distance basics") {
  Segment2 a = seg(0.0, 0.0, 1.0, 0.0);
  CHECK(line_distance(a, a) == 0.0);
  CHECK(line_distance(a, seg(1.0, 0.0, 0.0, 0.0)) == 0.0);  // orientation invariant
  CHECK(line_distance(a, seg(0.0, 0.1, 1.0, 0.1)) == doctest::Approx(0.02).epsilon(1e-12));
  // flipped pairing is the cheaper one here
  Segment2 b = seg(0.0, 0.0, 0.0, 1.0);
  Segment2 c = seg(0.0, 1.0, 0.0, 0.0);
  CHECK(line_distance(b, c) == 0.0);
}

TEST_CASE("match_lines on identical sets is a zero-cost identity up to permutation") {
  std::vector<Segment2> gt{seg(0.0, 0.0, 0.5, 0.0), seg(0.5, 0.0, 0.5, 0.5), seg(0.5, 0.5, 0.0, 0.0)};
  auto result = match_lines(gt, gt, 0.01);
  REQUIRE(result.pairs.size() == 3);
  CHECK(result.total_cost == 0.0);
  CHECK(result.unmatched_gt.empty());
  CHECK(result.unmatched_pred.empty());
  for (auto [q, j] : result.pairs) CHECK(line_distance(gt[j], gt[q]) == 0.0);
}

TEST_CASE("match_lines picks the closer prediction and reports leftovers") {
  std::vector<Segment2> gt{seg(0.2, 0.2, 0.8, 0.2)};
  std::vector<Segment2> pred{seg(0.2, 0.6, 0.8, 0.6),    // far
                             seg(0.2, 0.21, 0.8, 0.21)};  // near
  auto result = match_lines(pred, gt, 0.01);
  REQUIRE(result.pairs.size() == 1);
  CHECK(result.pairs[0] == std::pair<int, int>{0, 1});
  CHECK(result.unmatched_pred == std::vector<int>{0});
  CHECK(result.unmatched_gt.empty());
}

TEST_CASE("match_lines alpha excludes distant pairs after the assignment") {
  std::vector<Segment2> gt{seg(0.2, 0.2, 0.8, 0.2)};
  std::vector<Segment2> pred{seg(0.2, 0.6, 0.8, 0.6)};  // distance 2 * 0.4^2 = 0.32
  auto strict = match_lines(pred, gt, 0.01);
  CHECK(strict.pairs.empty());
  CHECK(strict.unmatched_gt == std::vector<int>{0});
  CHECK(strict.unmatched_pred == std::vector<int>{0});
  CHECK(strict.total_cost == doctest::Approx(0.32).epsilon(1e-12));  // cost is pre-exclusion

  auto loose = match_lines(pred, gt, 0.5);
  CHECK(loose.pairs.size() == 1);
}

TEST_CASE("tightening alpha only removes pairs") {
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Segment2> gt, pred;
    for (int i = 0; i < 6; ++i) gt.push_back(seg(coord(rng), coord(rng), coord(rng), coord(rng)));
    for (int i = 0; i < 8; ++i) pred.push_back(seg(coord(rng), coord(rng), coord(rng), coord(rng)));
    std::set<std::pair<int, int>> prev;
    bool first = true;
    for (double alpha : {2.0, 0.5, 0.1, 0.02, 0.001}) {
      auto result = match_lines(pred, gt, alpha);
      std::set<std::pair<int, int>> cur(result.pairs.begin(), result.pairs.end());
      if (!first) {
        for (const auto& pr : cur) CHECK(prev.count(pr) == 1);  // subset of the looser match
      }
      prev = std::move(cur);
      first = false;
    }
  }
}

TEST_CASE("assignment cost matches the brute-force oracle") {
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<int> size(0, 7);
  for (int trial = 0; trial < 500; ++trial) {
    int num_gt = size(rng), num_pred = size(rng);
    auto gt = random_points(rng, num_gt);
    auto pred = random_points(rng, num_pred);
    auto result = match_centroids(pred, gt, std::nullopt);
    double expected = oracles::min_assignment_cost(
        num_pred, num_gt, [&](int j, int m) { return distance(pred[j], gt[m]); });
    CHECK(result.total_cost == doctest::Approx(expected).epsilon(1e-9));
    CHECK(result.pairs.size() == static_cast<std::size_t>(std::min(num_gt, num_pred)));
  }
}

TEST_CASE("match_lines total cost matches the oracle too") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> coord(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 6);
  for (int trial = 0; trial < 200; ++trial) {
    int num_gt = size(rng), num_pred = size(rng);
    std::vector<Segment2> gt, pred;
    for (int i = 0; i < num_gt; ++i) gt.push_back(seg(coord(rng), coord(rng), coord(rng), coord(rng)));
    for (int i = 0; i < num_pred; ++i) pred.push_back(seg(coord(rng), coord(rng), coord(rng), coord(rng)));
    auto result = match_lines(pred, gt, 100.0);
    double expected = oracles::min_assignment_cost(
        num_pred, num_gt, [&](int j, int q) { return line_distance(pred[j], gt[q]); });
    CHECK(result.total_cost == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("match_centroids with and without a bound") {
  std::vector<Point2> gt{{0.1, 0.1}, {0.9, 0.9}};
  std::vector<Point2> pred{{0.12, 0.1}, {0.5, 0.5}};
  auto bounded = match_centroids(pred, gt, 0.1);
  REQUIRE(bounded.pairs.size() == 1);
  CHECK(bounded.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(bounded.unmatched_gt == std::vector<int>{1});
  CHECK(bounded.unmatched_pred == std::vector<int>{1});

  auto unbounded = match_centroids(pred, gt, std::nullopt);
  CHECK(unbounded.pairs.size() == 2);

  CHECK_THROWS_AS(match_centroids(pred, gt, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(match_lines({}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("matching is invariant to a common translation") {
  std::mt19937_64 rng(71);
  auto gt = random_points(rng, 5);
  auto pred = random_points(rng, 5);
  // shrink into [0.25, 0.75] so a +0.2 shift stays meaningful
  for (auto& p : gt) p = {0.25 + p.x * 0.5, 0.25 + p.y * 0.5};
  for (auto& p : pred) p = {0.25 + p.x * 0.5, 0.25 + p.y * 0.5};
  auto base = match_centroids(pred, gt, 0.4);
  auto shifted_gt = gt;
  auto shifted_pred = pred;
  for (auto& p : shifted_gt) p = {p.x + 0.2, p.y - 0.1};
  for (auto& p : shifted_pred) p = {p.x + 0.2, p.y - 0.1};
  auto moved = match_centroids(shifted_pred, shifted_gt, 0.4);
  CHECK(base.pairs == moved.pairs);
  CHECK(base.total_cost == doctest::Approx(moved.total_cost).epsilon(1e-12));
}

namespace {

// Independent re-statement of the proposal BCE used to cross-check the
// library implementation.
double proposal_loss_reference(const ScoreMatrix& scores,
                               const std::vector<PlaneAnnotation>& planes,
                               const std::vector<int>& gt_line_ids,
                               const MatchResult& line_match,
                               const MatchResult& anchor_match) {
  double total = 0.0;
  for (std::size_t m = 0; m < planes.size(); ++m) {
    int anchor = -1;
    for (auto [mm, k] : anchor_match.pairs) {
      if (mm == static_cast<int>(m)) anchor = k;
    }
    if (anchor < 0) continue;
    std::set<int> member;
    for (int line_id : planes[m].line_ids) {
      for (std::size_t q = 0; q < gt_line_ids.size(); ++q) {
        if (gt_line_ids[q] != line_id) continue;
        for (auto [qq, j] : line_match.pairs) {
          if (qq == static_cast<int>(q)) member.insert(j);
        }
      }
    }
    double sum = 0.0;
    for (int j = 0; j < scores.num_lines(); ++j) {
      double s = scores(j, anchor);
      sum += member.count(j) ? -std::log(s) : -std::log(1.0 - s);
    }
    total += sum / static_cast<double>(planes[m].line_ids.size());
  }
  return total / static_cast<double>(planes.size());
}

PlaneAnnotation toy_plane(std::vector<int> line_ids) {
  PlaneAnnotation plane;
  plane.polygon = fixtures::make_polygon({{0.1, 0.1}, {0.9, 0.1}, {0.5, 0.8}});
  plane.centroid = polygon_centroid(plane.polygon);
  plane.line_ids = std::move(line_ids);
  return plane;
}

MatchResult identity_match(int n) {
  MatchResult r;
  for (int i = 0; i < n; ++i) r.pairs.emplace_back(i, i);
  return r;
}

}  // namespace

TEST_CASE("proposal_loss closed forms") {
  // one plane owning all three lines, one anchor
  std::vector<PlaneAnnotation> planes{toy_plane({0, 1, 2})};
  std::vector<int> gt_line_ids{0, 1, 2};
  MatchResult lines = identity_match(3);
  MatchResult anchors = identity_match(1);

  SUBCASE("uniform 0.5 scores give log 2") {
    ScoreMatrix scores(3, 1);
    for (int j = 0; j < 3; ++j) scores(j, 0) = 0.5;
    auto result = proposal_loss(scores, planes, gt_line_ids, lines, anchors);
    CHECK(result.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(result.skipped_planes == 0);
  }
  SUBCASE("near-perfect scores give a near-zero loss") {
    ScoreMatrix scores(3, 1);
    for (int j = 0; j < 3; ++j) scores(j, 0) = 1.0 - 1e-9;
    CHECK(proposal_loss(scores, planes, gt_line_ids, lines, anchors).value ==
          doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("inverted scores blow the loss up") {
    ScoreMatrix scores(3, 1);
    for (int j = 0; j < 3; ++j) scores(j, 0) = 1e-9;
    CHECK(proposal_loss(scores, planes, gt_line_ids, lines, anchors).value > 10.0);
  }
  SUBCASE("scores outside (0,1) are rejected") {
    ScoreMatrix scores(3, 1);
    scores(0, 0) = 0.0;
    scores(1, 0) = 0.5;
    scores(2, 0) = 0.5;
    CHECK_THROWS_AS(proposal_loss(scores, planes, gt_line_ids, lines, anchors),
                    std::invalid_argument);
    scores(0, 0) = 1.0;
    CHECK_THROWS_AS(proposal_loss(scores, planes, gt_line_ids, lines, anchors),
                    std::invalid_argument);
  }
  SUBCASE("planes without an anchor are skipped and counted") {
    ScoreMatrix scores(3, 1);
    for (int j = 0; j < 3; ++j) scores(j, 0) = 0.5;
    MatchResult no_anchor;  // empty pairs
    auto result = proposal_loss(scores, planes, gt_line_ids, lines, no_anchor);
    CHECK(result.value == 0.0);
    CHECK(result.skipped_planes == 1);
  }
}

TEST_CASE("proposal_loss agrees with an independent evaluation on random inputs") {
  std::mt19937_64 rng(83);
  std::uniform_real_distribution<double> unit(0.02, 0.98);
  std::uniform_int_distribution<int> num_planes_dist(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    int num_lines = 6, num_anchors = 4;
    int num_planes = num_planes_dist(rng);
    ScoreMatrix scores(num_lines, num_anchors);
    for (int j = 0; j < num_lines; ++j) {
      for (int k = 0; k < num_anchors; ++k) scores(j, k) = unit(rng);
    }
    // planes own disjoint pairs of gt segments 2m, 2m+1
    std::vector<PlaneAnnotation> planes;
    std::vector<int> gt_line_ids;
    for (int m = 0; m < num_planes; ++m) {
      planes.push_back(toy_plane({2 * m, 2 * m + 1}));
      gt_line_ids.push_back(2 * m);
      gt_line_ids.push_back(2 * m + 1);
    }
    // random partial line match: gt segment q -> prediction line (q + 1) % num_lines
    MatchResult lines;
    for (std::size_t q = 0; q < gt_line_ids.size(); ++q) {
      if (rng() % 4 != 0) lines.pairs.emplace_back(static_cast<int>(q), (static_cast<int>(q) + 1) % num_lines);
    }
    MatchResult anchors;
    for (int m = 0; m < num_planes; ++m) anchors.pairs.emplace_back(m, m % num_anchors);

    auto result = proposal_loss(scores, planes, gt_line_ids, lines, anchors);
    double expected = proposal_loss_reference(scores, planes, gt_line_ids, lines, anchors);
    CHECK(result.value == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("classification_loss closed forms") {
  std::array<double, 4> unit_weights{1.0, 1.0, 1.0, 1.0};

  SUBCASE("uniform 0.25 scores give log 4") {
    std::vector<std::array<double, 4>> scores{{0.25, 0.25, 0.25, 0.25}};
    std::vector<PlaneLabel> labels{PlaneLabel::Floor};
    CHECK(classification_loss(scores, labels, identity_match(1), unit_weights) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-12));
  }
  SUBCASE("confident correct scores give a near-zero loss") {
    std::vector<std::array<double, 4>> scores{{1e-9, 1.0 - 3e-9, 1e-9, 1e-9}};
    std::vector<PlaneLabel> labels{PlaneLabel::Wall};
    CHECK(classification_loss(scores, labels, identity_match(1), unit_weights) ==
          doctest::Approx(0.0).epsilon(1e-6));
  }
  SUBCASE("class weights scale linearly") {
    std::vector<std::array<double, 4>> scores{{0.25, 0.25, 0.25, 0.25}};
    std::vector<PlaneLabel> labels{PlaneLabel::Ceiling};
    std::array<double, 4> doubled{1.0, 1.0, 1.0, 2.0};
    double base = classification_loss(scores, labels, identity_match(1), unit_weights);
    double heavy = classification_loss(scores, labels, identity_match(1), doubled);
    CHECK(heavy == doctest::Approx(2.0 * base).epsilon(1e-12));
  }
  SUBCASE("unmatched planes hit the epsilon floor") {
    std::vector<std::array<double, 4>> scores{{0.25, 0.25, 0.25, 0.25}};
    std::vector<PlaneLabel> labels{PlaneLabel::Wall};
    MatchResult none;
    CHECK(classification_loss(scores, labels, none, unit_weights) ==
          doctest::Approx(-std::log(1e-7)).epsilon(1e-12));
  }
  SUBCASE("raw-score form drops the log and ignores unmatched planes") {
    std::vector<std::array<double, 4>> scores{{0.1, 0.6, 0.2, 0.1}};
    std::vector<PlaneLabel> labels{PlaneLabel::Wall, PlaneLabel::Floor};
    MatchResult match;
    match.pairs.emplace_back(0, 0);  // second plane unmatched
    double value = classification_loss(scores, labels, match, unit_weights, false);
    CHECK(value == doctest::Approx(-0.6 / 2.0).epsilon(1e-12));
  }
  SUBCASE("malformed score vectors are rejected") {
    std::vector<PlaneLabel> labels{PlaneLabel::Wall};
    CHECK_THROWS_AS(classification_loss({{0.5, 0.6, 0.2, 0.1}}, labels, identity_match(1), unit_weights),
                    std::invalid_argument);  // does not sum to 1
    CHECK_THROWS_AS(classification_loss({{-0.1, 0.6, 0.3, 0.2}}, labels, identity_match(1), unit_weights),
                    std::invalid_argument);  // negative entry
  }
  SUBCASE("no ground truth gives zero") {
    CHECK(classification_loss({}, {}, MatchResult{}, unit_weights) == 0.0);
  }
}

TEST_CASE("classification_loss averages over planes") {
  std::vector<std::array<double, 4>> scores{{0.25, 0.25, 0.25, 0.25}, {0.25, 0.25, 0.25, 0.25}};
  std::vector<PlaneLabel> labels{PlaneLabel::Wall, PlaneLabel::Floor};
  double value = classification_loss(scores, labels, identity_match(2), {1.0, 1.0, 1.0, 1.0});
  CHECK(value == doctest::Approx(std::log(4.0)).epsilon(1e-12));
}
