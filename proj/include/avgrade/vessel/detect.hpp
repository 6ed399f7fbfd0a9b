#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <json.hpp>

#include "avgrade/synth/generator.hpp"
#include "avgrade/synth/scene_spec.hpp"
#include "avgrade/vessel/avmap.hpp"
#include "avgrade/vessel/skeleton.hpp"

namespace avgrade {

struct CupZone {
  double center_x = 0.0;
  double center_y = 0.0;
  double radius = 0.0;

  bool contains(double x, double y) const {
    return std::hypot(x - center_x, y - center_y) <= radius;
  }
};

struct DetectionParams {
  double junction_radius = 5.0;  // skeleton-degree search radius around an
                                 // artery/vein adjacency pixel
  double merge_distance = 10.0;  // at 512x512; scaled linearly with canvas
  int patch_size = 64;
  bool scale_merge_with_canvas = true;

  double effective_merge_distance(int w, int h) const {
    if (!scale_merge_with_canvas) return merge_distance;
    return merge_distance * (static_cast<double>(w) + h) / 1024.0;
  }
};

struct CrossingCandidate {
  int x = 0;
  int y = 0;
  bool in_cup_zone = false;
  int skeleton_degree = 0;
  Patch patch;
};

namespace detect_detail {

inline int max_degree_near(const Image<std::uint8_t>& degree, int px, int py,
                           double radius) {
  int best = 0;
  int r = static_cast<int>(std::ceil(radius));
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy > radius * radius) continue;
      int x = px + dx, y = py + dy;
      if (degree.in_bounds(x, y))
        best = std::max(best, static_cast<int>(degree.at(x, y)));
    }
  return best;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detect_detail

/// Emits one merged candidate per cluster of artery pixels that (a) touch a
/// vein pixel in 8-connectivity, (b) sit within junction_radius of a skeleton
/// junction of effective degree >= 4, and (c) lie strictly outside the cup
/// zone.
inline std::vector<CrossingCandidate> detect_crossing_candidates(
    const AVMap& map, const Skeleton& skel, const CupZone& cup,
    const DetectionParams& params = {}) {
  using namespace detect_detail;
  static constexpr int kNx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
  static constexpr int kNy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

  const Image<std::uint8_t> degree = junction_degree_map(skel);

  std::vector<std::pair<int, int>> hits;
  for (int y = 0; y < map.height; ++y)
    for (int x = 0; x < map.width; ++x) {
      if (map.label_at(x, y) != PixelClass::artery) continue;
      bool touches_vein = false;
      for (int i = 0; i < 8 && !touches_vein; ++i) {
        int nx = x + kNx[i], ny = y + kNy[i];
        touches_vein = map.in_bounds(nx, ny) &&
                       map.label_at(nx, ny) == PixelClass::vein;
      }
      if (!touches_vein) continue;
      if (cup.contains(x, y)) continue;
      if (max_degree_near(degree, x, y, params.junction_radius) < 4) continue;
      hits.push_back({x, y});
    }

  const double d = params.effective_merge_distance(map.width, map.height);
  UnionFind uf(static_cast<int>(hits.size()));
  for (std::size_t i = 0; i < hits.size(); ++i)
    for (std::size_t j = i + 1; j < hits.size(); ++j) {
      double dx = hits[i].first - hits[j].first;
      double dy = hits[i].second - hits[j].second;
      if (std::hypot(dx, dy) < d) uf.unite(static_cast<int>(i), static_cast<int>(j));
    }

  std::vector<CrossingCandidate> out;
  std::vector<int> roots;
  for (std::size_t i = 0; i < hits.size(); ++i)
    if (uf.find(static_cast<int>(i)) == static_cast<int>(i))
      roots.push_back(static_cast<int>(i));
  for (int root : roots) {
    double sx = 0.0, sy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (uf.find(static_cast<int>(i)) != root) continue;
      sx += hits[i].first;
      sy += hits[i].second;
      ++n;
    }
    int cx = static_cast<int>(std::lround(sx / n));
    int cy = static_cast<int>(std::lround(sy / n));
    if (cup.contains(cx, cy)) continue;
    int deg = max_degree_near(skel, cx, cy, params.junction_radius);
    if (deg < 4) {
      // centroid drifted away from the junction; snap to the member pixel
      // nearest the centroid, which satisfied the degree test itself
      double best = 1e18;
      for (std::size_t i = 0; i < hits.size(); ++i) {
        if (uf.find(static_cast<int>(i)) != root) continue;
        double d2 = std::hypot(hits[i].first - sx / n, hits[i].second - sy / n);
        if (d2 < best) {
          best = d2;
          cx = hits[i].first;
          cy = hits[i].second;
        }
      }
      deg = max_degree_near(skel, cx, cy, params.junction_radius);
    }
    CrossingCandidate cand;
    cand.x = cx;
    cand.y = cy;
    cand.in_cup_zone = false;
    cand.skeleton_degree = deg;
    cand.patch = render_patch(map, cx, cy, params.patch_size);
    out.push_back(std::move(cand));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
  });
  return out;
}

/// One patch per candidate, centered at the candidate, padded at borders.
inline std::vector<Patch> extract_patches(
    const AVMap& map, const std::vector<CrossingCandidate>& candidates,
    int size) {
  if (size <= 0) throw std::invalid_argument("patch size must be positive");
  std::vector<Patch> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) out.push_back(render_patch(map, c.x, c.y, size));
  return out;
}

/// Greedy one-to-one matching of candidates to ground-truth crossings within
/// the merge distance; the backbone of detection precision/recall and of the
/// validity labels for the synthetic datasets.
struct MatchResult {
  std::vector<int> candidate_to_crossing;  // -1 when unmatched
  int matched = 0;
  int false_positives = 0;
  int missed = 0;

  double precision() const {
    int total = matched + false_positives;
    return total == 0 ? 0.0 : static_cast<double>(matched) / total;
  }
  double recall() const {
    int total = matched + missed;
    return total == 0 ? 0.0 : static_cast<double>(matched) / total;
  }
};

inline MatchResult match_candidates(const std::vector<CrossingCandidate>& cands,
                                    const GroundTruth& gt, double max_distance) {
  struct Pair {
    double dist;
    int ci, gi;
  };
  std::vector<Pair> pairs;
  for (std::size_t ci = 0; ci < cands.size(); ++ci)
    for (std::size_t gi = 0; gi < gt.crossings.size(); ++gi) {
      double dist = std::hypot(cands[ci].x - gt.crossings[gi].x,
                               cands[ci].y - gt.crossings[gi].y);
      if (dist <= max_distance)
        pairs.push_back({dist, static_cast<int>(ci), static_cast<int>(gi)});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.ci != b.ci) return a.ci < b.ci;
    return a.gi < b.gi;
  });
  MatchResult res;
  res.candidate_to_crossing.assign(cands.size(), -1);
  std::vector<bool> gt_taken(gt.crossings.size(), false);
  for (const auto& p : pairs) {
    if (res.candidate_to_crossing[p.ci] != -1 || gt_taken[p.gi]) continue;
    res.candidate_to_crossing[p.ci] = p.gi;
    gt_taken[p.gi] = true;
    ++res.matched;
  }
  res.false_positives = static_cast<int>(cands.size()) - res.matched;
  res.missed = static_cast<int>(gt.crossings.size()) - res.matched;
  return res;
}

inline nlohmann::json candidates_to_json(
    const std::vector<CrossingCandidate>& cands) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cands)
    arr.push_back({{"x", c.x},
                   {"y", c.y},
                   {"skeleton_degree", c.skeleton_degree},
                   {"in_cup_zone", c.in_cup_zone}});
  return nlohmann::json{{"candidates", arr}};
}

}  // namespace avgrade
