#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "avgrade/core/image.hpp"

namespace avgrade {

/// One-pixel-wide medial representation of a binary mask with per-pixel
/// 8-neighbour counts.
struct Skeleton {
  Image<std::uint8_t> pixels;  // 0 / 1
  Image<std::uint8_t> degree;  // 8-connectivity neighbour count, skeleton only
  std::vector<std::pair<int, int>> coords;

  bool at(int x, int y) const {
    return pixels.in_bounds(x, y) && pixels.at(x, y) != 0;
  }
};

namespace skel_detail {

// clockwise 8-neighbourhood starting north: P2..P9
inline constexpr int kNx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
inline constexpr int kNy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

inline void neighbours(const Image<std::uint8_t>& img, int x, int y,
                       std::array<int, 8>& p) {
  for (int i = 0; i < 8; ++i) {
    int nx = x + kNx[i], ny = y + kNy[i];
    p[i] = img.in_bounds(nx, ny) && img.at(nx, ny) != 0 ? 1 : 0;
  }
}

inline int transitions(const std::array<int, 8>& p) {
  int a = 0;
  for (int i = 0; i < 8; ++i)
    if (p[i] == 0 && p[(i + 1) % 8] == 1) ++a;
  return a;
}

// 8-connected component labels, 0 = background
inline Image<int> label_components(const Image<std::uint8_t>& mask) {
  Image<int> labels(mask.width, mask.height, 1, 0);
  int next = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x) {
      if (mask.at(x, y) == 0 || labels.at(x, y) != 0) continue;
      ++next;
      stack.push_back({x, y});
      labels.at(x, y) = next;
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int i = 0; i < 8; ++i) {
          int nx = cx + kNx[i], ny = cy + kNy[i];
          if (mask.in_bounds(nx, ny) && mask.at(nx, ny) != 0 &&
              labels.at(nx, ny) == 0) {
            labels.at(nx, ny) = next;
            stack.push_back({nx, ny});
          }
        }
      }
    }
  return labels;
}

}  // namespace skel_detail

inline int count_components(const Image<std::uint8_t>& mask) {
  auto labels = skel_detail::label_components(mask);
  int n = 0;
  for (int v : labels.data) n = std::max(n, v);
  return n;
}

/// Effective junction degree per skeleton pixel.
///
/// Thinning tends to split an X crossing into two adjacent degree-3 nodes,
/// so raw per-pixel degree under-reports crossings. Branch pixels
/// (degree >= 3) are grouped into clusters together with skeleton pixels
/// within Chebyshev distance 2, and each cluster is scored by the number of
/// skeleton arms leaving it. Every pixel of a cluster gets the cluster's arm
/// count; non-junction pixels get their plain degree.
inline Image<std::uint8_t> junction_degree_map(const Skeleton& skel) {
  using namespace skel_detail;
  const int W = skel.pixels.width, H = skel.pixels.height;
  Image<std::uint8_t> cluster(W, H, 1, 0);
  for (auto [x, y] : skel.coords) {
    if (skel.degree.at(x, y) < 3) continue;
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx) {
        int nx = x + dx, ny = y + dy;
        if (skel.pixels.in_bounds(nx, ny) && skel.pixels.at(nx, ny))
          cluster.at(nx, ny) = 1;
      }
  }
  auto cluster_ids = label_components(cluster);
  int n_clusters = 0;
  for (int v : cluster_ids.data) n_clusters = std::max(n_clusters, v);

  // arms leaving a cluster: connected groups of outside-cluster skeleton
  // pixels that touch the cluster
  std::vector<int> arms(n_clusters + 1, 0);
  if (n_clusters > 0) {
    Image<std::uint8_t> outside(W, H, 1, 0);
    for (auto [x, y] : skel.coords)
      if (cluster.at(x, y) == 0) outside.at(x, y) = 1;
    auto outside_ids = label_components(outside);
    // (cluster, outside-component) adjacency, counted once
    std::vector<std::pair<int, int>> seen;
    for (auto [x, y] : skel.coords) {
      int cid = cluster_ids.at(x, y);
      if (cid == 0) continue;
      for (int i = 0; i < 8; ++i) {
        int nx = x + kNx[i], ny = y + kNy[i];
        if (!skel.pixels.in_bounds(nx, ny)) continue;
        int oid = outside_ids.at(nx, ny);
        if (oid == 0) continue;
        std::pair<int, int> key{cid, oid};
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
          seen.push_back(key);
          ++arms[cid];
        }
      }
    }
  }

  Image<std::uint8_t> out(W, H, 1, 0);
  for (auto [x, y] : skel.coords) {
    int cid = cluster_ids.at(x, y);
    int deg = skel.degree.at(x, y);
    int eff = cid > 0 ? std::max(arms[cid], deg) : deg;
    out.at(x, y) = static_cast<std::uint8_t>(std::min(eff, 255));
  }
  return out;
}

/// Zhang-Suen iterative thinning.
///
/// Two departures from the textbook algorithm keep the contract strict:
/// components that standard Zhang-Suen would erase completely (e.g. isolated
/// 2x2 blobs) are restored as a single pixel nearest their centroid, and any
/// surviving fully-occupied 2x2 block is eroded by a corner whose removal
/// keeps its neighbourhood connected. Both fixes are deterministic.
inline Skeleton skeletonize(const Image<std::uint8_t>& mask) {
  using namespace skel_detail;
  const int W = mask.width, H = mask.height;
  Image<std::uint8_t> img(W, H, 1, 0);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) img.at(x, y) = mask.at(x, y) != 0 ? 1 : 0;

  std::vector<std::pair<int, int>> to_delete;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      to_delete.clear();
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
          if (img.at(x, y) == 0) continue;
          std::array<int, 8> p;
          neighbours(img, x, y, p);
          int b = 0;
          for (int v : p) b += v;
          if (b < 2 || b > 6) continue;
          if (transitions(p) != 1) continue;
          // p = {N, NE, E, SE, S, SW, W, NW}
          if (pass == 0) {
            if (p[0] * p[2] * p[4] != 0) continue;
            if (p[2] * p[4] * p[6] != 0) continue;
          } else {
            if (p[0] * p[2] * p[6] != 0) continue;
            if (p[0] * p[4] * p[6] != 0) continue;
          }
          to_delete.push_back({x, y});
        }
      for (auto [x, y] : to_delete) img.at(x, y) = 0;
      if (!to_delete.empty()) changed = true;
    }
  }

  // erode any remaining full 2x2 blocks (rare staircase remnants)
  bool eroded = true;
  while (eroded) {
    eroded = false;
    for (int y = 0; y + 1 < H && !eroded; ++y)
      for (int x = 0; x + 1 < W && !eroded; ++x) {
        if (!(img.at(x, y) && img.at(x + 1, y) && img.at(x, y + 1) &&
              img.at(x + 1, y + 1)))
          continue;
        const int cand[4][2] = {{x, y}, {x + 1, y}, {x, y + 1}, {x + 1, y + 1}};
        for (auto& c : cand) {
          std::array<int, 8> p;
          neighbours(img, c[0], c[1], p);
          if (transitions(p) == 1) {
            img.at(c[0], c[1]) = 0;
            eroded = true;
            break;
          }
        }
      }
  }

  // restore one representative pixel for any component thinning erased
  auto original = label_components([&] {
    Image<std::uint8_t> m(W, H, 1, 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) m.at(x, y) = mask.at(x, y) != 0 ? 1 : 0;
    return m;
  }());
  int n_components = 0;
  for (int v : original.data) n_components = std::max(n_components, v);
  if (n_components > 0) {
    std::vector<bool> survives(n_components + 1, false);
    std::vector<double> sum_x(n_components + 1, 0.0), sum_y(n_components + 1, 0.0);
    std::vector<long> count(n_components + 1, 0);
    for (int y = 0; y < H; ++y)
      for (int x = 0; x < W; ++x) {
        int l = original.at(x, y);
        if (l == 0) continue;
        sum_x[l] += x;
        sum_y[l] += y;
        ++count[l];
        if (img.at(x, y)) survives[l] = true;
      }
    for (int l = 1; l <= n_components; ++l) {
      if (survives[l]) continue;
      double cx = sum_x[l] / count[l], cy = sum_y[l] / count[l];
      double best_d2 = -1.0;
      int bx = -1, by = -1;
      for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
          if (original.at(x, y) != l) continue;
          double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
          if (best_d2 < 0.0 || d2 < best_d2) {
            best_d2 = d2;
            bx = x;
            by = y;
          }
        }
      img.at(bx, by) = 1;
    }
  }

  Skeleton skel;
  skel.pixels = std::move(img);
  skel.degree = Image<std::uint8_t>(W, H, 1, 0);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      if (skel.pixels.at(x, y) == 0) continue;
      std::array<int, 8> p;
      neighbours(skel.pixels, x, y, p);
      int d = 0;
      for (int v : p) d += v;
      skel.degree.at(x, y) = static_cast<std::uint8_t>(d);
      skel.coords.push_back({x, y});
    }
  return skel;
}

}  // namespace avgrade
