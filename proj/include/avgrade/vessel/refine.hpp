#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "avgrade/vessel/avmap.hpp"

namespace avgrade {

/// Reconciles artery/vein labels with the (more reliable) vessel mask:
/// off-mask labels are dropped, and unlabeled mask pixels take the majority
/// label of their nearest labeled vessel pixels (exact squared Euclidean
/// distance; a tie in the vote goes to artery). If the map carries no labeled
/// vessel pixel at all, unlabeled mask pixels stay background.
inline AVMap refine_av_map(const AVMap& raw, const Image<std::uint8_t>& mask) {
  if (raw.width != mask.width || raw.height != mask.height)
    throw std::invalid_argument("refine_av_map: raster dimensions differ");

  const int W = raw.width, H = raw.height;
  AVMap out(W, H);
  bool any_labeled = false;
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x) {
      bool on = mask.at(x, y) != 0;
      out.set_mask(x, y, on);
      if (!on) continue;
      PixelClass c = raw.label_at(x, y);
      if (c != PixelClass::background) {
        out.set_label(x, y, c);
        any_labeled = true;
      }
    }
  if (!any_labeled) return out;

  // ring search: any pixel outside Chebyshev radius R is at least R away,
  // so once R*R exceeds the best squared distance the vote is final
  auto vote_nearest = [&](int px, int py) {
    long best_d2 = -1;
    int artery_votes = 0, vein_votes = 0;
    int max_r = std::max(W, H);
    for (int R = 1; R <= max_r; ++R) {
      if (best_d2 >= 0 && static_cast<long>(R) * R > best_d2) break;
      int x0 = px - R, x1 = px + R, y0 = py - R, y1 = py + R;
      auto consider = [&](int x, int y) {
        if (x < 0 || x >= W || y < 0 || y >= H) return;
        PixelClass c = out.label_at(x, y);
        if (c == PixelClass::background) return;
        long dx = x - px, dy = y - py;
        long d2 = dx * dx + dy * dy;
        if (best_d2 < 0 || d2 < best_d2) {
          best_d2 = d2;
          artery_votes = vein_votes = 0;
        }
        if (d2 == best_d2) {
          if (c == PixelClass::artery) ++artery_votes;
          else ++vein_votes;
        }
      };
      for (int x = x0; x <= x1; ++x) {
        consider(x, y0);
        consider(x, y1);
      }
      for (int y = y0 + 1; y < y1; ++y) {
        consider(x0, y);
        consider(x1, y);
      }
    }
    return artery_votes >= vein_votes ? PixelClass::artery : PixelClass::vein;
  };

  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      if (out.mask_at(x, y) && out.label_at(x, y) == PixelClass::background)
        out.set_label(x, y, vote_nearest(x, y));
  return out;
}

inline AVMap refine_av_map(const AVMap& raw) {
  return refine_av_map(raw, raw.vessel_mask);
}

}  // namespace avgrade
