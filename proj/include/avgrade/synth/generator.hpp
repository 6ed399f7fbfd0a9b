#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "avgrade/core/hash.hpp"
#include "avgrade/core/image.hpp"
#include "avgrade/core/rng.hpp"
#include "avgrade/synth/scene_spec.hpp"
#include "avgrade/vessel/avmap.hpp"

namespace avgrade {

// Narrowing geometry: each affected venular edge is a raised-cosine dip in
// the vein's half-width, starting where the vein emerges from under the
// artery and spanning kNarrowWindowFactor vein widths.
inline constexpr double kNarrowWindowFactor = 2.5;
inline constexpr double kNarrowStartMargin = 1.0;

// Caliber factor ranges per grade. Kept disjoint with a buffer so the
// rendered caliber ordering none > mild > moderate > severe survives
// rasterization.
inline constexpr double kMildFactorLo = 0.70, kMildFactorHi = 0.80;
inline constexpr double kModerateFactorLo = 0.42, kModerateFactorHi = 0.50;
inline constexpr double kSevereFactorLo = 0.24, kSevereFactorHi = 0.32;

struct VesselGeometry {
  PixelClass kind = PixelClass::artery;
  std::vector<double> xs, ys;          // polyline, uniform ~0.5 px arc step
  std::vector<double> half_width;      // per sample, after narrowing
  std::vector<double> arc;             // cumulative arc length
  double nominal_width = 0.0;
};

struct CrossingGeometry {
  double x = 0.0, y = 0.0;
  int artery_index = -1;
  int vein_index = -1;
  OverVessel over = OverVessel::artery;
  Severity severity = Severity::none;
  double vein_arc = 0.0;       // arc position of the crossing on the vein
  double sin_angle = 1.0;      // |sin| of crossing angle
  double artery_width = 0.0;
  double vein_width = 0.0;
};

struct SceneGeometry {
  std::vector<VesselGeometry> vessels;
  std::vector<CrossingGeometry> crossings;
};

namespace synth_detail {

struct Vec2 {
  double x = 0.0, y = 0.0;
};

// Catmull-Rom through the control points, then resampled at a uniform
// arc-length step so disc stamping and narrowing windows are well behaved.
inline void sample_spline(const std::vector<Vec2>& ctrl, double step,
                          std::vector<double>& xs, std::vector<double>& ys,
                          std::vector<double>& arc) {
  std::vector<Vec2> p;
  p.push_back(ctrl.front());
  p.insert(p.end(), ctrl.begin(), ctrl.end());
  p.push_back(ctrl.back());

  std::vector<double> rx, ry;
  for (std::size_t i = 0; i + 3 < p.size(); ++i) {
    const Vec2 &p0 = p[i], &p1 = p[i + 1], &p2 = p[i + 2], &p3 = p[i + 3];
    const int kSub = 48;
    for (int k = 0; k < kSub; ++k) {
      double t = static_cast<double>(k) / kSub;
      double t2 = t * t, t3 = t2 * t;
      double bx = 0.5 * ((2.0 * p1.x) + (-p0.x + p2.x) * t +
                         (2.0 * p0.x - 5.0 * p1.x + 4.0 * p2.x - p3.x) * t2 +
                         (-p0.x + 3.0 * p1.x - 3.0 * p2.x + p3.x) * t3);
      double by = 0.5 * ((2.0 * p1.y) + (-p0.y + p2.y) * t +
                         (2.0 * p0.y - 5.0 * p1.y + 4.0 * p2.y - p3.y) * t2 +
                         (-p0.y + 3.0 * p1.y - 3.0 * p2.y + p3.y) * t3);
      rx.push_back(bx);
      ry.push_back(by);
    }
  }
  rx.push_back(p[p.size() - 2].x);
  ry.push_back(p[p.size() - 2].y);

  xs.clear();
  ys.clear();
  arc.clear();
  xs.push_back(rx[0]);
  ys.push_back(ry[0]);
  arc.push_back(0.0);
  double carried = 0.0;
  for (std::size_t i = 1; i < rx.size(); ++i) {
    double dx = rx[i] - rx[i - 1], dy = ry[i] - ry[i - 1];
    double seg = std::hypot(dx, dy);
    if (seg <= 1e-12) continue;
    double pos = carried;
    while (pos + step <= seg) {
      pos += step;
      double t = pos / seg;
      xs.push_back(rx[i - 1] + t * dx);
      ys.push_back(ry[i - 1] + t * dy);
      arc.push_back(arc.back() + step);
    }
    carried = pos - seg;  // negative remainder into the next segment
    carried = -carried;
  }
}

inline bool segments_intersect(double ax, double ay, double bx, double by,
                               double cx, double cy, double dx, double dy,
                               double& ix, double& iy) {
  double r_x = bx - ax, r_y = by - ay;
  double s_x = dx - cx, s_y = dy - cy;
  double denom = r_x * s_y - r_y * s_x;
  if (std::abs(denom) < 1e-12) return false;
  double t = ((cx - ax) * s_y - (cy - ay) * s_x) / denom;
  double u = ((cx - ax) * r_y - (cy - ay) * r_x) / denom;
  if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
  ix = ax + t * r_x;
  iy = ay + t * r_y;
  return true;
}

// Value noise on a coarse lattice plus fine grain; pure function of global
// pixel coordinates, so re-rendering any crop is reproducible.
inline double hash_unit(std::int64_t x, std::int64_t y, std::uint64_t salt) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(x) * 0x9e3779b97f4a7c15ULL ^
                          mix64(static_cast<std::uint64_t>(y) ^ salt));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline double value_noise(double x, double y, double cell, std::uint64_t salt) {
  double gx = std::floor(x / cell), gy = std::floor(y / cell);
  double fx = x / cell - gx, fy = y / cell - gy;
  auto g = [&](double ox, double oy) {
    return hash_unit(static_cast<std::int64_t>(gx + ox),
                     static_cast<std::int64_t>(gy + oy), salt);
  };
  double a = g(0, 0) + fx * (g(1, 0) - g(0, 0));
  double b = g(0, 1) + fx * (g(1, 1) - g(0, 1));
  return a + fy * (b - a);  // in [0, 1)
}

}  // namespace synth_detail

class GenerationError : public std::runtime_error {
 public:
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

namespace synth_detail {

inline VesselGeometry make_vessel(Rng& rng, PixelClass kind, double base_coord,
                                  double jitter, double width, int canvas_w,
                                  int canvas_h) {
  // Arteries run left to right, veins top to bottom; either way the curve is
  // a gentle spline around its base row/column, so artery x vein pairs cross
  // close to perpendicular.
  std::vector<Vec2> ctrl;
  const bool horizontal = kind == PixelClass::artery;
  const double span = horizontal ? canvas_w : canvas_h;
  const int n_ctrl = 4;
  for (int i = 0; i < n_ctrl; ++i) {
    double along = -12.0 + (span + 24.0) * i / (n_ctrl - 1);
    double across = base_coord + rng.uniform(-jitter, jitter);
    if (horizontal)
      ctrl.push_back({along, across});
    else
      ctrl.push_back({across, along});
  }
  VesselGeometry v;
  v.kind = kind;
  v.nominal_width = width;
  sample_spline(ctrl, 0.5, v.xs, v.ys, v.arc);
  v.half_width.assign(v.xs.size(), width / 2.0);
  return v;
}

inline double polyline_min_distance(const VesselGeometry& a,
                                    const VesselGeometry& b, int stride) {
  double best = 1e18;
  for (std::size_t i = 0; i < a.xs.size(); i += stride)
    for (std::size_t j = 0; j < b.xs.size(); j += stride) {
      double dx = a.xs[i] - b.xs[j], dy = a.ys[i] - b.ys[j];
      double d2 = dx * dx + dy * dy;
      if (d2 < best) best = d2;
    }
  return std::sqrt(best);
}

struct RawCrossing {
  double x, y;
  int artery_index, vein_index;
  double vein_arc;
  double sin_angle;
};

inline std::vector<RawCrossing> find_crossings(
    const std::vector<VesselGeometry>& vessels) {
  std::vector<RawCrossing> out;
  const int stride = 4;  // ~2 px chords; accurate enough for placement
  for (std::size_t ai = 0; ai < vessels.size(); ++ai) {
    if (vessels[ai].kind != PixelClass::artery) continue;
    for (std::size_t vi = 0; vi < vessels.size(); ++vi) {
      if (vessels[vi].kind != PixelClass::vein) continue;
      const auto& a = vessels[ai];
      const auto& v = vessels[vi];
      for (std::size_t i = 0; i + stride < a.xs.size(); i += stride) {
        for (std::size_t j = 0; j + stride < v.xs.size(); j += stride) {
          double ix, iy;
          if (!segments_intersect(a.xs[i], a.ys[i], a.xs[i + stride],
                                  a.ys[i + stride], v.xs[j], v.ys[j],
                                  v.xs[j + stride], v.ys[j + stride], ix, iy))
            continue;
          double tax = a.xs[i + stride] - a.xs[i], tay = a.ys[i + stride] - a.ys[i];
          double tvx = v.xs[j + stride] - v.xs[j], tvy = v.ys[j + stride] - v.ys[j];
          double na = std::hypot(tax, tay), nv = std::hypot(tvx, tvy);
          double sin_angle = std::abs(tax * tvy - tay * tvx) / (na * nv);
          // arc position of the hit on the vein
          double arc = v.arc[j] + std::hypot(ix - v.xs[j], iy - v.ys[j]);
          out.push_back({ix, iy, static_cast<int>(ai), static_cast<int>(vi),
                         arc, sin_angle});
        }
      }
    }
  }
  return out;
}

}  // namespace synth_detail

/// Generates one scene and returns rasters, ground truth and the internal
/// curve geometry (the latter is useful for measurement-style tests).
inline void generate_scene_full(const SceneSpec& spec, AVMap& map,
                                GroundTruth& gt, SceneGeometry& geom) {
  spec.validate();
  using namespace synth_detail;

  const int W = spec.canvas_width, H = spec.canvas_height;
  const double row_spacing = spec.n_arteries > 0
                                 ? static_cast<double>(H) / (spec.n_arteries + 1)
                                 : static_cast<double>(H);
  const double col_spacing = spec.n_veins > 0
                                 ? static_cast<double>(W) / (spec.n_veins + 1)
                                 : static_cast<double>(W);
  const double min_spacing = std::max(24.0, 3.2 * spec.vessel_width_max);
  if (spec.n_arteries > 0 && row_spacing < min_spacing)
    throw GenerationError(
        "canvas too small for " + std::to_string(spec.n_arteries) +
        " arteries: row spacing " + std::to_string(row_spacing) +
        " px is below the required " + std::to_string(min_spacing) + " px");
  if (spec.n_veins > 0 && col_spacing < min_spacing)
    throw GenerationError(
        "canvas too small for " + std::to_string(spec.n_veins) +
        " veins: column spacing " + std::to_string(col_spacing) +
        " px is below the required " + std::to_string(min_spacing) + " px");

  Rng rng(derive_seed(spec.seed, 0xa11e5));

  const double border_margin = 40.0;
  const double crossing_separation = 34.0;
  const double cup_margin = spec.cup_radius + 14.0 + spec.vessel_width_max;
  const double min_sin_angle = std::sin(40.0 * 3.14159265358979323846 / 180.0);

  std::vector<VesselGeometry> vessels;
  std::vector<RawCrossing> raw;
  bool ok = false;
  for (int attempt = 0; attempt < 60 && !ok; ++attempt) {
    vessels.clear();
    for (int i = 0; i < spec.n_arteries; ++i) {
      double base = row_spacing * (i + 1) + rng.uniform(-0.12, 0.12) * row_spacing;
      double width = rng.uniform(spec.vessel_width_min, spec.vessel_width_max);
      vessels.push_back(make_vessel(rng, PixelClass::artery, base,
                                    0.30 * row_spacing, width, W, H));
    }
    for (int i = 0; i < spec.n_veins; ++i) {
      double base = col_spacing * (i + 1) + rng.uniform(-0.12, 0.12) * col_spacing;
      double width = rng.uniform(spec.vessel_width_min, spec.vessel_width_max);
      vessels.push_back(make_vessel(rng, PixelClass::vein, base,
                                    0.30 * col_spacing, width, W, H));
    }

    // same-type vessels must stay apart so masks do not merge off-crossing
    ok = true;
    for (std::size_t i = 0; i < vessels.size() && ok; ++i)
      for (std::size_t j = i + 1; j < vessels.size() && ok; ++j) {
        if (vessels[i].kind != vessels[j].kind) continue;
        double need = (vessels[i].nominal_width + vessels[j].nominal_width) / 2.0 + 10.0;
        if (polyline_min_distance(vessels[i], vessels[j], 4) < need) ok = false;
      }
    if (!ok) continue;

    raw = find_crossings(vessels);

    // exactly one crossing per artery x vein pair
    std::vector<int> pair_count(vessels.size() * vessels.size(), 0);
    for (const auto& c : raw)
      pair_count[c.artery_index * vessels.size() + c.vein_index]++;
    for (int n : pair_count)
      if (n > 1) ok = false;
    if (!ok) continue;

    for (const auto& c : raw) {
      const auto& vein = vessels[c.vein_index];
      const auto& artery = vessels[c.artery_index];
      double cup_d = std::hypot(c.x - spec.cup_center_x, c.y - spec.cup_center_y);
      double window = (artery.nominal_width / 2.0) / std::max(c.sin_angle, 0.2) +
                      kNarrowStartMargin +
                      kNarrowWindowFactor * vein.nominal_width + 6.0;
      if (c.x < border_margin || c.x > W - border_margin ||
          c.y < border_margin || c.y > H - border_margin ||
          cup_d <= cup_margin || c.sin_angle < min_sin_angle ||
          c.vein_arc < window || c.vein_arc > vein.arc.back() - window) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    for (std::size_t i = 0; i < raw.size() && ok; ++i)
      for (std::size_t j = i + 1; j < raw.size() && ok; ++j)
        if (std::hypot(raw[i].x - raw[j].x, raw[i].y - raw[j].y) <
            crossing_separation)
          ok = false;
  }
  if (!ok)
    throw GenerationError(
        "could not place vessels subject to crossing constraints "
        "(separation/angle/cup margins); canvas too small for the requested "
        "vessel counts");

  // assign over-vessel and severity per crossing
  geom.vessels = std::move(vessels);
  geom.crossings.clear();
  gt.crossings.clear();
  gt.examinee_id = spec.examinee_id;
  for (const auto& c : raw) {
    CrossingGeometry cg;
    cg.x = c.x;
    cg.y = c.y;
    cg.artery_index = c.artery_index;
    cg.vein_index = c.vein_index;
    cg.vein_arc = c.vein_arc;
    cg.sin_angle = c.sin_angle;
    cg.artery_width = geom.vessels[c.artery_index].nominal_width;
    cg.vein_width = geom.vessels[c.vein_index].nominal_width;
    cg.over = rng.bernoulli(spec.artery_over_prob) ? OverVessel::artery
                                                   : OverVessel::vein;
    if (cg.over == OverVessel::artery) {
      double u = rng.uniform();
      double acc = 0.0;
      int sev = 0;
      for (int k = 0; k < 4; ++k) {
        acc += spec.severity_priors[k];
        if (u < acc) {
          sev = k;
          break;
        }
        sev = k;  // rounding tail falls into the last class
      }
      cg.severity = static_cast<Severity>(sev);
    }
    geom.crossings.push_back(cg);
  }

  // carve the narrowing profile into the vein half-width arrays
  for (auto& cg : geom.crossings) {
    if (cg.over != OverVessel::artery || cg.severity == Severity::none) continue;
    double f_lo = 0.0, f_hi = 0.0;
    bool both_edges = true;
    switch (cg.severity) {
      case Severity::mild: f_lo = kMildFactorLo; f_hi = kMildFactorHi; break;
      case Severity::moderate:
        f_lo = kModerateFactorLo;
        f_hi = kModerateFactorHi;
        both_edges = false;
        break;
      case Severity::severe: f_lo = kSevereFactorLo; f_hi = kSevereFactorHi; break;
      default: break;
    }
    auto& vein = geom.vessels[cg.vein_index];
    const double footprint =
        (cg.artery_width / 2.0) / std::max(cg.sin_angle, 0.2) + kNarrowStartMargin;
    const double len = kNarrowWindowFactor * cg.vein_width;
    bool narrow_upstream = true, narrow_downstream = true;
    if (!both_edges) {
      narrow_upstream = rng.bernoulli(0.5);
      narrow_downstream = !narrow_upstream;
    }
    auto carve = [&](double a, double b, double f_min) {
      for (std::size_t i = 0; i < vein.arc.size(); ++i) {
        double s = vein.arc[i];
        if (s < a || s > b) continue;
        double t = (s - a) / (b - a);
        double dip = std::sin(3.14159265358979323846 * t);
        double factor = 1.0 - (1.0 - f_min) * dip;
        vein.half_width[i] = std::min(vein.half_width[i],
                                      factor * vein.nominal_width / 2.0);
      }
    };
    if (narrow_downstream)
      carve(cg.vein_arc + footprint, cg.vein_arc + footprint + len,
            rng.uniform(f_lo, f_hi));
    if (narrow_upstream)
      carve(cg.vein_arc - footprint - len, cg.vein_arc - footprint,
            rng.uniform(f_lo, f_hi));
  }

  // rasterize: veins first, arteries on top, then local vein-over restamps
  map = AVMap(W, H);
  auto stamp = [&](const VesselGeometry& v, std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      double cx = v.xs[i], cy = v.ys[i], r = v.half_width[i];
      int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
      int x1 = std::min(W - 1, static_cast<int>(std::ceil(cx + r)));
      int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
      int y1 = std::min(H - 1, static_cast<int>(std::ceil(cy + r)));
      double r2 = r * r;
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
          double dx = x - cx, dy = y - cy;
          if (dx * dx + dy * dy <= r2) {
            map.set_label(x, y, v.kind);
            map.set_mask(x, y, true);
          }
        }
    }
  };
  for (const auto& v : geom.vessels)
    if (v.kind == PixelClass::vein) stamp(v, 0, v.xs.size());
  for (const auto& v : geom.vessels)
    if (v.kind == PixelClass::artery) stamp(v, 0, v.xs.size());
  for (const auto& cg : geom.crossings) {
    if (cg.over != OverVessel::vein) continue;
    const auto& vein = geom.vessels[cg.vein_index];
    double reach = (cg.artery_width / 2.0) / std::max(cg.sin_angle, 0.2) +
                   cg.vein_width + 3.0;
    std::size_t i0 = 0, i1 = vein.xs.size();
    for (std::size_t i = 0; i < vein.arc.size(); ++i) {
      if (vein.arc[i] < cg.vein_arc - reach) i0 = i;
      if (vein.arc[i] <= cg.vein_arc + reach) i1 = i + 1;
    }
    stamp(vein, i0, i1);
  }

  for (const auto& cg : geom.crossings) {
    Crossing c;
    c.x = static_cast<int>(std::lround(cg.x));
    c.y = static_cast<int>(std::lround(cg.y));
    c.over = cg.over;
    c.severity = cg.over == OverVessel::artery ? cg.severity : Severity::none;
    gt.crossings.push_back(c);
  }
}

inline std::pair<AVMap, GroundTruth> generate_scene(const SceneSpec& spec) {
  AVMap map;
  GroundTruth gt;
  SceneGeometry geom;
  generate_scene_full(spec, map, gt, geom);
  return {std::move(map), std::move(gt)};
}

/// Label-raster crop centered at (cx, cy); out-of-canvas area is background.
/// Patch origin is (cx - size/2, cy - size/2) with integer division.
inline AVMap crop_avmap(const AVMap& map, int cx, int cy, int size) {
  if (size <= 0) throw std::invalid_argument("patch size must be positive");
  AVMap out(size, size);
  const int x0 = cx - size / 2, y0 = cy - size / 2;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      int sx = x0 + x, sy = y0 + y;
      if (!map.in_bounds(sx, sy)) continue;
      out.labels.at(x, y) = map.labels.at(sx, sy);
      out.vessel_mask.at(x, y) = map.vessel_mask.at(sx, sy);
    }
  return out;
}

using Patch = ImageU8;

namespace synth_detail {

inline constexpr double kBgBase[3] = {152.0, 64.0, 38.0};

inline void shade_pixel(const AVMap& map, int gx, int gy, double out[3]) {
  if (!map.in_bounds(gx, gy)) {
    out[0] = kBgBase[0];
    out[1] = kBgBase[1];
    out[2] = kBgBase[2];
    return;
  }
  // smoothed vessel coverage for soft edges
  int vessel9 = 0, same25 = 0, total25 = 0;
  PixelClass cls = map.label_at(gx, gy);
  bool on_mask = map.mask_at(gx, gy);
  for (int dy = -1; dy <= 1; ++dy)
    for (int dx = -1; dx <= 1; ++dx) {
      int x = gx + dx, y = gy + dy;
      if (map.in_bounds(x, y) && map.mask_at(x, y)) ++vessel9;
    }
  if (on_mask) {
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx) {
        int x = gx + dx, y = gy + dy;
        if (!map.in_bounds(x, y)) continue;
        ++total25;
        if (map.label_at(x, y) == cls) ++same25;
      }
  }
  double alpha = on_mask ? 1.0 : vessel9 / 9.0 * 0.55;

  double cx = map.width / 2.0, cy = map.height / 2.0;
  double d = std::hypot(gx - cx, gy - cy) / std::hypot(cx, cy);
  double vignette = 1.0 - 0.22 * d * d;
  double coarse = value_noise(gx, gy, 16.0, 0x5eed01) * 2.0 - 1.0;
  double grain = hash_unit(gx, gy, 0x5eed02) * 2.0 - 1.0;
  double bg[3];
  for (int c = 0; c < 3; ++c)
    bg[c] = kBgBase[c] * vignette + 14.0 * coarse + 5.0 * grain;

  double vessel[3] = {0, 0, 0};
  if (vessel9 > 0) {
    double interior = total25 > 0 ? static_cast<double>(same25) / total25 : 0.0;
    if (on_mask && cls == PixelClass::artery) {
      double reflex = std::max(0.0, interior - 0.55) / 0.45;
      vessel[0] = 205.0 + 40.0 * reflex;
      vessel[1] = 96.0 + 26.0 * reflex;
      vessel[2] = 78.0 + 18.0 * reflex;
    } else if (on_mask && cls == PixelClass::vein) {
      double core = std::max(0.0, interior - 0.55) / 0.45;
      vessel[0] = 104.0 - 16.0 * core;
      vessel[1] = 40.0 - 6.0 * core;
      vessel[2] = 56.0 - 6.0 * core;
    } else if (on_mask) {
      vessel[0] = vessel[1] = vessel[2] = 150.0;  // unlabeled vessel
    } else {
      // off-mask neighbour of a vessel: blend toward the darker vein tone
      vessel[0] = 120.0;
      vessel[1] = 52.0;
      vessel[2] = 56.0;
    }
    vessel[0] += 4.0 * grain;
    vessel[1] += 3.0 * grain;
    vessel[2] += 3.0 * grain;
  }
  for (int c = 0; c < 3; ++c) out[c] = bg[c] * (1.0 - alpha) + vessel[c] * alpha;
}

}  // namespace synth_detail

/// Photorealistic-ish RGB patch centered at (cx, cy). A pure function of the
/// label raster and global pixel coordinates, so identical maps give
/// identical patches.
inline Patch render_patch(const AVMap& map, int cx, int cy, int size) {
  if (size <= 0) throw std::invalid_argument("patch size must be positive");
  Patch out(size, size, 3);
  const int x0 = cx - size / 2, y0 = cy - size / 2;
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      double rgb[3];
      synth_detail::shade_pixel(map, x0 + x, y0 + y, rgb);
      for (int c = 0; c < 3; ++c)
        out.at(x, y, c) =
            static_cast<std::uint8_t>(std::clamp(rgb[c], 0.0, 255.0));
    }
  return out;
}

/// Minimum vein run length (in pixels, 0.25 px resolution) measured
/// perpendicular to the vein inside the narrowing windows on both sides of a
/// crossing. Positions whose centerline pixel is covered by something other
/// than vein are skipped.
inline double measure_vein_caliber(const AVMap& map, const SceneGeometry& geom,
                                   const CrossingGeometry& cg) {
  const auto& vein = geom.vessels[cg.vein_index];
  const double footprint =
      (cg.artery_width / 2.0) / std::max(cg.sin_angle, 0.2) + kNarrowStartMargin;
  const double len = kNarrowWindowFactor * cg.vein_width;

  auto point_at_arc = [&](double s, double& px, double& py, double& tx,
                          double& ty) -> bool {
    if (s < vein.arc.front() || s > vein.arc.back()) return false;
    auto it = std::lower_bound(vein.arc.begin(), vein.arc.end(), s);
    std::size_t i = std::min<std::size_t>(
        std::distance(vein.arc.begin(), it), vein.arc.size() - 2);
    if (i == 0) i = 1;
    px = vein.xs[i];
    py = vein.ys[i];
    tx = vein.xs[i + 1] - vein.xs[i - 1];
    ty = vein.ys[i + 1] - vein.ys[i - 1];
    double n = std::hypot(tx, ty);
    if (n < 1e-9) return false;
    tx /= n;
    ty /= n;
    return true;
  };

  double best = 1e18;
  const double step = 0.25;
  const double reach = cg.vein_width + 3.0;
  for (int side = -1; side <= 1; side += 2) {
    for (int k = 0; k <= 16; ++k) {
      double s = cg.vein_arc + side * (footprint + len * k / 16.0);
      double px, py, tx, ty;
      if (!point_at_arc(s, px, py, tx, ty)) continue;
      double nx = -ty, ny = tx;
      auto is_vein = [&](double off) {
        int x = static_cast<int>(std::lround(px + nx * off));
        int y = static_cast<int>(std::lround(py + ny * off));
        return map.in_bounds(x, y) && map.label_at(x, y) == PixelClass::vein;
      };
      if (!is_vein(0.0)) continue;
      double lo = 0.0, hi = 0.0;
      while (lo > -reach && is_vein(lo - step)) lo -= step;
      while (hi < reach && is_vein(hi + step)) hi += step;
      best = std::min(best, hi - lo + step);
    }
  }
  return best >= 1e18 ? 0.0 : best;
}

}  // namespace avgrade
