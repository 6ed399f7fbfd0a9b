#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "avgrade/core/image.hpp"

namespace avgrade {

enum class PixelClass : std::uint8_t { background = 0, artery = 1, vein = 2 };

/// Per-pixel artery/vein class raster plus the binary vessel mask.
/// After refinement every labeled pixel is also a mask pixel; raw maps loaded
/// from file may violate that until refine_av_map has run.
struct AVMap {
  int width = 0;
  int height = 0;
  Image<std::uint8_t> labels;       // PixelClass values
  Image<std::uint8_t> vessel_mask;  // 0 / 1

  AVMap() = default;
  AVMap(int w, int h)
      : width(w), height(h), labels(w, h, 1), vessel_mask(w, h, 1) {}

  PixelClass label_at(int x, int y) const {
    return static_cast<PixelClass>(labels.at(x, y));
  }
  void set_label(int x, int y, PixelClass c) {
    labels.at(x, y) = static_cast<std::uint8_t>(c);
  }
  bool mask_at(int x, int y) const { return vessel_mask.at(x, y) != 0; }
  void set_mask(int x, int y, bool v) { vessel_mask.at(x, y) = v ? 1 : 0; }

  bool in_bounds(int x, int y) const { return labels.in_bounds(x, y); }
};

// Raster palette: background black, artery red, vein blue. Vessel-mask pixels
// that carry no artery/vein label yet are written white so raw maps survive a
// round trip.
inline ImageU8 avmap_to_rgb(const AVMap& map) {
  ImageU8 img(map.width, map.height, 3);
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      std::uint8_t r = 0, g = 0, b = 0;
      switch (map.label_at(x, y)) {
        case PixelClass::artery: r = 255; break;
        case PixelClass::vein: b = 255; break;
        case PixelClass::background:
          if (map.mask_at(x, y)) r = g = b = 255;
          break;
      }
      img.at(x, y, 0) = r;
      img.at(x, y, 1) = g;
      img.at(x, y, 2) = b;
    }
  }
  return img;
}

inline AVMap avmap_from_rgb(const ImageU8& img) {
  if (img.channels != 3) throw std::runtime_error("avmap: expected RGB raster");
  AVMap map(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const std::uint8_t r = img.at(x, y, 0);
      const std::uint8_t g = img.at(x, y, 1);
      const std::uint8_t b = img.at(x, y, 2);
      if (r > 127 && g > 127 && b > 127) {
        map.set_mask(x, y, true);
      } else if (r > 127) {
        map.set_label(x, y, PixelClass::artery);
        map.set_mask(x, y, true);
      } else if (b > 127) {
        map.set_label(x, y, PixelClass::vein);
        map.set_mask(x, y, true);
      }
    }
  }
  return map;
}

}  // namespace avgrade
