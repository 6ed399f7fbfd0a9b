#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "avgrade/core/image.hpp"

// Minimal image I/O: binary PPM/PGM and a deliberately small PNG subset
// (8-bit gray/RGB/RGBA, non-interlaced). The PNG writer always emits filter
// type 0 and a fixed zlib level, so identical pixels give identical bytes.

namespace avgrade {

namespace detail {

inline void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline std::uint32_t get_u32_be(const std::uint8_t* p) {
  return (static_cast<std::uint32_t>(p[0]) << 24) |
         (static_cast<std::uint32_t>(p[1]) << 16) |
         (static_cast<std::uint32_t>(p[2]) << 8) | p[3];
}

inline void append_chunk(std::vector<std::uint8_t>& out, const char* type,
                         const std::uint8_t* payload, std::size_t len) {
  put_u32_be(out, static_cast<std::uint32_t>(len));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload, payload + len);
  std::uint32_t crc = static_cast<std::uint32_t>(
      ::crc32(0L, out.data() + start, static_cast<uInt>(4 + len)));
  put_u32_be(out, crc);
}

}  // namespace detail

inline void write_bytes(const std::string& path,
                        const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
}

inline std::vector<std::uint8_t> encode_png(const ImageU8& img) {
  if (img.channels != 1 && img.channels != 3 && img.channels != 4)
    throw std::runtime_error("png: unsupported channel count");
  std::vector<std::uint8_t> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

  std::uint8_t ihdr[13];
  ihdr[0] = static_cast<std::uint8_t>(img.width >> 24);
  ihdr[1] = static_cast<std::uint8_t>(img.width >> 16);
  ihdr[2] = static_cast<std::uint8_t>(img.width >> 8);
  ihdr[3] = static_cast<std::uint8_t>(img.width);
  ihdr[4] = static_cast<std::uint8_t>(img.height >> 24);
  ihdr[5] = static_cast<std::uint8_t>(img.height >> 16);
  ihdr[6] = static_cast<std::uint8_t>(img.height >> 8);
  ihdr[7] = static_cast<std::uint8_t>(img.height);
  ihdr[8] = 8;  // bit depth
  ihdr[9] = img.channels == 1 ? 0 : (img.channels == 3 ? 2 : 6);
  ihdr[10] = 0;
  ihdr[11] = 0;
  ihdr[12] = 0;
  detail::append_chunk(out, "IHDR", ihdr, 13);

  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * img.height);
  for (int y = 0; y < img.height; ++y) {
    raw.push_back(0);  // filter: none
    const std::uint8_t* row = img.data.data() + static_cast<std::size_t>(y) * stride;
    raw.insert(raw.end(), row, row + stride);
  }

  uLongf bound = ::compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> z(bound);
  if (::compress2(z.data(), &bound, raw.data(), static_cast<uLong>(raw.size()),
                  6) != Z_OK)
    throw std::runtime_error("png: deflate failed");
  detail::append_chunk(out, "IDAT", z.data(), bound);
  detail::append_chunk(out, "IEND", nullptr, 0);
  return out;
}

inline ImageU8 decode_png(const std::vector<std::uint8_t>& bytes) {
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (bytes.size() < 8 || std::memcmp(bytes.data(), sig, 8) != 0)
    throw std::runtime_error("png: bad signature");

  int width = 0, height = 0, channels = 0;
  std::vector<std::uint8_t> idat;
  std::size_t pos = 8;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t len = detail::get_u32_be(bytes.data() + pos);
    if (pos + 12 + len > bytes.size()) throw std::runtime_error("png: truncated");
    const char* type = reinterpret_cast<const char*>(bytes.data() + pos + 4);
    const std::uint8_t* payload = bytes.data() + pos + 8;
    if (std::memcmp(type, "IHDR", 4) == 0) {
      width = static_cast<int>(detail::get_u32_be(payload));
      height = static_cast<int>(detail::get_u32_be(payload + 4));
      int depth = payload[8], color = payload[9];
      if (depth != 8 || payload[12] != 0)
        throw std::runtime_error("png: unsupported format");
      if (color == 0) channels = 1;
      else if (color == 2) channels = 3;
      else if (color == 6) channels = 4;
      else throw std::runtime_error("png: unsupported color type");
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), payload, payload + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (width <= 0 || height <= 0 || channels == 0)
    throw std::runtime_error("png: missing IHDR");

  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  std::vector<std::uint8_t> raw((stride + 1) * height);
  uLongf raw_len = static_cast<uLongf>(raw.size());
  if (::uncompress(raw.data(), &raw_len, idat.data(),
                   static_cast<uLong>(idat.size())) != Z_OK ||
      raw_len != raw.size())
    throw std::runtime_error("png: inflate failed");

  ImageU8 img(width, height, channels);
  const int bpp = channels;
  std::vector<std::uint8_t> prev(stride, 0);
  for (int y = 0; y < height; ++y) {
    const std::uint8_t filter = raw[static_cast<std::size_t>(y) * (stride + 1)];
    const std::uint8_t* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1;
    std::uint8_t* dst = img.data.data() + static_cast<std::size_t>(y) * stride;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= static_cast<std::size_t>(bpp) ? dst[i - bpp] : 0;
      const int b = prev[i];
      const int c = i >= static_cast<std::size_t>(bpp) ? prev[i - bpp] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: {
          const int p = a + b - c;
          const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
          v += (pa <= pb && pa <= pc) ? a : (pb <= pc ? b : c);
          break;
        }
        default: throw std::runtime_error("png: bad filter byte");
      }
      dst[i] = static_cast<std::uint8_t>(v & 0xff);
    }
    std::memcpy(prev.data(), dst, stride);
  }
  return img;
}

inline std::vector<std::uint8_t> encode_pnm(const ImageU8& img) {
  if (img.channels != 1 && img.channels != 3)
    throw std::runtime_error("pnm: only gray or RGB");
  std::string header = (img.channels == 3 ? "P6\n" : "P5\n") +
                       std::to_string(img.width) + " " +
                       std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), img.data.begin(), img.data.end());
  return out;
}

inline ImageU8 decode_pnm(const std::vector<std::uint8_t>& bytes) {
  std::size_t pos = 0;
  auto next_token = [&]() -> std::string {
    while (pos < bytes.size()) {
      char ch = static_cast<char>(bytes[pos]);
      if (ch == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') {
        ++pos;
      } else {
        break;
      }
    }
    std::size_t start = pos;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) ++pos;
    return std::string(bytes.begin() + start, bytes.begin() + pos);
  };
  std::string magic = next_token();
  if (magic != "P6" && magic != "P5") throw std::runtime_error("pnm: bad magic");
  int w = std::stoi(next_token());
  int h = std::stoi(next_token());
  int maxval = std::stoi(next_token());
  if (maxval != 255) throw std::runtime_error("pnm: only maxval 255");
  ++pos;  // single whitespace after maxval
  int c = magic == "P6" ? 3 : 1;
  ImageU8 img(w, h, c);
  if (bytes.size() - pos < img.data.size())
    throw std::runtime_error("pnm: truncated");
  std::memcpy(img.data.data(), bytes.data() + pos, img.data.size());
  return img;
}

inline bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Writes PNG, PPM or PGM depending on the file extension.
inline void save_image(const std::string& path, const ImageU8& img) {
  if (ends_with(path, ".png"))
    write_bytes(path, encode_png(img));
  else if (ends_with(path, ".ppm") || ends_with(path, ".pgm"))
    write_bytes(path, encode_pnm(img));
  else
    throw std::runtime_error("unsupported image extension: " + path);
}

inline ImageU8 load_image(const std::string& path) {
  auto bytes = read_bytes(path);
  if (bytes.size() >= 2 && bytes[0] == 0x89 && bytes[1] == 'P')
    return decode_png(bytes);
  return decode_pnm(bytes);
}

}  // namespace avgrade
