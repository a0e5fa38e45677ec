// Copyright 2026 The Percept Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "percept/image.hpp"

#include <algorithm>
#include <cstring>

#include "percept/errors.hpp"

namespace percept {

namespace {

std::uint32_t be32(std::span<const std::uint8_t> b, std::size_t off) {
  return (std::uint32_t{b[off]} << 24) | (std::uint32_t{b[off + 1]} << 16) |
         (std::uint32_t{b[off + 2]} << 8) | std::uint32_t{b[off + 3]};
}

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t off) {
  return std::uint32_t{b[off]} | (std::uint32_t{b[off + 1]} << 8) |
         (std::uint32_t{b[off + 2]} << 16) | (std::uint32_t{b[off + 3]} << 24);
}

std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>((b[off] << 8) | b[off + 1]);
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

[[noreturn]] void corrupt(const char* what) {
  throw Error(ErrorCode::CorruptImage, what);
}

ImageInfo probe_png(std::span<const std::uint8_t> b) {
  if (b.size() < 24 || std::memcmp(b.data() + 12, "IHDR", 4) != 0) {
    corrupt("png: missing IHDR chunk");
  }
  const std::uint32_t w = be32(b, 16);
  const std::uint32_t h = be32(b, 20);
  if (w == 0 || h == 0) corrupt("png: zero dimension");
  return {ImageFormat::Png, static_cast<int>(w), static_cast<int>(h)};
}

ImageInfo probe_jpeg(std::span<const std::uint8_t> b) {
  std::size_t pos = 2;
  while (pos + 3 < b.size()) {
    if (b[pos] != 0xff) corrupt("jpeg: marker out of sync");
    std::uint8_t marker = b[pos + 1];
    while (marker == 0xff && pos + 2 < b.size()) {
      ++pos;
      marker = b[pos + 1];
    }
    // Standalone markers carry no length payload.
    if (marker == 0x01 || (marker >= 0xd0 && marker <= 0xd9)) {
      pos += 2;
      continue;
    }
    if (pos + 4 > b.size()) break;
    const std::size_t seg_len = be16(b, pos + 2);
    if (seg_len < 2) corrupt("jpeg: bad segment length");
    const bool is_sof = (marker >= 0xc0 && marker <= 0xcf) && marker != 0xc4 &&
                        marker != 0xc8 && marker != 0xcc;
    if (is_sof) {
      if (pos + 9 >= b.size()) corrupt("jpeg: truncated SOF");
      const int h = be16(b, pos + 5);
      const int w = be16(b, pos + 7);
      if (w == 0 || h == 0) corrupt("jpeg: zero dimension");
      return {ImageFormat::Jpeg, w, h};
    }
    pos += 2 + seg_len;
  }
  corrupt("jpeg: no SOF marker found");
}

ImageInfo probe_gif(std::span<const std::uint8_t> b) {
  if (b.size() < 10) corrupt("gif: truncated header");
  const int w = le16(b, 6);
  const int h = le16(b, 8);
  if (w == 0 || h == 0) corrupt("gif: zero dimension");
  return {ImageFormat::Gif, w, h};
}

ImageInfo probe_bmp(std::span<const std::uint8_t> b) {
  if (b.size() < 26) corrupt("bmp: truncated header");
  const int w = static_cast<std::int32_t>(le32(b, 18));
  // Height may be negative for top-down bitmaps.
  const int h = std::abs(static_cast<std::int32_t>(le32(b, 22)));
  if (w <= 0 || h == 0) corrupt("bmp: bad dimensions");
  return {ImageFormat::Bmp, w, h};
}

struct PpmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t pixel_offset = 0;
};

// "P6" followed by whitespace-separated width, height, maxval;
// '#' starts a comment running to end of line.
PpmHeader parse_ppm_header(std::span<const std::uint8_t> b) {
  std::size_t pos = 2;
  int fields[3];
  for (int& field : fields) {
    while (pos < b.size()) {
      if (std::isspace(b[pos])) {
        ++pos;
      } else if (b[pos] == '#') {
        while (pos < b.size() && b[pos] != '\n') ++pos;
      } else {
        break;
      }
    }
    if (pos >= b.size() || !std::isdigit(b[pos])) corrupt("ppm: truncated header");
    long value = 0;
    while (pos < b.size() && std::isdigit(b[pos])) {
      value = value * 10 + (b[pos] - '0');
      if (value > 1'000'000'000) corrupt("ppm: header value overflow");
      ++pos;
    }
    field = static_cast<int>(value);
  }
  if (pos >= b.size() || !std::isspace(b[pos])) corrupt("ppm: missing pixel separator");
  ++pos;  // single whitespace byte before raster data
  if (fields[0] <= 0 || fields[1] <= 0 || fields[2] <= 0) corrupt("ppm: bad dimensions");
  return {fields[0], fields[1], fields[2], pos};
}

}  // namespace

ImageFormat sniff_image_format(std::span<const std::uint8_t> b) {
  if (b.size() >= 8 && std::memcmp(b.data(), "\x89PNG\r\n\x1a\n", 8) == 0) {
    return ImageFormat::Png;
  }
  if (b.size() >= 3 && b[0] == 0xff && b[1] == 0xd8 && b[2] == 0xff) {
    return ImageFormat::Jpeg;
  }
  if (b.size() >= 6 &&
      (std::memcmp(b.data(), "GIF87a", 6) == 0 || std::memcmp(b.data(), "GIF89a", 6) == 0)) {
    return ImageFormat::Gif;
  }
  if (b.size() >= 2 && b[0] == 'B' && b[1] == 'M') {
    return ImageFormat::Bmp;
  }
  if (b.size() >= 3 && b[0] == 'P' && b[1] == '6' && std::isspace(b[2])) {
    return ImageFormat::PpmBinary;
  }
  return ImageFormat::Unknown;
}

ImageInfo probe_image(std::span<const std::uint8_t> bytes) {
  switch (sniff_image_format(bytes)) {
    case ImageFormat::Png: return probe_png(bytes);
    case ImageFormat::Jpeg: return probe_jpeg(bytes);
    case ImageFormat::Gif: return probe_gif(bytes);
    case ImageFormat::Bmp: return probe_bmp(bytes);
    case ImageFormat::PpmBinary: {
      const PpmHeader hdr = parse_ppm_header(bytes);
      return {ImageFormat::PpmBinary, hdr.width, hdr.height};
    }
    case ImageFormat::Unknown: break;
  }
  throw Error(ErrorCode::UnknownImageFormat, "unrecognized image container");
}

const char* image_media_type(ImageFormat format) {
  switch (format) {
    case ImageFormat::Png: return "image/png";
    case ImageFormat::Jpeg: return "image/jpeg";
    case ImageFormat::Gif: return "image/gif";
    case ImageFormat::Bmp: return "image/bmp";
    case ImageFormat::PpmBinary: return "image/x-portable-pixmap";
    case ImageFormat::Unknown: break;
  }
  return "application/octet-stream";
}

std::vector<std::uint8_t> downscale_to_fit(std::span<const std::uint8_t> bytes,
                                           int max_dimension) {
  const ImageInfo info = probe_image(bytes);
  if (info.width <= max_dimension && info.height <= max_dimension) {
    return {bytes.begin(), bytes.end()};
  }
  if (info.format != ImageFormat::PpmBinary) {
    throw Error(ErrorCode::UnsupportedDownscale,
                std::string("cannot downscale ") + image_media_type(info.format) +
                    " without decoding; re-encode the item or disable downscaling");
  }
  const PpmHeader hdr = parse_ppm_header(bytes);
  if (hdr.maxval > 255) {
    throw Error(ErrorCode::UnsupportedDownscale, "ppm: 16-bit samples unsupported");
  }
  const std::size_t raster = static_cast<std::size_t>(hdr.width) * hdr.height * 3;
  if (bytes.size() < hdr.pixel_offset + raster) corrupt("ppm: truncated raster");

  const long max_side = std::max(hdr.width, hdr.height);
  const int new_w = std::max<int>(1, static_cast<int>(
      static_cast<long>(hdr.width) * max_dimension / max_side));
  const int new_h = std::max<int>(1, static_cast<int>(
      static_cast<long>(hdr.height) * max_dimension / max_side));

  std::string header = "P6\n" + std::to_string(new_w) + " " + std::to_string(new_h) +
                       "\n" + std::to_string(hdr.maxval) + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + static_cast<std::size_t>(new_w) * new_h * 3);
  const std::uint8_t* src = bytes.data() + hdr.pixel_offset;
  for (int y = 0; y < new_h; ++y) {
    const long sy = static_cast<long>(y) * hdr.height / new_h;
    for (int x = 0; x < new_w; ++x) {
      const long sx = static_cast<long>(x) * hdr.width / new_w;
      const std::uint8_t* px = src + (sy * hdr.width + sx) * 3;
      out.insert(out.end(), px, px + 3);
    }
  }
  return out;
}

}  // namespace percept
