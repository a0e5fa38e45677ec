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

#ifndef PERCEPT_IMAGE_HPP_
#define PERCEPT_IMAGE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace percept {

enum class ImageFormat { Png, Jpeg, Gif, Bmp, PpmBinary, Unknown };

struct ImageInfo {
  ImageFormat format = ImageFormat::Unknown;
  int width = 0;
  int height = 0;
};

ImageFormat sniff_image_format(std::span<const std::uint8_t> bytes);

// Reads pixel dimensions from the container header without decoding pixel
// data. Throws UnknownImageFormat or CorruptImage.
ImageInfo probe_image(std::span<const std::uint8_t> bytes);

// MIME type for wire requests; "application/octet-stream" for Unknown.
const char* image_media_type(ImageFormat format);

// Proportional nearest-neighbour downscale so that max(width, height) ==
// max_dimension. Only binary PPM (P6, maxval <= 255) carries raw pixels we
// can resample without a decoder; other formats throw UnsupportedDownscale.
std::vector<std::uint8_t> downscale_to_fit(std::span<const std::uint8_t> bytes,
                                           int max_dimension);

}  // namespace percept

#endif  // PERCEPT_IMAGE_HPP_
