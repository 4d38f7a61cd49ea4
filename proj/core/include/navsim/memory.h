// Copyright 2026 The Navsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NAVSIM_MEMORY_H_
#define NAVSIM_MEMORY_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "navsim/citygraph.h"

namespace navsim {

enum class PixelClass : std::uint8_t {
  kBackground = 0,
  kPath = 1,
  kStartMarker = 2,
  kCurrentMarker = 3,
};

struct Pixel {
  int x = 0;
  int y = 0;

  bool operator==(const Pixel&) const = default;
};

// Top-view raster of the path walked since the last landmark. The trace
// origin is pinned to the image centre; x grows east and y grows south.
// When a new point would land within kMargin pixels of the border the scale
// grows by kRescaleFactor until it fits, and the whole trace is redrawn.
class MemoryImage {
 public:
  static constexpr int kWidth = 200;
  static constexpr int kHeight = 200;
  static constexpr int kMargin = 10;
  static constexpr double kInitialScale = 5.0;  // meters per pixel
  static constexpr double kRescaleFactor = 1.25;
  static constexpr int kStartHalfSize = 2;      // 5x5 square
  static constexpr int kCurrentRadius = 3;      // disk

  static MemoryImage Init(const GeoPoint& start);

  // One-shot rendering of a full trace at `rescale_level` (scale =
  // kInitialScale * kRescaleFactor^level). Does not enforce the margin.
  static MemoryImage Render(std::vector<GeoPoint> trace, int rescale_level);

  // Throws kInvalidArgument for non-finite points.
  void Append(const GeoPoint& p);

  void ResetAtLandmark(const GeoPoint& current) { *this = Init(current); }

  double scale() const { return scale_; }
  int rescale_level() const { return rescale_level_; }
  const std::vector<GeoPoint>& trace() const { return trace_; }
  const GeoPoint& origin() const { return trace_.front(); }
  Pixel current_pixel() const { return current_; }
  Pixel start_pixel() const { return {kWidth / 2, kHeight / 2}; }

  PixelClass at(int x, int y) const {
    return static_cast<PixelClass>(raster_[static_cast<size_t>(y) * kWidth + x]);
  }
  const std::vector<std::uint8_t>& raster() const { return raster_; }
  bool path_at(int x, int y) const { return path_[static_cast<size_t>(y) * kWidth + x] != 0; }

  // Pixel of `p` at the current scale (may fall outside the image).
  Pixel ToPixel(const GeoPoint& p) const;

  // Unique path-layer pixel indices (y * kWidth + x).
  const std::vector<int>& path_pixels() const { return path_pixels_; }

  bool InStartMarker(int x, int y) const;
  bool InCurrentMarker(int x, int y) const;

  // True when `p` keeps kMargin pixels clear of every border.
  bool WithinMargin(const Pixel& p) const;

 private:
  MemoryImage() = default;

  void DrawSegment(const Pixel& a, const Pixel& b, bool compose);
  void SetPath(int x, int y, bool compose);
  void ComposeAt(int x, int y);
  void ComposeRect(int x0, int y0, int x1, int y1);
  void RedrawAll();

  std::vector<GeoPoint> trace_;
  double scale_ = kInitialScale;
  int rescale_level_ = 0;
  Pixel current_;
  std::vector<std::uint8_t> path_;
  std::vector<std::uint8_t> raster_;
  std::vector<int> path_pixels_;
};

// Integer line rasterization (Bresenham), endpoints included.
std::vector<Pixel> RasterLine(const Pixel& a, const Pixel& b);

class MemoryFeaturizer {
 public:
  virtual ~MemoryFeaturizer() = default;
  virtual std::vector<double> Featurize(const MemoryImage& memory) const = 0;
};

// 10x10 grid of 20x20-pixel blocks; each entry is the block's share of all
// non-background pixels. The final entry is scale / kInitialScale.
class BlockOccupancyFeaturizer : public MemoryFeaturizer {
 public:
  static constexpr int kBlocks = 10;
  std::vector<double> Featurize(const MemoryImage& memory) const override;
};

// PNG with a white background, red path and blue markers.
std::string EncodePng(const MemoryImage& memory);

// Writes `png_path` and a sidecar `<stem>.json` holding {"scale_m_per_px"}.
void ExportMemory(const MemoryImage& memory, const std::filesystem::path& png_path);

}  // namespace navsim

#endif  // NAVSIM_MEMORY_H_
