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

#include "navsim/memory.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include <nlohmann/json.hpp>
#include <png.h>

#include "navsim/error.h"

namespace navsim {
namespace {

constexpr double kMetersPerDegree = kEarthRadiusMeters * std::numbers::pi / 180.0;

double WrapLongitudeDelta(double dlon) {
  while (dlon >= 180.0) dlon -= 360.0;
  while (dlon < -180.0) dlon += 360.0;
  return dlon;
}

void PngWrite(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::string*>(png_get_io_ptr(png));
  out->append(reinterpret_cast<const char*>(data), length);
}

void PngFlush(png_structp) {}

}  // namespace

std::vector<Pixel> RasterLine(const Pixel& a, const Pixel& b) {
  std::vector<Pixel> out;
  int x = a.x;
  int y = a.y;
  const int dx = std::abs(b.x - a.x);
  const int dy = -std::abs(b.y - a.y);
  const int sx = a.x < b.x ? 1 : -1;
  const int sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  out.reserve(static_cast<size_t>(std::max(dx, -dy)) + 1);
  while (true) {
    out.push_back({x, y});
    if (x == b.x && y == b.y) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y += sy;
    }
  }
  return out;
}

MemoryImage MemoryImage::Init(const GeoPoint& start) {
  if (!std::isfinite(start.lat) || !std::isfinite(start.lon)) {
    throw NavError(ErrorCode::kInvalidArgument, "memory start point is not finite");
  }
  return Render({start}, 0);
}

MemoryImage MemoryImage::Render(std::vector<GeoPoint> trace, int rescale_level) {
  if (trace.empty()) {
    throw NavError(ErrorCode::kInvalidArgument, "memory trace must be non-empty");
  }
  MemoryImage m;
  m.trace_ = std::move(trace);
  m.rescale_level_ = rescale_level;
  m.scale_ = kInitialScale * std::pow(kRescaleFactor, rescale_level);
  m.current_ = m.ToPixel(m.trace_.back());
  m.RedrawAll();
  return m;
}

Pixel MemoryImage::ToPixel(const GeoPoint& p) const {
  const GeoPoint& o = trace_.front();
  const double east = WrapLongitudeDelta(p.lon - o.lon) *
                      std::cos(o.lat * std::numbers::pi / 180.0) * kMetersPerDegree;
  const double north = (p.lat - o.lat) * kMetersPerDegree;
  const double fx = std::floor(kWidth / 2 + east / scale_ + 0.5);
  const double fy = std::floor(kHeight / 2 - north / scale_ + 0.5);
  constexpr double kLimit = 1e9;
  return {static_cast<int>(std::clamp(fx, -kLimit, kLimit)),
          static_cast<int>(std::clamp(fy, -kLimit, kLimit))};
}

bool MemoryImage::WithinMargin(const Pixel& p) const {
  return p.x >= kMargin && p.x <= kWidth - kMargin && p.y >= kMargin &&
         p.y <= kHeight - kMargin;
}

bool MemoryImage::InStartMarker(int x, int y) const {
  const Pixel s = start_pixel();
  return std::abs(x - s.x) <= kStartHalfSize && std::abs(y - s.y) <= kStartHalfSize;
}

bool MemoryImage::InCurrentMarker(int x, int y) const {
  const int dx = x - current_.x;
  const int dy = y - current_.y;
  return dx * dx + dy * dy <= kCurrentRadius * kCurrentRadius;
}

void MemoryImage::ComposeAt(int x, int y) {
  if (x < 0 || y < 0 || x >= kWidth || y >= kHeight) return;
  PixelClass cls = PixelClass::kBackground;
  if (InCurrentMarker(x, y)) {
    cls = PixelClass::kCurrentMarker;
  } else if (InStartMarker(x, y)) {
    cls = PixelClass::kStartMarker;
  } else if (path_at(x, y)) {
    cls = PixelClass::kPath;
  }
  raster_[static_cast<size_t>(y) * kWidth + x] = static_cast<std::uint8_t>(cls);
}

void MemoryImage::ComposeRect(int x0, int y0, int x1, int y1) {
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) ComposeAt(x, y);
  }
}

void MemoryImage::SetPath(int x, int y, bool compose) {
  if (x < 0 || y < 0 || x >= kWidth || y >= kHeight) return;
  const int idx = y * kWidth + x;
  if (!path_[idx]) {
    path_[idx] = 1;
    path_pixels_.push_back(idx);
  }
  if (compose) ComposeAt(x, y);
}

void MemoryImage::DrawSegment(const Pixel& a, const Pixel& b, bool compose) {
  for (const Pixel& p : RasterLine(a, b)) SetPath(p.x, p.y, compose);
}

void MemoryImage::RedrawAll() {
  path_.assign(static_cast<size_t>(kWidth) * kHeight, 0);
  raster_.assign(static_cast<size_t>(kWidth) * kHeight, 0);
  path_pixels_.clear();
  Pixel prev = ToPixel(trace_.front());
  for (size_t i = 1; i < trace_.size(); ++i) {
    const Pixel next = ToPixel(trace_[i]);
    DrawSegment(prev, next, false);
    prev = next;
  }
  ComposeRect(0, 0, kWidth - 1, kHeight - 1);
}

void MemoryImage::Append(const GeoPoint& p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon)) {
    throw NavError(ErrorCode::kInvalidArgument, "memory point is not finite");
  }
  trace_.push_back(p);
  Pixel next = ToPixel(p);
  if (!WithinMargin(next)) {
    while (!WithinMargin(next)) {
      ++rescale_level_;
      scale_ = kInitialScale * std::pow(kRescaleFactor, rescale_level_);
      next = ToPixel(p);
    }
    current_ = next;
    RedrawAll();
    return;
  }
  const Pixel prev = current_;
  current_ = next;
  DrawSegment(prev, next, true);
  constexpr int r = kCurrentRadius;
  ComposeRect(prev.x - r, prev.y - r, prev.x + r, prev.y + r);
  ComposeRect(next.x - r, next.y - r, next.x + r, next.y + r);
}

std::vector<double> BlockOccupancyFeaturizer::Featurize(const MemoryImage& memory) const {
  constexpr int kBlockW = MemoryImage::kWidth / kBlocks;
  constexpr int kBlockH = MemoryImage::kHeight / kBlocks;
  std::vector<double> feature(kBlocks * kBlocks + 1, 0.0);
  double total = 0.0;
  auto count = [&](int x, int y) {
    feature[static_cast<size_t>(y / kBlockH) * kBlocks + x / kBlockW] += 1.0;
    total += 1.0;
  };
  for (int idx : memory.path_pixels()) {
    const int x = idx % MemoryImage::kWidth;
    const int y = idx / MemoryImage::kWidth;
    if (!memory.InStartMarker(x, y) && !memory.InCurrentMarker(x, y)) count(x, y);
  }
  const Pixel s = memory.start_pixel();
  constexpr int h = MemoryImage::kStartHalfSize;
  for (int y = s.y - h; y <= s.y + h; ++y) {
    for (int x = s.x - h; x <= s.x + h; ++x) {
      if (!memory.InCurrentMarker(x, y)) count(x, y);
    }
  }
  const Pixel c = memory.current_pixel();
  constexpr int r = MemoryImage::kCurrentRadius;
  for (int y = c.y - r; y <= c.y + r; ++y) {
    for (int x = c.x - r; x <= c.x + r; ++x) {
      if (x >= 0 && y >= 0 && x < MemoryImage::kWidth && y < MemoryImage::kHeight &&
          memory.InCurrentMarker(x, y)) {
        count(x, y);
      }
    }
  }
  for (int i = 0; i < kBlocks * kBlocks; ++i) feature[i] /= total;
  feature.back() = memory.scale() / MemoryImage::kInitialScale;
  return feature;
}

std::string EncodePng(const MemoryImage& memory) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw NavError(ErrorCode::kFailedPrecondition, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw NavError(ErrorCode::kFailedPrecondition, "libpng init failed");
  }
  std::string out;
  std::vector<png_byte> row(static_cast<size_t>(MemoryImage::kWidth) * 3);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw NavError(ErrorCode::kFailedPrecondition, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, PngWrite, PngFlush);
  png_set_IHDR(png, info, MemoryImage::kWidth, MemoryImage::kHeight, 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < MemoryImage::kHeight; ++y) {
    for (int x = 0; x < MemoryImage::kWidth; ++x) {
      png_byte* px = &row[static_cast<size_t>(x) * 3];
      switch (memory.at(x, y)) {
        case PixelClass::kBackground:
          px[0] = 255, px[1] = 255, px[2] = 255;
          break;
        case PixelClass::kPath:
          px[0] = 255, px[1] = 0, px[2] = 0;
          break;
        case PixelClass::kStartMarker:
        case PixelClass::kCurrentMarker:
          px[0] = 0, px[1] = 0, px[2] = 255;
          break;
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void ExportMemory(const MemoryImage& memory, const std::filesystem::path& png_path) {
  WriteFile(png_path, EncodePng(memory));
  std::filesystem::path sidecar = png_path;
  sidecar.replace_extension(".json");
  const nlohmann::json doc = {{"scale_m_per_px", memory.scale()}};
  WriteFile(sidecar, doc.dump() + "\n");
}

}  // namespace navsim
