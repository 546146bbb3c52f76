#pragma once

#include <optional>

namespace msdet {

/// Axis-aligned rectangle in continuous pixel coordinates, top-left origin.
/// The box covers the half-open region [x, x+w) x [y, y+h). Degenerate
/// (non-positive or non-finite) extents are rejected at construction; every
/// operation below can therefore assume valid inputs.
struct Box {
  double x;
  double y;
  double w;
  double h;

  Box(double x, double y, double w, double h);

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double center_x() const { return x + 0.5 * w; }
  double center_y() const { return y + 0.5 * h; }

  friend bool operator==(const Box&, const Box&) = default;
};

double area(const Box& b);

/// Intersection over union in [0, 1]; symmetric, 0 when disjoint.
double iou(const Box& a, const Box& b);

/// Smallest axis-aligned box containing both inputs.
Box union_box(const Box& a, const Box& b);

/// Moves every side outward by factor times the corresponding dimension:
/// (x - f*w, y - f*h, w*(1+2f), h*(1+2f)). Center-preserving. factor >= 0.
Box pad(const Box& b, double factor);

/// Intersection with the image rectangle [0,img_w] x [0,img_h];
/// std::nullopt when the box lies entirely outside.
std::optional<Box> clip(const Box& b, double img_w, double img_h);

/// True when inner lies within outer, with slack eps on every side.
bool contains(const Box& outer, const Box& inner, double eps = 0.0);

/// Point membership under the half-open convention.
bool contains_point(const Box& b, double px, double py);

}  // namespace msdet
