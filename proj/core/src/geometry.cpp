#include "msdet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "msdet/errors.hpp"
#include "msdet/io_util.hpp"

namespace msdet {

Box::Box(double x, double y, double w, double h) : x(x), y(y), w(w), h(h) {
  if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h)))
    throw InputError("box fields must be finite");
  if (!(w > 0.0 && h > 0.0))
    throw InputError("box extents must be positive, got w=" + format_double(w) +
                     " h=" + format_double(h));
}

double area(const Box& b) { return b.w * b.h; }

double iou(const Box& a, const Box& b) {
  if (a == b) return 1.0;  // exact, independent of round-off
  const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  return std::min(inter / (area(a) + area(b) - inter), 1.0);
}

namespace {

// Smallest extent such that origin + extent reaches target despite rounding;
// keeps union_box(a, b) containing both inputs exactly.
double covering_extent(double origin, double target) {
  double extent = target - origin;
  while (origin + extent < target)
    extent = std::nextafter(extent, std::numeric_limits<double>::infinity());
  return extent;
}

}  // namespace

Box union_box(const Box& a, const Box& b) {
  const double x0 = std::min(a.x, b.x);
  const double y0 = std::min(a.y, b.y);
  const double x1 = std::max(a.right(), b.right());
  const double y1 = std::max(a.bottom(), b.bottom());
  return Box(x0, y0, covering_extent(x0, x1), covering_extent(y0, y1));
}

Box pad(const Box& b, double factor) {
  if (!(factor >= 0.0)) throw InputError("pad factor must be >= 0");
  return Box(b.x - factor * b.w, b.y - factor * b.h,
             b.w * (1.0 + 2.0 * factor), b.h * (1.0 + 2.0 * factor));
}

std::optional<Box> clip(const Box& b, double img_w, double img_h) {
  if (!(img_w > 0.0 && img_h > 0.0)) throw InputError("image dimensions must be positive");
  const double x0 = std::max(b.x, 0.0);
  const double y0 = std::max(b.y, 0.0);
  const double x1 = std::min(b.right(), img_w);
  const double y1 = std::min(b.bottom(), img_h);
  if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) return std::nullopt;
  return Box(x0, y0, x1 - x0, y1 - y0);
}

bool contains(const Box& outer, const Box& inner, double eps) {
  return inner.x >= outer.x - eps && inner.y >= outer.y - eps &&
         inner.right() <= outer.right() + eps && inner.bottom() <= outer.bottom() + eps;
}

bool contains_point(const Box& b, double px, double py) {
  return px >= b.x && px < b.right() && py >= b.y && py < b.bottom();
}

}  // namespace msdet
