#include "rgapoly/contour.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <set>
#include <utility>

namespace rgapoly {

namespace {

// Moore neighbourhood, clockwise on screen (y down), starting west.
constexpr std::array<int, 8> kDx = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr std::array<int, 8> kDy = {0, -1, -1, -1, 0, 1, 1, 1};

int direction_index(int dx, int dy) {
  for (int i = 0; i < 8; ++i)
    if (kDx[static_cast<std::size_t>(i)] == dx && kDy[static_cast<std::size_t>(i)] == dy) return i;
  return -1;
}

}  // namespace

Contour trace_contour(const ComponentMask& component) {
  if (component.pixel_count == 0)
    throw Error(ErrorCode::DegenerateComponent, "empty component");

  int sx = -1, sy = -1;
  for (int y = component.bbox.y0; y <= component.bbox.y1 && sx < 0; ++y)
    for (int x = component.bbox.x0; x <= component.bbox.x1; ++x)
      if (component.contains(x, y)) {
        sx = x;
        sy = y;
        break;
      }

  std::vector<std::pair<int, int>> border{{sx, sy}};
  int px = sx, py = sy;
  int back = 0;  // entered the start pixel from the west, which is background
  const int start_back = back;
  const std::size_t limit = 8 * component.pixel_count + 16;

  for (std::size_t step = 0; step < limit; ++step) {
    int next = -1;
    for (int k = 1; k <= 8; ++k) {
      const int d = (back + k) % 8;
      if (component.contains(px + kDx[static_cast<std::size_t>(d)],
                             py + kDy[static_cast<std::size_t>(d)])) {
        next = d;
        break;
      }
    }
    if (next < 0) break;  // isolated pixel

    const int prev = (next + 7) % 8;
    const int nx = px + kDx[static_cast<std::size_t>(next)];
    const int ny = py + kDy[static_cast<std::size_t>(next)];
    const int bx = px + kDx[static_cast<std::size_t>(prev)];
    const int by = py + kDy[static_cast<std::size_t>(prev)];
    const int nback = direction_index(bx - nx, by - ny);

    if (nx == sx && ny == sy && nback == start_back) break;
    border.emplace_back(nx, ny);
    px = nx;
    py = ny;
    back = nback;
  }

  Contour contour;
  contour.points.reserve(border.size());
  for (const auto& [x, y] : border)
    contour.points.push_back({static_cast<double>(x), static_cast<double>(y)});

  const std::set<std::pair<int, int>> distinct(border.begin(), border.end());
  const double area = signed_area(contour.points);
  if (distinct.size() < 3 || area == 0.0)
    throw Error(ErrorCode::DegenerateComponent,
                "component " + std::to_string(component.id) + " border encloses no area");
  if (area < 0.0) std::reverse(contour.points.begin(), contour.points.end());
  return contour;
}

Contour smooth_contour(const Contour& contour, int window) {
  if (window < 1 || window % 2 == 0)
    throw Error(ErrorCode::InvalidConfig,
                "smoothing window must be odd and positive, got " + std::to_string(window));
  const auto n = static_cast<std::ptrdiff_t>(contour.size());
  if (window == 1) return contour;
  if (n < window) {
    Contour out = contour;
    out.smoothing_skipped = true;
    return out;
  }

  const std::ptrdiff_t half = window / 2;
  Contour out;
  out.points.resize(contour.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Point2 sum;
    for (std::ptrdiff_t k = -half; k <= half; ++k) sum += contour.at(i + k);
    out.points[static_cast<std::size_t>(i)] = sum * (1.0 / window);
  }
  return out;
}

Contour remove_repeated_points(Contour contour) {
  auto& pts = contour.points;
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  while (pts.size() > 1 && pts.front() == pts.back()) pts.pop_back();
  return contour;
}

void write_contour_csv(const std::filesystem::path& path, const Contour& contour) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "index,x,y\n" << std::setprecision(10);
  for (std::size_t i = 0; i < contour.size(); ++i)
    out << i << "," << contour.points[i].x << "," << contour.points[i].y << "\n";
}

}  // namespace rgapoly
