#include "qdarp/contour.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "qdarp/errors.hpp"

namespace qdarp {
namespace {

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw DomainError("contour level must lie strictly between 0 and 1, got " + std::to_string(level));
  }
}

// Edge ids: 2 * node + 0 joins node (i, j) to (i, j + 1); 2 * node + 1 joins
// (i, j) to (i + 1, j).
struct EdgeGeometry {
  const OccupationMap& map;
  double level;

  std::uint64_t area_edge(std::size_t i, std::size_t j) const { return 2 * (i * map.cols() + j); }
  std::uint64_t phi2_edge(std::size_t i, std::size_t j) const { return 2 * (i * map.cols() + j) + 1; }

  ContourPoint crossing(std::uint64_t edge) const {
    const std::size_t node = edge / 2;
    const std::size_t i = node / map.cols();
    const std::size_t j = node % map.cols();
    const bool along_area = edge % 2 == 0;
    const std::size_t i2 = along_area ? i : i + 1;
    const std::size_t j2 = along_area ? j + 1 : j;
    const double va = map.at(i, j);
    const double vb = map.at(i2, j2);
    const double t = (level - va) / (vb - va);
    const auto& x = map.grid.phi2_axis;
    const auto& y = map.grid.area_axis;
    return {x[i] + t * (x[i2] - x[i]), y[j] + t * (y[j2] - y[j])};
  }
};

double bilinear(const OccupationMap& map, double phi2, double area) {
  const auto& x = map.grid.phi2_axis;
  const auto& y = map.grid.area_axis;
  auto bracket = [](const std::vector<double>& axis, double v) {
    auto it = std::upper_bound(axis.begin(), axis.end(), v);
    std::size_t k = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
    return std::min(k, axis.size() - 2);
  };
  const std::size_t i = bracket(x, phi2);
  const std::size_t j = bracket(y, area);
  const double u = (phi2 - x[i]) / (x[i + 1] - x[i]);
  const double w = (area - y[j]) / (y[j + 1] - y[j]);
  const double v0 = map.at(i, j) + u * (map.at(i + 1, j) - map.at(i, j));
  const double v1 = map.at(i, j + 1) + u * (map.at(i + 1, j + 1) - map.at(i, j + 1));
  return v0 + w * (v1 - v0);
}

// Minimum of the bilinear surface over [phi2, max] x [area, max] compared
// with level. Inside each cell the surface is monotone along both axes, so
// the minimum sits on grid nodes, on grid-line crossings of the two
// rectangle edges, or on the corner itself.
bool plateau_holds(const OccupationMap& map, double level, double phi2, double area) {
  const auto& x = map.grid.phi2_axis;
  const auto& y = map.grid.area_axis;
  if (bilinear(map, phi2, area) < level) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < phi2) continue;
    if (bilinear(map, x[i], area) < level) return false;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] >= area && map.at(i, j) < level) return false;
    }
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (y[j] >= area && bilinear(map, phi2, y[j]) < level) return false;
  }
  return true;
}

}  // namespace

std::vector<Polyline> level_set(const OccupationMap& map, double level) {
  require_level(level);
  map.validate();
  const EdgeGeometry geo{map, level};
  auto inside = [&](std::size_t i, std::size_t j) { return map.at(i, j) >= level; };

  std::map<std::uint64_t, std::vector<std::uint64_t>> links;
  auto connect = [&](std::uint64_t a, std::uint64_t b) {
    links[a].push_back(b);
    links[b].push_back(a);
  };

  for (std::size_t i = 0; i + 1 < map.rows(); ++i) {
    for (std::size_t j = 0; j + 1 < map.cols(); ++j) {
      // Corners in cyclic order and the edge leaving each one.
      const std::array<bool, 4> in = {inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)};
      const std::array<std::uint64_t, 4> edge = {geo.phi2_edge(i, j), geo.area_edge(i + 1, j),
                                                 geo.phi2_edge(i, j + 1), geo.area_edge(i, j)};
      std::array<std::uint64_t, 4> crossed{};
      std::size_t n = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (in[k] != in[(k + 1) % 4]) crossed[n++] = edge[k];
      }
      if (n == 2) {
        connect(crossed[0], crossed[1]);
      } else if (n == 4) {
        const double centre = 0.25 * (map.at(i, j) + map.at(i + 1, j) + map.at(i + 1, j + 1) + map.at(i, j + 1));
        // Edge k-1 and edge k meet at corner k. Cut off the two corners that
        // the centre does not connect to.
        const std::size_t first = ((centre >= level) == in[0]) ? 1 : 0;
        connect(edge[(first + 3) % 4], edge[first]);
        connect(edge[(first + 1) % 4], edge[(first + 2) % 4]);
      }
    }
  }

  std::vector<Polyline> out;
  std::map<std::uint64_t, bool> used;
  auto walk = [&](std::uint64_t start) {
    Polyline line;
    std::uint64_t cur = start;
    used[cur] = true;
    line.push_back(geo.crossing(cur));
    for (;;) {
      const auto& nb = links[cur];
      std::uint64_t next = cur;
      for (auto cand : nb) {
        if (!used[cand]) {
          next = cand;
          break;
        }
      }
      if (next == cur) {
        // Closed loop: back at the start.
        if (line.size() > 2 && std::find(nb.begin(), nb.end(), start) != nb.end()) {
          line.push_back(line.front());
        }
        break;
      }
      used[next] = true;
      line.push_back(geo.crossing(next));
      cur = next;
    }
    out.push_back(std::move(line));
  };

  for (const auto& [edge, nb] : links) {
    if (nb.size() == 1 && !used[edge]) walk(edge);
  }
  for (const auto& [edge, nb] : links) {
    if (!used[edge]) walk(edge);
  }
  return out;
}

std::optional<Threshold> threshold_finder(const OccupationMap& map, double level) {
  require_level(level);
  map.validate();
  const auto& x = map.grid.phi2_axis;
  const auto& y = map.grid.area_axis;
  auto corner = [&](double s) {
    return Threshold{y.front() + s * (y.back() - y.front()), x.front() + s * (x.back() - x.front())};
  };
  auto holds = [&](double s) {
    const auto c = corner(s);
    return plateau_holds(map, level, c.phi2_ps2, c.area_pi);
  };

  if (!holds(1.0)) return std::nullopt;
  if (holds(0.0)) return Threshold{y.front(), x.front()};

  double lo = 0.0;  // fails
  double hi = 1.0;  // holds
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  return corner(hi);
}

}  // namespace qdarp
