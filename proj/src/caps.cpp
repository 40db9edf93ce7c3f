#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/sphere.hpp"

namespace rlab {

Cap::Cap(const UnitVector3& center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0 && radius <= 1)) throw ParameterError("cap radius must lie in (0, 1]");
}

bool Cap::contains(const Vec3& y) const {
  const double d = y.dot(center_.vec());
  if (!(d > 0)) return false;
  const Vec3 perp = y - center_.vec() * d;
  return perp.dot(perp) < radius_ * radius_;
}

double Cap::area() const {
  return 2 * kPi * (1 - std::sqrt(1 - radius_ * radius_));
}

namespace {

struct CapPoint {
  double v[4];
};

CapPoint cap_point(const Cap& c) {
  const Vec3& z = c.center().vec();
  const double r = c.radius();
  return {{z.x / r, z.y / r, z.z / r, std::log(1 / r)}};
}

double euclid4(const CapPoint& a, const CapPoint& b) {
  double s = 0;
  for (int i = 0; i < 4; ++i) s += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
  return std::sqrt(s);
}

}  // namespace

double cap_distance(const Cap& a, const Cap& b) { return euclid4(cap_point(a), cap_point(b)); }

double cap_quotient_distance(const Cap& a, const Cap& b) {
  return std::min(cap_distance(a, b), cap_distance(a.antipodal(), b));
}

double CapFamily::cap_radius() const { return std::min(1.0, std::ldexp(1.0, -level + 1)); }

QuadratureRule candidate_grid_for_level(int k) {
  if (k < 0) throw ParameterError("cap level must be >= 0");
  // Ring gaps and in-ring steps both stay below 2^{-k-1}; n_theta odd puts
  // the heaviest ring on the equator.
  int nt = static_cast<int>(std::ceil(1.25 * kPi * std::ldexp(1.0, k + 1))) + 2;
  if (nt % 2 == 0) ++nt;
  QuadratureRule q = make_quadrature(nt, 2 * nt + 1);
  while (q.spacing() >= std::ldexp(1.0, -k - 1)) {
    nt += 2;
    q = make_quadrature(nt, 2 * nt + 1);
  }
  return q;
}

CapFamily maximal_cap_centers(int k, const QuadratureRule& grid) {
  if (k < 0) throw ParameterError("cap level must be >= 0");
  const double sep = std::ldexp(1.0, -k);
  const double spacing = grid.spacing();
  if (!(spacing < 0.5 * sep))
    throw ParameterError("candidate grid spacing " + std::to_string(spacing) +
                         " is not below 2^{-k-1} for k = " + std::to_string(k));
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grid.weights[a] > grid.weights[b];
  });

  // Spatial hash with cell size = separation; a conflict can only come from
  // the 27 surrounding cells.
  auto cell = [&](double c) { return static_cast<long>(std::floor(c / sep)); };
  auto key = [](long a, long b, long c) {
    return (static_cast<unsigned long long>(a + 1048576) << 42) ^
           (static_cast<unsigned long long>(b + 1048576) << 21) ^
           static_cast<unsigned long long>(c + 1048576);
  };
  std::unordered_map<unsigned long long, std::vector<std::size_t>> hash;
  CapFamily fam;
  fam.level = k;
  fam.separation = sep;
  const double sep2 = sep * sep;
  for (std::size_t idx : order) {
    const Vec3& p = grid.nodes[idx];
    const long cx = cell(p.x), cy = cell(p.y), cz = cell(p.z);
    bool ok = true;
    for (long dx = -1; dx <= 1 && ok; ++dx)
      for (long dy = -1; dy <= 1 && ok; ++dy)
        for (long dz = -1; dz <= 1 && ok; ++dz) {
          auto it = hash.find(key(cx + dx, cy + dy, cz + dz));
          if (it == hash.end()) continue;
          for (std::size_t c : it->second) {
            const Vec3 d = fam.centers[c].vec() - p;
            if (d.dot(d) < sep2) {
              ok = false;
              break;
            }
          }
        }
    if (!ok) continue;
    hash[key(cx, cy, cz)].push_back(fam.centers.size());
    fam.centers.emplace_back(p);
  }
  return fam;
}

DiskFunction cap_pullback(const Cap& cap, const SphereFunction& f) {
  const double r = cap.radius();
  if (r > 0.5) throw ParameterError("cap_pullback requires r <= 1/2");
  const Rotation rot = Rotation::to_north(cap.center().vec());
  DiskFunction d;
  d.radius = std::min(1.0, 0.5 / r);
  d.f = [f, r, rot](double y1, double y2) {
    const double s2 = r * r * (y1 * y1 + y2 * y2);
    if (s2 >= 1) return 0.0;
    const Vec3 q{r * y1, r * y2, std::sqrt(1 - s2)};
    return r * f.value(rot.apply_inverse(q));
  };
  return d;
}

}  // namespace rlab
