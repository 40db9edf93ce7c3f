#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "restriction_lab/errors.hpp"
#include "restriction_lab/sphere.hpp"
#include "test_util.hpp"

using namespace rlab;
using testutil::random_point;

namespace {

double integrate(const QuadratureRule& r, const std::function<double(const Vec3&)>& f) {
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * f(r.nodes[i]);
  return s;
}

}  // namespace

TEST_CASE("quadrature (16, 33) integrates the examples") {
  const QuadratureRule r = make_quadrature(16, 33);
  CHECK(integrate(r, [](const Vec3&) { return 1.0; }) == doctest::Approx(4 * kPi).epsilon(1e-12));
  CHECK(std::abs(integrate(r, [](const Vec3& p) { return real_sh(2, 1, p) * real_sh(3, 1, p); })) < 1e-10);
  CHECK(std::abs(integrate(r, [](const Vec3& p) { return p.z * p.z; }) - 4 * kPi / 3) < 1e-10);
  CHECK(r.exactness_degree >= std::min(2 * 16 - 1, 33 - 1));
  for (double w : r.weights) CHECK(w > 0);
}

TEST_CASE("quadrature exactness on squared harmonics up to half the degree") {
  const QuadratureRule r = make_quadrature(12, 25);
  const int half = r.exactness_degree / 2;
  for (int l = 0; l <= half; ++l)
    for (int m = -l; m <= l; ++m) {
      const double v = integrate(r, [&](const Vec3& p) { return real_sh(l, m, p) * real_sh(l, m, p); });
      CHECK(std::abs(v - 1) < 1e-10);
    }
}

TEST_CASE("quadrature rejects bad sizes") {
  CHECK_THROWS_AS(make_quadrature(1, 33), ParameterError);
  CHECK_THROWS_AS(make_quadrature(16, 3), ParameterError);
}

TEST_CASE("legendre polynomials") {
  CHECK(legendre_p(0, 0.3) == 1.0);
  CHECK(legendre_p(5, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(legendre_p(2, 0.5) == doctest::Approx(-0.125).epsilon(1e-15));
  // Closed form of P₃ as an independent oracle.
  for (double t : {-0.9, -0.2, 0.4, 0.77})
    CHECK(legendre_p(3, t) == doctest::Approx(0.5 * (5 * t * t * t - 3 * t)).epsilon(1e-14));
  CHECK_THROWS_AS(legendre_p(2, 1.5), ParameterError);
  std::mt19937_64 g(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const double t = u(g);
    for (int k = 0; k <= 20; ++k) CHECK(std::abs(legendre_p(k, t)) <= 1 + 1e-14);
  }
}

TEST_CASE("real harmonics follow the explicit low-degree formulas") {
  std::mt19937_64 g(3);
  for (int i = 0; i < 20; ++i) {
    const Vec3 p = random_point(g);
    CHECK(real_sh(0, 0, p) == doctest::Approx(0.5 / std::sqrt(kPi)));
    CHECK(real_sh(1, 0, p) == doctest::Approx(std::sqrt(3 / (4 * kPi)) * p.z));
    CHECK(real_sh(1, 1, p) == doctest::Approx(std::sqrt(3 / (4 * kPi)) * p.x));
    CHECK(real_sh(1, -1, p) == doctest::Approx(std::sqrt(3 / (4 * kPi)) * p.y));
    CHECK(real_sh(2, 0, p) == doctest::Approx(0.25 * std::sqrt(5 / kPi) * (3 * p.z * p.z - 1)));
    CHECK(real_sh(2, 1, p) == doctest::Approx(0.5 * std::sqrt(15 / kPi) * p.x * p.z));
    CHECK(real_sh(2, -2, p) == doctest::Approx(0.5 * std::sqrt(15 / kPi) * p.x * p.y));
  }
}

TEST_CASE("sh_analyze examples") {
  const QuadratureRule r = make_quadrature(16, 33);
  const Coefficients one = sh_analyze([](const Vec3&) { return 1.0; }, 6, r);
  CHECK(one.at(0, 0) == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-12));
  for (int l = 1; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) CHECK(std::abs(one.at(l, m)) < 1e-10);

  const Coefficients y21 = sh_analyze(SphereFunction::harmonic(2, 1), 6, r);
  for (int l = 0; l <= 6; ++l)
    for (int m = -l; m <= l; ++m) CHECK(std::abs(y21.at(l, m) - (l == 2 && m == 1 ? 1 : 0)) < 1e-10);

  const Coefficients z2 = sh_analyze([](const Vec3& p) { return p.z * p.z; }, 6, r);
  CHECK(std::abs(z2.at(0, 0) - std::sqrt(4 * kPi) / 3) < 1e-10);
  CHECK(std::abs(z2.at(2, 0) - (4.0 / 3) * std::sqrt(kPi / 5)) < 1e-10);
  double rest = 0;
  for (int l = 1; l <= 6; ++l)
    for (int m = -l; m <= l; ++m)
      if (!(l == 2 && m == 0)) rest = std::max(rest, std::abs(z2.at(l, m)));
  CHECK(rest < 1e-10);

  CHECK_THROWS_AS(sh_analyze([](const Vec3&) { return 1.0; }, 20, r), ParameterError);
}

TEST_CASE("sh_synthesize examples and round trip") {
  Coefficients c(0);
  c.at(0, 0) = std::sqrt(4 * kPi);
  CHECK(sh_synthesize(c, Vec3{0.6, 0, 0.8}) == doctest::Approx(1.0).epsilon(1e-14));
  Coefficients y10(1);
  y10.at(1, 0) = 1;
  CHECK(sh_synthesize(y10, Vec3{0, 0, 1}) == doctest::Approx(std::sqrt(3 / (4 * kPi))));

  std::mt19937_64 g(11);
  const Coefficients f = testutil::random_coefficients(8, g);
  const QuadratureRule r = make_quadrature(10, 20);
  const Coefficients back = sh_analyze([&](const Vec3& p) { return sh_synthesize(f, p); }, 8, r);
  double worst = 0;
  for (std::size_t i = 0; i < f.c.size(); ++i) worst = std::max(worst, std::abs(back.c[i] - f.c[i]));
  CHECK(worst < 1e-10);
  for (int i = 0; i < 50; ++i) {
    const Vec3 p = random_point(g);
    CHECK(std::abs(sh_synthesize(back, p) - sh_synthesize(f, p)) < 1e-10);
  }
}

TEST_CASE("coefficient norm is the sum of squares") {
  std::mt19937_64 g(5);
  const Coefficients c = testutil::random_coefficients(5, g);
  double s = 0;
  for (double v : c.c) s += v * v;
  CHECK(c.norm_sq() == doctest::Approx(s).epsilon(1e-14));
  const QuadratureRule r = make_quadrature(8, 16);
  CHECK(SphereFunction::from_coefficients(c).l2_norm_sq() ==
        doctest::Approx(integrate(r, [&](const Vec3& p) { return std::pow(sh_synthesize(c, p), 2); })).epsilon(1e-12));
}

TEST_CASE("grid samples return stored node values") {
  const auto r = shared_quadrature(8, 16);
  std::vector<double> v(r->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * static_cast<double>(i));
  const SphereFunction f = SphereFunction::from_samples(r, v);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(f.value(r->nodes[i]) == v[i]);
}

TEST_CASE("unit vectors are normalized") {
  const UnitVector3 u(3, 4, 12);
  CHECK(std::abs(u.vec().norm() - 1) < 1e-12);
  CHECK(u.x() == doctest::Approx(3.0 / 13));
}

TEST_CASE("cap membership and area") {
  const Cap c(UnitVector3(0, 0, 1), 0.5);
  CHECK(c.contains(Vec3{0, 0, 1}));
  CHECK_FALSE(c.contains(Vec3{0, 0, -1}));  // other hemisphere
  CHECK(c.contains(Vec3{0.49, 0, std::sqrt(1 - 0.49 * 0.49)}));
  CHECK_FALSE(c.contains(Vec3{0.51, 0, std::sqrt(1 - 0.51 * 0.51)}));
  CHECK_FALSE(c.contains(Vec3{0.3, 0, -std::sqrt(1 - 0.09)}));
  CHECK(c.area() == doctest::Approx(2 * kPi * (1 - std::sqrt(0.75))));
  // Area against the indicator integral; a tilted cap so that the boundary
  // does not line up with the rings.
  const Cap tilted(UnitVector3(0.6, 0.1, 0.8), 0.5);
  const QuadratureRule r = make_quadrature(400, 800);
  const double a = integrate(r, [&](const Vec3& p) { return tilted.contains(p) ? 1.0 : 0.0; });
  CHECK(std::abs(a - tilted.area()) / tilted.area() < 2e-3);
  CHECK_THROWS_AS(Cap(UnitVector3(), 0.0), ParameterError);
  CHECK_THROWS_AS(Cap(UnitVector3(), 1.5), ParameterError);
}

namespace {

// ρ from the embedding C(y, r) ↦ (y/r, log(1/r)) in ℝ⁴.
double rho_oracle(const Vec3& y, double r, const Vec3& y2, double r2) {
  const Vec3 d = y * (1 / r) - y2 * (1 / r2);
  const double l = std::log(1 / r) - std::log(1 / r2);
  return std::sqrt(d.dot(d) + l * l);
}

Cap random_cap(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  return Cap(UnitVector3(random_point(g)), u(g));
}

}  // namespace

TEST_CASE("cap quotient distance examples") {
  const UnitVector3 z(0.3, -0.2, 0.9);
  CHECK(cap_quotient_distance(Cap(z, 0.2), Cap(z.antipode(), 0.2)) == doctest::Approx(0.0));
  // Concentric caps: the embedding gives √((1/r − 1/r′)² + log²(r/r′)),
  // whose log part alone is |log(r/r′)|.
  const double conc = cap_quotient_distance(Cap(z, 0.2), Cap(z, 0.05));
  CHECK(conc == doctest::Approx(std::hypot(1 / 0.2 - 1 / 0.05, std::log(4.0))));
  CHECK(conc >= std::log(4.0));
  const UnitVector3 z2(0.32, -0.2, 0.9);
  CHECK(cap_quotient_distance(Cap(z, 0.1), Cap(z2, 0.1)) ==
        doctest::Approx((z.vec() - z2.vec()).norm() / 0.1).epsilon(1e-12));
  std::mt19937_64 g(17);
  for (int i = 0; i < 100; ++i) {
    const Cap a = random_cap(g), b = random_cap(g);
    const double want =
        std::min(rho_oracle(a.center().vec(), a.radius(), b.center().vec(), b.radius()),
                 rho_oracle(-a.center().vec(), a.radius(), b.center().vec(), b.radius()));
    CHECK(cap_quotient_distance(a, b) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("cap quotient distance is a metric on random triples") {
  std::mt19937_64 g(2024);
  for (int i = 0; i < 1000; ++i) {
    const Cap a = random_cap(g), b = random_cap(g), c = random_cap(g);
    const double ab = cap_quotient_distance(a, b), ba = cap_quotient_distance(b, a);
    const double bc = cap_quotient_distance(b, c), ac = cap_quotient_distance(a, c);
    CHECK(ab >= 0);
    CHECK(std::abs(ab - ba) < 1e-12 * (1 + ab));
    CHECK(ac <= ab + bc + 1e-12 * (1 + ac));
    CHECK(cap_quotient_distance(a, a) == 0.0);
  }
}

TEST_CASE("maximal cap families") {
  const QuadratureRule g0 = candidate_grid_for_level(0);
  const CapFamily f0 = maximal_cap_centers(0, g0);
  // Measured with the greedy order; the packing allows more than eight.
  CHECK(f0.centers.size() == 9);
  for (std::size_t i = 0; i < f0.centers.size(); ++i)
    for (std::size_t j = i + 1; j < f0.centers.size(); ++j)
      CHECK((f0.centers[i].vec() - f0.centers[j].vec()).norm() >= 1.0);
  for (const Vec3& p : g0.nodes) {
    double d = 1e9;
    for (const auto& c : f0.centers) d = std::min(d, (c.vec() - p).norm());
    CHECK(d < 1.0);
  }

  const QuadratureRule g3 = candidate_grid_for_level(3);
  const CapFamily f3 = maximal_cap_centers(3, g3);
  const CapFamily again = maximal_cap_centers(3, g3);
  REQUIRE(again.centers.size() == f3.centers.size());
  for (std::size_t i = 0; i < f3.centers.size(); ++i) CHECK(again.centers[i].vec().x == f3.centers[i].vec().x);
  int worst = 0;
  double min_sep = 1e9, max_gap = 0;
  for (std::size_t i = 0; i < f3.centers.size(); ++i)
    for (std::size_t j = i + 1; j < f3.centers.size(); ++j)
      min_sep = std::min(min_sep, (f3.centers[i].vec() - f3.centers[j].vec()).norm());
  for (const Vec3& p : g3.nodes) {
    int count = 0;
    double d = 1e9;
    for (std::size_t j = 0; j < f3.centers.size(); ++j) {
      if (f3.cap(j).contains(p)) ++count;
      d = std::min(d, (f3.centers[j].vec() - p).norm());
    }
    worst = std::max(worst, count);
    max_gap = std::max(max_gap, d);
  }
  CHECK(min_sep >= 0.125);
  CHECK(max_gap < 0.125);
  CHECK(worst <= 16);
  CHECK(worst == 13);  // golden for the greedy order

  CHECK_THROWS_AS(maximal_cap_centers(4, g0), ParameterError);
}

TEST_CASE("cap pullback") {
  const Cap c(UnitVector3(0, 0, 1), 0.1);
  const DiskFunction one = cap_pullback(c, SphereFunction::constant(1.0));
  CHECK(one(0.3, -0.4) == doctest::Approx(0.1));
  const SphereFunction x3 = SphereFunction::analytic([](const Vec3& p) { return p.z; });
  CHECK(cap_pullback(c, x3)(0, 0) == doctest::Approx(0.1));
  CHECK_THROWS_AS(cap_pullback(Cap(UnitVector3(), 0.6), x3), ParameterError);

  // Norm ratio for a bump inside C(z, 0.05), z off the pole: the plane
  // integral in polar coordinates against the sphere integral in the
  // cap's own polar coordinates.
  const double r = 0.05;
  const UnitVector3 z(0.2, 0.5, -0.7);
  const Cap cz(z, r);
  const Rotation rot = Rotation::to_north(z.vec());
  auto bump_of = [&](const Vec3& p) {
    const Vec3 q = rot.apply(p);
    if (q.z <= 0) return 0.0;
    const double s2 = (q.x * q.x + q.y * q.y) / (r * r);
    return s2 < 1 ? std::pow(1 - s2, 2) * (1 + 0.5 * q.x / r) : 0.0;
  };
  const SphereFunction f = SphereFunction::analytic(bump_of);
  const DiskFunction pf = cap_pullback(cz, f);
  const GaussLegendre gl = gauss_legendre(64, 0, 1);
  double plane = 0, sphere = 0;
  const int na = 128;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < na; ++j) {
      const double a = 2 * kPi * j / na, s = gl.x[i];
      const double v = pf(s * std::cos(a), s * std::sin(a));
      plane += gl.w[i] * s * (2 * kPi / na) * v * v;
      // Sphere: q = (r s cos a, r s sin a, √(1 − r²s²)), dσ = r² s ds da / √(1 − r²s²).
      const Vec3 q{r * s * std::cos(a), r * s * std::sin(a), std::sqrt(1 - r * r * s * s)};
      const double fv = f.value(rot.apply_inverse(q));
      sphere += gl.w[i] * (2 * kPi / na) * fv * fv * r * r * s / std::sqrt(1 - r * r * s * s);
    }
  const double ratio = std::sqrt(plane / sphere);
  CHECK(ratio >= 0.99);
  CHECK(ratio <= 1.01);
}

TEST_CASE("rotation to the north pole") {
  std::mt19937_64 g(8);
  for (int i = 0; i < 20; ++i) {
    const Vec3 z = random_point(g);
    const Vec3 n = Rotation::to_north(z).apply(z);
    CHECK(std::abs(n.z - 1) < 1e-12);
  }
  const Vec3 s = Rotation::to_north(Vec3{0, 0, -1}).apply(Vec3{0, 0, -1});
  CHECK(std::abs(s.z - 1) < 1e-12);
}
