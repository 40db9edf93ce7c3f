#include <algorithm>

#include "restriction_lab/convolution.hpp"
#include "restriction_lab/errors.hpp"
#include "restriction_lab/parallel.hpp"

namespace rlab {

Coefficients triple_conv_coefficients(const Coefficients& f, int l_out) {
  if (l_out < 0) throw ParameterError("triple_conv_coefficients: negative output band limit");
  const int L = f.band_limit;
  const SphereFunction probe = SphereFunction::from_coefficients(f);
  const bool even = probe.even();
  BallGridSpec spec = BallGridSpec::exact_for(L, L, L, l_out);
  const BallGrid grid = BallGrid::build(spec, false, even);
  const int m = spec.n_circle;  // even by construction
  const int h = m / 2;
  const int lmax = std::max(L, l_out);
  const std::size_t ny = static_cast<std::size_t>(sh_count(lmax));
  const std::size_t nf = static_cast<std::size_t>(sh_count(L));
  const std::size_t nout = static_cast<std::size_t>(sh_count(l_out));

  std::vector<double> cos_t(m), sin_t(m);
  for (int j = 0; j < m; ++j) {
    if (j >= h) {
      cos_t[j] = -cos_t[j - h];
      sin_t[j] = -sin_t[j - h];
    } else {
      cos_t[j] = std::cos(2 * kPi * j / m);
      sin_t[j] = std::sin(2 * kPi * j / m);
    }
  }
  std::vector<double> refl(nf);
  for (int l = 0; l <= L; ++l)
    for (int mm = -l; mm <= l; ++mm)
      refl[static_cast<std::size_t>(sh_index(l, mm))] = (l % 2 ? -1.0 : 1.0) * f.at(l, mm);
  std::vector<char> active(nout, 1);
  if (even)
    for (int l = 1; l <= l_out; l += 2)
      for (int mm = -l; mm <= l; ++mm) active[static_cast<std::size_t>(sh_index(l, mm))] = 0;

  const std::size_t nd = grid.dirs.size();
  std::vector<std::vector<double>> partial(grid.t.size(), std::vector<double>(nout, 0.0));
  parallel_for(grid.t.size(), [&](std::size_t i) {
    std::vector<double> y(static_cast<std::size_t>(m) * ny), fv(m), fr(m), dl(nout);
    std::vector<double>& acc = partial[i];
    const double r = grid.t[i];
    const double s = std::sqrt(std::max(0.0, 1 - 0.25 * r * r));
    for (std::size_t d = 0; d < nd; ++d) {
      const Vec3& om = grid.dirs[d];
      Vec3 e1, e2;
      orthonormal_frame(om, e1, e2);
      for (int j = 0; j < m; ++j) {
        const Vec3 p = om * (0.5 * r) + (e1 * cos_t[j] + e2 * sin_t[j]) * s;
        double* yj = &y[static_cast<std::size_t>(j) * ny];
        real_sh_all(lmax, p, yj);
        double a = 0, b = 0;
        for (std::size_t k = 0; k < nf; ++k) {
          a += f.c[k] * yj[k];
          b += refl[k] * yj[k];
        }
        fv[j] = a;
        fr[j] = b;
      }
      // t·D_ff and t·D_{Y,f̃}, with x − y_j = y_{j+m/2}.
      double dff = 0;
      for (int j = 0; j < m; ++j) dff += fv[j] * fv[(j + h) % m];
      if (dff == 0.0) continue;
      std::fill(dl.begin(), dl.end(), 0.0);
      for (int j = 0; j < m; ++j) {
        const double w = fr[(j + h) % m];
        const double* yj = &y[static_cast<std::size_t>(j) * ny];
        for (std::size_t k = 0; k < nout; ++k) dl[k] += yj[k] * w;
      }
      const double dphi = 2 * kPi / m;
      const double wgt = grid.tw[i] * grid.dir_w[d] * dff * dphi * dphi;
      for (std::size_t k = 0; k < nout; ++k)
        if (active[k]) acc[k] += wgt * dl[k];
    }
  });
  Coefficients out(l_out);
  for (const auto& p : partial)
    for (std::size_t k = 0; k < nout; ++k) out.c[k] += p[k];
  return out;
}

}  // namespace rlab
