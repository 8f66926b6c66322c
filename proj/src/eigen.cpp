#include "rekit/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace rekit {
namespace detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Parlett-Reinsch balancing by exact powers of two (no rounding error).
// Returns the diagonal similarity scale: balanced = D^-1 A D.
std::vector<double> balance(std::vector<double>& a, int n) {
  std::vector<double> scale(static_cast<std::size_t>(n), 1.0);
  const double radix = 2.0, sqrdx = radix * radix;
  bool done = false;
  int guard = 0;
  while (!done && ++guard <= 100) {
    done = true;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a[static_cast<std::size_t>(j) * n + i]);
        r += std::abs(a[static_cast<std::size_t>(i) * n + j]);
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        scale[static_cast<std::size_t>(i)] *= f;
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] *= g;
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j) * n + i] *= f;
      }
    }
  }
  return scale;
}

// Householder reduction to upper Hessenberg form, accumulating the
// orthogonal similarity in v.
void hessenberg(std::vector<double>& h, std::vector<double>& v, int n) {
  const int low = 0, high = n - 1;
  std::vector<double> ort(static_cast<std::size_t>(n), 0.0);
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };

  for (int m = low + 1; m <= high - 1; ++m) {
    double col_scale = 0.0;
    for (int i = m; i <= high; ++i) col_scale += std::abs(H(i, m - 1));
    if (col_scale == 0.0) continue;

    double hh = 0.0;
    for (int i = high; i >= m; --i) {
      ort[static_cast<std::size_t>(i)] = H(i, m - 1) / col_scale;
      hh += ort[static_cast<std::size_t>(i)] * ort[static_cast<std::size_t>(i)];
    }
    double g = std::sqrt(hh);
    if (ort[static_cast<std::size_t>(m)] > 0) g = -g;
    hh -= ort[static_cast<std::size_t>(m)] * g;
    ort[static_cast<std::size_t>(m)] -= g;

    for (int j = m; j < n; ++j) {
      double f = 0.0;
      for (int i = high; i >= m; --i) f += ort[static_cast<std::size_t>(i)] * H(i, j);
      f /= hh;
      for (int i = m; i <= high; ++i) H(i, j) -= f * ort[static_cast<std::size_t>(i)];
    }
    for (int i = 0; i <= high; ++i) {
      double f = 0.0;
      for (int j = high; j >= m; --j) f += ort[static_cast<std::size_t>(j)] * H(i, j);
      f /= hh;
      for (int j = m; j <= high; ++j) H(i, j) -= f * ort[static_cast<std::size_t>(j)];
    }
    ort[static_cast<std::size_t>(m)] *= col_scale;
    H(m, m - 1) = col_scale * g;
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V(i, j) = (i == j) ? 1.0 : 0.0;
  for (int m = high - 1; m >= low + 1; --m) {
    if (H(m, m - 1) == 0.0) continue;
    for (int i = m + 1; i <= high; ++i) ort[static_cast<std::size_t>(i)] = H(i, m - 1);
    for (int j = m; j <= high; ++j) {
      double g = 0.0;
      for (int i = m; i <= high; ++i) g += ort[static_cast<std::size_t>(i)] * V(i, j);
      g = (g / ort[static_cast<std::size_t>(m)]) / H(m, m - 1);
      for (int i = m; i <= high; ++i) V(i, j) += g * ort[static_cast<std::size_t>(i)];
    }
  }
}

struct ComplexParts {
  double re = 0.0, im = 0.0;
};

ComplexParts cdiv(double xr, double xi, double yr, double yi) {
  ComplexParts out;
  if (std::abs(yr) > std::abs(yi)) {
    const double r = yi / yr, d = yr + r * yi;
    out.re = (xr + r * xi) / d;
    out.im = (xi - r * xr) / d;
  } else {
    const double r = yr / yi, d = yi + r * yr;
    out.re = (r * xr + xi) / d;
    out.im = (r * xi - xr) / d;
  }
  return out;
}

std::string dump_matrix(const std::vector<double>& h, int n) {
  if (n > 64) return "(matrix of dimension " + std::to_string(n) + " withheld)";
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) os << h[static_cast<std::size_t>(i) * n + j] << (j + 1 < n ? " " : "");
    os << "\n";
  }
  return os.str();
}

// Francis double-shift QR on a real upper Hessenberg matrix with
// accumulated transformations and eigenvector back-substitution
// (EISPACK hqr2 lineage). d/e receive real/imaginary eigenvalue parts;
// on return the columns of v span the eigenvectors in packed real form.
void hqr2(std::vector<double>& h, std::vector<double>& v, int nn, std::vector<double>& d,
          std::vector<double>& e, int max_sweeps) {
  auto H = [&](int i, int j) -> double& { return h[static_cast<std::size_t>(i) * nn + j]; };
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * nn + j]; };

  const int low = 0, high = nn - 1;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;
  int sweeps = 0;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));

  int n = nn - 1;
  int iter = 0;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      // <= so that exact zeros deflate even when the scale itself is zero
      if (std::abs(H(l, l - 1)) <= kEps * s) break;
      --l;
    }

    if (l == n) {
      H(n, n) += exshift;
      d[static_cast<std::size_t>(n)] = H(n, n);
      e[static_cast<std::size_t>(n)] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      H(n, n) += exshift;
      H(n - 1, n - 1) += exshift;
      x = H(n, n);
      if (q >= 0) {
        z = (p >= 0) ? p + z : p - z;
        d[static_cast<std::size_t>(n - 1)] = x + z;
        d[static_cast<std::size_t>(n)] = d[static_cast<std::size_t>(n - 1)];
        if (z != 0.0) d[static_cast<std::size_t>(n)] = x - w / z;
        e[static_cast<std::size_t>(n - 1)] = 0.0;
        e[static_cast<std::size_t>(n)] = 0.0;
        x = H(n, n - 1);
        s = std::abs(x) + std::abs(z);
        p = x / s;
        q = z / s;
        r = std::sqrt(p * p + q * q);
        p /= r;
        q /= r;
        for (int j = n - 1; j < nn; ++j) {
          z = H(n - 1, j);
          H(n - 1, j) = q * z + p * H(n, j);
          H(n, j) = q * H(n, j) - p * z;
        }
        for (int i = 0; i <= n; ++i) {
          z = H(i, n - 1);
          H(i, n - 1) = q * z + p * H(i, n);
          H(i, n) = q * H(i, n) - p * z;
        }
        for (int i = low; i <= high; ++i) {
          z = V(i, n - 1);
          V(i, n - 1) = q * z + p * V(i, n);
          V(i, n) = q * V(i, n) - p * z;
        }
      } else {
        d[static_cast<std::size_t>(n - 1)] = x + p;
        d[static_cast<std::size_t>(n)] = x + p;
        e[static_cast<std::size_t>(n - 1)] = z;
        e[static_cast<std::size_t>(n)] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      x = H(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H(n - 1, n - 1);
        w = H(n, n - 1) * H(n - 1, n);
      }

      if (iter == 10 || iter == 20) {
        // exceptional shift
        exshift += x;
        for (int i = low; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++iter;
      if (++sweeps > max_sweeps)
        throw numerical_error("QR iteration exceeded " + std::to_string(max_sweeps) +
                                  " sweeps without deflating",
                              dump_matrix(h, nn));

      int m = n - 2;
      while (m >= l) {
        z = H(m, m);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(m + 1, m) + H(m, m + 1);
        q = H(m + 1, m + 1) - z - r - s;
        r = H(m + 2, m + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(H(m, m - 1)) * (std::abs(q) + std::abs(r)) <
            kEps * (std::abs(p) * (std::abs(H(m - 1, m - 1)) + std::abs(z) + std::abs(H(m + 1, m + 1)))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > m + 2) H(i, i - 3) = 0.0;
      }

      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = (k != n - 1);
        if (k != m) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != m)
          H(k, k - 1) = -s * x;
        else if (l != m)
          H(k, k - 1) = -H(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;

        for (int j = k; j < nn; ++j) {
          double pp = H(k, j) + q * H(k + 1, j);
          if (notlast) {
            pp += r * H(k + 2, j);
            H(k + 2, j) -= pp * z;
          }
          H(k, j) -= pp * x;
          H(k + 1, j) -= pp * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          double pp = x * H(i, k) + y * H(i, k + 1);
          if (notlast) {
            pp += z * H(i, k + 2);
            H(i, k + 2) -= pp * r;
          }
          H(i, k) -= pp;
          H(i, k + 1) -= pp * q;
        }
        for (int i = low; i <= high; ++i) {
          double pp = x * V(i, k) + y * V(i, k + 1);
          if (notlast) {
            pp += z * V(i, k + 2);
            V(i, k + 2) -= pp * r;
          }
          V(i, k) -= pp;
          V(i, k + 1) -= pp * q;
        }
      }
    }
  }

  // Back-substitution: eigenvectors of the quasi-triangular form.
  if (norm == 0.0) return;
  for (n = nn - 1; n >= 0; --n) {
    p = d[static_cast<std::size_t>(n)];
    q = e[static_cast<std::size_t>(n)];
    if (q == 0.0) {
      int l = n;
      H(n, n) = 1.0;
      for (int i = n - 1; i >= 0; --i) {
        w = H(i, i) - p;
        r = 0.0;
        for (int j = l; j <= n; ++j) r += H(i, j) * H(j, n);
        if (e[static_cast<std::size_t>(i)] < 0.0) {
          z = w;
          s = r;
        } else {
          l = i;
          if (e[static_cast<std::size_t>(i)] == 0.0) {
            H(i, n) = (w != 0.0) ? -r / w : -r / (kEps * norm);
          } else {
            x = H(i, i + 1);
            y = H(i + 1, i);
            q = (d[static_cast<std::size_t>(i)] - p) * (d[static_cast<std::size_t>(i)] - p) +
                e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)];
            const double t = (x * s - z * r) / q;
            H(i, n) = t;
            H(i + 1, n) = (std::abs(x) > std::abs(z)) ? (-r - w * t) / x : (-s - y * t) / z;
          }
          const double t = std::abs(H(i, n));
          if ((kEps * t) * t > 1) {
            for (int j = i; j <= n; ++j) H(j, n) /= t;
          }
        }
      }
    } else if (q < 0.0) {
      int l = n - 1;
      if (std::abs(H(n, n - 1)) > std::abs(H(n - 1, n))) {
        H(n - 1, n - 1) = q / H(n, n - 1);
        H(n - 1, n) = -(H(n, n) - p) / H(n, n - 1);
      } else {
        const auto cd = cdiv(0.0, -H(n - 1, n), H(n - 1, n - 1) - p, q);
        H(n - 1, n - 1) = cd.re;
        H(n - 1, n) = cd.im;
      }
      H(n, n - 1) = 0.0;
      H(n, n) = 1.0;
      for (int i = n - 2; i >= 0; --i) {
        double ra = 0.0, sa = 0.0;
        for (int j = l; j <= n; ++j) {
          ra += H(i, j) * H(j, n - 1);
          sa += H(i, j) * H(j, n);
        }
        w = H(i, i) - p;
        if (e[static_cast<std::size_t>(i)] < 0.0) {
          z = w;
          r = ra;
          s = sa;
        } else {
          l = i;
          if (e[static_cast<std::size_t>(i)] == 0.0) {
            const auto cd = cdiv(-ra, -sa, w, q);
            H(i, n - 1) = cd.re;
            H(i, n) = cd.im;
          } else {
            x = H(i, i + 1);
            y = H(i + 1, i);
            double vr = (d[static_cast<std::size_t>(i)] - p) * (d[static_cast<std::size_t>(i)] - p) +
                        e[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(i)] - q * q;
            const double vi = (d[static_cast<std::size_t>(i)] - p) * 2.0 * q;
            if (vr == 0.0 && vi == 0.0)
              vr = kEps * norm *
                   (std::abs(w) + std::abs(q) + std::abs(x) + std::abs(y) + std::abs(z));
            const auto cd = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
            H(i, n - 1) = cd.re;
            H(i, n) = cd.im;
            if (std::abs(x) > (std::abs(z) + std::abs(q))) {
              H(i + 1, n - 1) = (-ra - w * H(i, n - 1) + q * H(i, n)) / x;
              H(i + 1, n) = (-sa - w * H(i, n) - q * H(i, n - 1)) / x;
            } else {
              const auto cd2 = cdiv(-r - y * H(i, n - 1), -s - y * H(i, n), z, q);
              H(i + 1, n - 1) = cd2.re;
              H(i + 1, n) = cd2.im;
            }
          }
          const double t = std::max(std::abs(H(i, n - 1)), std::abs(H(i, n)));
          if ((kEps * t) * t > 1) {
            for (int j = i; j <= n; ++j) {
              H(j, n - 1) /= t;
              H(j, n) /= t;
            }
          }
        }
      }
    }
  }

  // Transform back to the basis of the balanced input matrix.
  for (int j = nn - 1; j >= low; --j) {
    for (int i = low; i <= high; ++i) {
      double zz = 0.0;
      for (int k = low; k <= std::min(j, high); ++k) zz += V(i, k) * H(k, j);
      V(i, j) = zz;
    }
  }
}

}  // namespace

DenseEigenResult dense_eigen(const std::vector<double>& a_in, int n, bool want_vectors,
                             int max_sweeps) {
  DenseEigenResult out;
  if (n == 1) {
    out.values = {std::complex<double>(a_in[0], 0.0)};
    out.vectors = {{std::complex<double>(1.0, 0.0)}};
    return out;
  }

  std::vector<double> h(a_in);
  auto scale = balance(h, n);
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  hessenberg(h, v, n);
  std::vector<double> d(static_cast<std::size_t>(n), 0.0), e(static_cast<std::size_t>(n), 0.0);
  hqr2(h, v, n, d, e, max_sweeps);

  out.values.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out.values[static_cast<std::size_t>(k)] =
        std::complex<double>(d[static_cast<std::size_t>(k)], e[static_cast<std::size_t>(k)]);

  if (!want_vectors) return out;

  out.vectors.assign(static_cast<std::size_t>(n),
                     std::vector<std::complex<double>>(static_cast<std::size_t>(n)));
  auto V = [&](int i, int j) { return v[static_cast<std::size_t>(i) * n + j]; };
  for (int k = 0; k < n; ++k) {
    auto& vec = out.vectors[static_cast<std::size_t>(k)];
    if (e[static_cast<std::size_t>(k)] == 0.0) {
      for (int i = 0; i < n; ++i)
        vec[static_cast<std::size_t>(i)] = V(i, k) * scale[static_cast<std::size_t>(i)];
    } else if (e[static_cast<std::size_t>(k)] > 0.0) {
      for (int i = 0; i < n; ++i)
        vec[static_cast<std::size_t>(i)] =
            std::complex<double>(V(i, k), V(i, k + 1)) * scale[static_cast<std::size_t>(i)];
    } else {
      for (int i = 0; i < n; ++i)
        vec[static_cast<std::size_t>(i)] =
            std::complex<double>(V(i, k - 1), -V(i, k)) * scale[static_cast<std::size_t>(i)];
    }
    double nrm = 0.0;
    for (const auto& c : vec) nrm += std::norm(c);
    nrm = std::sqrt(nrm);
    if (nrm > 0.0)
      for (auto& c : vec) c /= nrm;
  }
  return out;
}

SymmetricEigenResult symmetric_eigen(const std::vector<double>& a_in, int n) {
  std::vector<double> a(a_in);
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i) V(i, i) = 1.0;

  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(A(i, j)));
  if (scale == 0.0) scale = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) <= 1e-15 * scale * n) break;

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) <= 1e-18 * scale) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigenResult out;
  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = A(i, i);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return out.values[static_cast<std::size_t>(i)] > out.values[static_cast<std::size_t>(j)];
  });
  SymmetricEigenResult sorted;
  sorted.values.resize(static_cast<std::size_t>(n));
  sorted.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int k = 0; k < n; ++k) {
    sorted.values[static_cast<std::size_t>(k)] = out.values[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
    for (int i = 0; i < n; ++i)
      sorted.vectors[static_cast<std::size_t>(i) * n + k] = V(i, order[static_cast<std::size_t>(k)]);
  }
  return sorted;
}

std::vector<double> solve_linear(std::vector<double> a, int n, std::vector<double> b) {
  if (static_cast<int>(b.size()) != n) throw input_error("rhs dimension mismatch");
  std::vector<int> piv(static_cast<std::size_t>(n));
  std::iota(piv.begin(), piv.end(), 0);
  auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  for (int k = 0; k < n; ++k) {
    int pk = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A(i, k)) > std::abs(A(pk, k))) pk = i;
    if (A(pk, k) == 0.0) throw numerical_error("singular matrix in linear solve");
    if (pk != k) {
      for (int j = 0; j < n; ++j) std::swap(A(k, j), A(pk, j));
      std::swap(b[static_cast<std::size_t>(k)], b[static_cast<std::size_t>(pk)]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = A(i, k) / A(k, k);
      A(i, k) = 0.0;
      if (f == 0.0) continue;
      for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(k)];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[static_cast<std::size_t>(j)];
    b[static_cast<std::size_t>(i)] = s / A(i, i);
  }
  return b;
}

double matrix_inf_norm(const std::vector<double>& a, int n) {
  double nrm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a[static_cast<std::size_t>(i) * n + j]);
    nrm = std::max(nrm, row);
  }
  return nrm;
}

}  // namespace detail

double Spectrum::radius() const {
  double r = 0.0;
  for (const auto& ev : eigenvalues) r = std::max(r, std::abs(ev.value));
  return r;
}

int Spectrum::total_multiplicity() const {
  int m = 0;
  for (const auto& ev : eigenvalues) m += ev.multiplicity;
  return m;
}

int Spectrum::multiplicity_at(std::complex<double> lambda, double tol) const {
  int m = 0;
  for (const auto& ev : eigenvalues)
    if (std::abs(ev.value - lambda) <= tol) m += ev.multiplicity;
  return m;
}

namespace {

void sort_entries(std::vector<Spectrum::Entry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const Spectrum::Entry& a, const Spectrum::Entry& b) {
    const double ma = std::abs(a.value), mb = std::abs(b.value);
    if (ma != mb) return ma > mb;
    if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
    return a.value.imag() < b.value.imag();
  });
}

std::vector<Spectrum::Entry> cluster_values(const std::vector<std::complex<double>>& vals,
                                            double radius) {
  struct Cluster {
    std::complex<double> sum;
    int count;
    std::complex<double> mean() const { return sum / static_cast<double>(count); }
  };
  std::vector<Cluster> clusters;
  for (const auto& z : vals) clusters.push_back({z, 1});

  // Transitive merging until all representatives are separated.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
        if (std::abs(clusters[i].mean() - clusters[j].mean()) <= radius) {
          clusters[i].sum += clusters[j].sum;
          clusters[i].count += clusters[j].count;
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }

  std::vector<Spectrum::Entry> entries;
  entries.reserve(clusters.size());
  for (const auto& c : clusters) {
    std::complex<double> v = c.mean();
    if (std::abs(v.imag()) <= radius * 0.5 || v.imag() == 0.0)
      v = std::complex<double>(v.real(), 0.0);
    entries.push_back({v, c.count});
  }

  // Enforce exact conjugate pairing of the complex entries.
  for (auto& a : entries) {
    if (a.value.imag() <= 0.0) continue;
    for (auto& b : entries) {
      if (b.value.imag() < 0.0 && std::abs(b.value - std::conj(a.value)) <= radius) {
        b.value = std::conj(a.value);
        break;
      }
    }
  }
  sort_entries(entries);
  return entries;
}

}  // namespace

Spectrum spectrum(const NextGenMatrix& m, double tol, std::optional<double> cluster_radius) {
  if (!(tol > 0.0)) throw input_error("tolerance must be positive");
  const int n = m.size();
  auto eig = detail::dense_eigen(m.entries(), n, /*want_vectors=*/true, 100 * n);

  double rho = 0.0;
  for (const auto& z : eig.values) rho = std::max(rho, std::abs(z));

  // Residual check on the recovered eigenvectors.
  const double mnorm = std::max(detail::matrix_inf_norm(m.entries(), n), 1e-300);
  for (int k = 0; k < n; ++k) {
    const auto& vec = eig.vectors[static_cast<std::size_t>(k)];
    const auto lambda = eig.values[static_cast<std::size_t>(k)];
    double resid = 0.0;
    for (int i = 0; i < n; ++i) {
      std::complex<double> acc = -lambda * vec[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) acc += m(i, j) * vec[static_cast<std::size_t>(j)];
      resid += std::norm(acc);
    }
    resid = std::sqrt(resid) / mnorm;
    if (!(resid <= tol))
      throw numerical_error("eigenvector residual " + std::to_string(resid) +
                            " exceeds tolerance for eigenvalue index " + std::to_string(k));
  }

  Spectrum s;
  s.dimension = n;
  s.cluster_radius = cluster_radius ? *cluster_radius : 1e-7 * std::max(1.0, rho);
  if (s.cluster_radius < 0.0) throw input_error("cluster radius must be nonnegative");
  s.eigenvalues = cluster_values(eig.values, s.cluster_radius);
  return s;
}

double spectral_radius(const NextGenMatrix& m) { return spectrum(m).radius(); }

Inertia inertia(const Spectrum& s, std::optional<double> zero_band) {
  const double band = zero_band ? *zero_band : 1e-9 * std::max(1.0, s.radius());
  if (band < 0.0) throw input_error("zero band must be nonnegative");
  Inertia out;
  for (const auto& ev : s.eigenvalues) {
    if (ev.value.real() > band)
      out.positive_count += ev.multiplicity;
    else if (ev.value.real() < -band)
      out.negative_count += ev.multiplicity;
    else
      out.zero_count += ev.multiplicity;
  }
  return out;
}

namespace {

// One-sided Perron vector by inverse iteration at a slightly shifted radius,
// falling back to shifted power iteration. Returns the vector with unit
// 1-norm or throws after both schemes stall.
std::vector<double> perron_vector(const NextGenMatrix& m, double rho) {
  const int n = m.size();
  const double res_tol = 1e-11 * (1.0 + rho);
  auto residual = [&](const std::vector<double>& v) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      double acc = -rho * v[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) acc += m(i, j) * v[static_cast<std::size_t>(j)];
      r += std::abs(acc);
    }
    return r;
  };
  auto normalize1 = [&](std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    if (s == 0.0) return false;
    double pos = 0.0;
    for (double x : v) pos += x;
    const double sign = (pos >= 0.0) ? 1.0 : -1.0;
    for (double& x : v) x = sign * x / s;
    return true;
  };

  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n);

  // Inverse iteration with a fixed shifted factorization.
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double sigma = rho * (1.0 + 1e-9) + std::pow(10.0, attempt) * 1e-13 * (1.0 + rho);
    std::vector<double> shifted(m.entries());
    for (int i = 0; i < n; ++i) shifted[static_cast<std::size_t>(i) * n + i] -= sigma;
    try {
      std::vector<double> x(v);
      for (int it = 0; it < 64; ++it) {
        x = detail::solve_linear(shifted, n, x);
        if (!normalize1(x)) break;
        if (residual(x) <= res_tol) {
          for (double& xi : x) xi = std::max(xi, 0.0);
          normalize1(x);
          return x;
        }
      }
    } catch (const numerical_error&) {
      // singular shift; retry with a larger offset
    }
  }

  // Shifted power iteration: (M + rho I) preserves nonnegativity and makes
  // the Perron root strictly dominant.
  std::vector<double> x(static_cast<std::size_t>(n), 1.0 / n);
  const int cap = std::max(20000, 500 * n);
  for (int it = 0; it < cap; ++it) {
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      double acc = rho * x[static_cast<std::size_t>(i)];
      for (int j = 0; j < n; ++j) acc += m(i, j) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = acc;
    }
    if (!normalize1(y)) break;
    x = y;
    if (residual(x) <= res_tol * 10) return x;
  }
  throw numerical_error("Perron iteration failed to converge");
}

}  // namespace

PerronPair perron_pair(const NextGenMatrix& m) {
  const double rho = spectral_radius(m);
  const double floor = 1e-12 * std::max(1.0, m.max_entry());
  if (rho <= floor)
    throw numerical_error("quasi-nilpotent input: spectral radius " + std::to_string(rho) +
                          " is below tolerance, Perron pair undefined");
  PerronPair out;
  out.radius = rho;
  out.right = perron_vector(m, rho);
  out.left = perron_vector(m.transposed(), rho);
  return out;
}

bool spectra_match(const Spectrum& a, const Spectrum& b, double tol) {
  if (a.dimension != b.dimension) return false;
  struct Item {
    std::complex<double> v;
    int mult;
  };
  std::vector<Item> rest;
  for (const auto& e : b.eigenvalues) rest.push_back({e.value, e.multiplicity});
  for (const auto& e : a.eigenvalues) {
    int need = e.multiplicity;
    while (need > 0) {
      int best = -1;
      double bestd = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rest.size(); ++i) {
        if (rest[i].mult <= 0) continue;
        const double dd = std::abs(rest[i].v - e.value);
        if (dd < bestd) {
          bestd = dd;
          best = static_cast<int>(i);
        }
      }
      if (best < 0 || bestd > tol) return false;
      const int take = std::min(need, rest[static_cast<std::size_t>(best)].mult);
      rest[static_cast<std::size_t>(best)].mult -= take;
      need -= take;
    }
  }
  for (const auto& it : rest)
    if (it.mult != 0) return false;
  return true;
}

}  // namespace rekit
