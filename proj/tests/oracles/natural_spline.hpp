#pragma once

// Classical natural cubic spline through (x_i, y_i), built from the
// tridiagonal system for the second derivatives with M_0 = M_n = 0.

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace oracle {

class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("need >= 2 knots");
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x_[a] < x_[b]; });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = x_[order[i]];
      ys[i] = y_[order[i]];
    }
    x_ = xs;
    y_ = ys;
    m_.assign(n, 0.0);
    if (n == 2) return;
    // Thomas algorithm on the interior second derivatives.
    const std::size_t k = n - 2;
    std::vector<double> a(k), b(k), c(k), r(k);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      a[i - 1] = h0 / 6.0;
      b[i - 1] = (h0 + h1) / 3.0;
      c[i - 1] = h1 / 6.0;
      r[i - 1] = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
    }
    for (std::size_t i = 1; i < k; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      r[i] -= w * r[i - 1];
    }
    std::vector<double> sol(k);
    sol[k - 1] = r[k - 1] / b[k - 1];
    for (std::size_t i = k - 1; i-- > 0;) sol[i] = (r[i] - c[i] * sol[i + 1]) / b[i];
    for (std::size_t i = 0; i < k; ++i) m_[i + 1] = sol[i];
  }

  double operator()(double t) const {
    const std::size_t n = x_.size();
    std::size_t i = 0;
    if (t <= x_[0]) {
      i = 0;
    } else if (t >= x_[n - 1]) {
      i = n - 2;
    } else {
      i = static_cast<std::size_t>(std::upper_bound(x_.begin(), x_.end(), t) - x_.begin()) - 1;
    }
    const double h = x_[i + 1] - x_[i];
    if (t < x_[0] || t > x_[n - 1]) {
      // Natural splines continue linearly outside the knots.
      const std::size_t e = t < x_[0] ? 0 : n - 1;
      const double slope = t < x_[0] ? (y_[1] - y_[0]) / h - h * (2.0 * m_[0] + m_[1]) / 6.0
                                     : (y_[n - 1] - y_[n - 2]) / h + h * (m_[n - 2] + 2.0 * m_[n - 1]) / 6.0;
      return y_[e] + slope * (t - x_[e]);
    }
    const double u = (x_[i + 1] - t) / h, v = (t - x_[i]) / h;
    return u * y_[i] + v * y_[i + 1] + ((u * u * u - u) * m_[i] + (v * v * v - v) * m_[i + 1]) * h * h / 6.0;
  }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace oracle
