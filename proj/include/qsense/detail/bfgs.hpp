#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace qsense {

template <class F>
MinimizeResult bfgs_fd(F&& f, Eigen::VectorXd x, std::size_t max_iter, double tol, double step) {
  const Eigen::Index n = x.size();
  MinimizeResult out{x, f(x), 0, false};
  if (n == 0) {
    out.converged = true;
    return out;
  }
  auto gradient = [&](const Eigen::VectorXd& at) {
    Eigen::VectorXd g(n);
    Eigen::VectorXd probe = at;
    for (Eigen::Index k = 0; k < n; ++k) {
      probe(k) = at(k) + step;
      const double up = f(probe);
      probe(k) = at(k) - step;
      const double down = f(probe);
      probe(k) = at(k);
      g(k) = (up - down) / (2.0 * step);
    }
    return g;
  };
  Eigen::MatrixXd inv_h = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = gradient(x);
  double fx = out.value;
  for (std::size_t it = 0; it < max_iter; ++it) {
    out.iterations = it + 1;
    if (g.norm() < 1e-9) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd dir = -inv_h * g;
    if (dir.dot(g) >= 0.0) {
      inv_h.setIdentity();
      dir = -g;
    }
    // Backtracking with the Armijo condition.
    double alpha = 1.0;
    Eigen::VectorXd next;
    double fn = fx;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      next = x + alpha * dir;
      fn = f(next);
      if (fn <= fx + 1e-4 * alpha * g.dot(dir)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const Eigen::VectorXd gn = gradient(next);
    const Eigen::VectorXd s = next - x;
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    if (sy > 1e-14) {
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
      inv_h = (id - rho * s * y.transpose()) * inv_h * (id - rho * y * s.transpose()) + rho * s * s.transpose();
    }
    const double drop = fx - fn;
    x = next;
    g = gn;
    fx = fn;
    if (fx < out.value) {
      out.value = fx;
      out.x = x;
    }
    if (drop < tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace qsense
