#include "mvtm/proxops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

#include "mvtm/error.hpp"

namespace mvtm {

double hinge_norm(const Eigen::MatrixXd& x) {
  return (-x.array()).cwiseMax(0.0).sum();
}

Eigen::MatrixXd prox_hinge(const Eigen::MatrixXd& p, double c) {
  if (!(c > 0.0)) {
    throw ConfigError("prox_hinge: threshold must be positive, got " +
                      std::to_string(c));
  }
  // x = p          for p >= 0
  // x = 0          for -c <= p < 0
  // x = p + c      for p < -c
  return p.unaryExpr([c](double v) {
    if (v >= 0.0) return v;
    return v < -c ? v + c : 0.0;
  });
}

Eigen::MatrixXd project_min_singular(const Eigen::MatrixXd& x, double zeta) {
  if (x.rows() != x.cols()) {
    throw DimensionError("project_min_singular: input must be square, got " +
                         std::to_string(x.rows()) + "x" +
                         std::to_string(x.cols()));
  }
  if (!(zeta > 0.0)) {
    throw ConfigError("project_min_singular: zeta must be positive");
  }
  if (x.isZero(0.0)) {
    // Every U (zeta I) V^T is equidistant from 0; identity is the canonical
    // representative.
    return zeta *
           Eigen::MatrixXd::Identity(x.rows(), x.cols());
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  if (sv.minCoeff() >= zeta) return x;
  for (Eigen::Index i = 0; i < sv.size(); ++i) sv[i] = std::max(sv[i], zeta);
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw DimensionError("project_simplex: empty input");
  std::vector<double> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());

  // Largest support size k with sorted[k-1] - (prefix_sum(k) - 1)/k > 0.
  double prefix = 0.0;
  double tau = sorted[0] - 1.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    prefix += sorted[k - 1];
    const double candidate = (prefix - 1.0) / static_cast<double>(k);
    if (sorted[k - 1] - candidate > 0.0) tau = candidate;
  }
  return (v.array() - tau).cwiseMax(0.0);
}

}  // namespace mvtm
