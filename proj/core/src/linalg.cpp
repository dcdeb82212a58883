#include "haantjes/linalg.hpp"

#include <Eigen/Dense>
#include <limits>

namespace haantjes {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

}  // namespace

double condition_number(const Matrix<double>& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

std::vector<double> symmetric_eigenvalues(const Matrix<double>& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(a), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace haantjes
