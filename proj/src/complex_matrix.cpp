#include "usd/complex_matrix.hpp"

#include <cmath>

namespace usd {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= rhs.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cxd scale) {
  for (auto& v : a_) v *= scale;
  return *this;
}

std::vector<cxd> ComplexMatrix::column(std::size_t c) const {
  std::vector<cxd> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs += rhs;
  return lhs;
}

ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) {
  lhs -= rhs;
  return lhs;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  ComplexMatrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const cxd v = lhs(i, k);
      if (v == cxd{}) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += v * rhs(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(cxd scale, ComplexMatrix m) {
  m *= scale;
  return m;
}

ComplexMatrix adjoint(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = std::conj(m(r, c));
  return out;
}

ComplexMatrix outer(const std::vector<cxd>& u, const std::vector<cxd>& v) {
  ComplexMatrix out(u.size(), v.size());
  for (std::size_t r = 0; r < u.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c)
      out(r, c) = u[r] * std::conj(v[c]);
  return out;
}

std::vector<cxd> matvec(const ComplexMatrix& m, const std::vector<cxd>& v) {
  std::vector<cxd> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    cxd acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

double frobenius_norm(const ComplexMatrix& m) {
  double acc = 0.0;
  for (const auto& v : m.data()) acc += std::norm(v);
  return std::sqrt(acc);
}

cxd trace(const ComplexMatrix& m) {
  cxd acc = 0.0;
  for (std::size_t i = 0; i < m.rows() && i < m.cols(); ++i) acc += m(i, i);
  return acc;
}

bool all_finite(const ComplexMatrix& m) {
  for (const auto& v : m.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

double hermiticity_defect(const ComplexMatrix& m) {
  double acc = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      acc += std::norm(m(r, c) - std::conj(m(c, r)));
  return std::sqrt(acc);
}

cxd vec_inner(const std::vector<cxd>& a, const std::vector<cxd>& b) {
  cxd acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double vec_norm(const std::vector<cxd>& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace usd
