#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace usd {

using cxd = std::complex<double>;

// Dense row-major complex matrix. Everything in this toolkit lives on spans
// of at most a few dozen states, so plain O(n^3) loops are fine throughout.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return a_.empty(); }

  cxd& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const cxd& operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }

  const std::vector<cxd>& data() const { return a_; }

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(cxd scale);

  // column c as a plain vector
  std::vector<cxd> column(std::size_t c) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cxd> a_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexMatrix operator*(cxd scale, ComplexMatrix m);

ComplexMatrix adjoint(const ComplexMatrix& m);

// u v^dagger
ComplexMatrix outer(const std::vector<cxd>& u, const std::vector<cxd>& v);

std::vector<cxd> matvec(const ComplexMatrix& m, const std::vector<cxd>& v);

double frobenius_norm(const ComplexMatrix& m);
cxd trace(const ComplexMatrix& m);
bool all_finite(const ComplexMatrix& m);

// ||H - H^dagger||_F, cheap Hermiticity defect
double hermiticity_defect(const ComplexMatrix& m);

// <a|b> with the physics convention (conjugate-linear in the first slot)
cxd vec_inner(const std::vector<cxd>& a, const std::vector<cxd>& b);
double vec_norm(const std::vector<cxd>& a);

}  // namespace usd
