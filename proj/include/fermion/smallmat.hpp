#pragma once

#include <vector>

#include "fermion/errors.hpp"
#include "fermion/scalar.hpp"

namespace fermion {

// Minimal square matrix over the scalar ring S, used to pass metric /
// bivector components into the algebra layer without dragging in a full
// linear-algebra dependency (the geometry layer owns that).
template <class S>
class SqMat {
 public:
  SqMat() = default;
  explicit SqMat(int n) : n_(n), a_(std::size_t(n) * n) {}
  static SqMat identity(int n) {
    SqMat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  int dim() const { return n_; }
  const S& operator()(int i, int j) const { return a_[std::size_t(i) * n_ + j]; }
  S& operator()(int i, int j) { return a_[std::size_t(i) * n_ + j]; }

  SqMat transpose() const {
    SqMat t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend SqMat operator+(const SqMat& x, const SqMat& y) {
    SqMat r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }
  friend SqMat operator-(const SqMat& x, const SqMat& y) {
    SqMat r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] - y.a_[i];
    return r;
  }
  friend SqMat operator*(const SqMat& x, const SqMat& y) {
    SqMat r(x.n_);
    for (int i = 0; i < x.n_; ++i)
      for (int k = 0; k < x.n_; ++k) {
        if (ring<S>::is_zero(x(i, k))) continue;
        for (int j = 0; j < x.n_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }
  friend SqMat operator*(const S& s, SqMat m) {
    for (S& v : m.a_) v *= s;
    return m;
  }

  // Gauss-Jordan inverse with partial pivoting (numeric scalars only).
  SqMat inverse() const {
    const int n = n_;
    std::vector<S> a(a_);
    SqMat inv = identity(n);
    auto row = [&](std::vector<S>& m, int i) { return m.data() + std::size_t(i) * n; };
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r)
        if (ring<S>::abs(row(a, r)[c]) > ring<S>::abs(row(a, p)[c])) p = r;
      if (ring<S>::abs(row(a, p)[c]) == 0) throw ConstraintError("singular matrix");
      if (p != c)
        for (int j = 0; j < n; ++j) {
          std::swap(row(a, p)[j], row(a, c)[j]);
          std::swap(inv(p, j), inv(c, j));
        }
      const S piv = ring<S>::inv(row(a, c)[c]);
      for (int j = 0; j < n; ++j) {
        row(a, c)[j] *= piv;
        inv(c, j) *= piv;
      }
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const S f = row(a, r)[c];
        if (ring<S>::is_zero(f)) continue;
        for (int j = 0; j < n; ++j) {
          row(a, r)[j] -= f * row(a, c)[j];
          inv(r, j) -= f * inv(c, j);
        }
      }
    }
    return inv;
  }

  S determinant() const {
    const int n = n_;
    std::vector<S> a(a_);
    auto at = [&](int i, int j) -> S& { return a[std::size_t(i) * n + j]; };
    S det = S(1);
    for (int c = 0; c < n; ++c) {
      int p = c;
      for (int r = c + 1; r < n; ++r)
        if (ring<S>::abs(at(r, c)) > ring<S>::abs(at(p, c))) p = r;
      if (ring<S>::abs(at(p, c)) == 0) return S{};
      if (p != c) {
        for (int j = 0; j < n; ++j) std::swap(at(p, j), at(c, j));
        det = -det;
      }
      det *= at(c, c);
      for (int r = c + 1; r < n; ++r) {
        const S f = at(r, c) * ring<S>::inv(at(c, c));
        for (int j = c; j < n; ++j) at(r, j) -= f * at(c, j);
      }
    }
    return det;
  }

  bool is_antisymmetric(double tol = 0) const {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (ring<S>::abs((*this)(i, j) + (*this)(j, i)) > tol) return false;
    return true;
  }

 private:
  int n_ = 0;
  std::vector<S> a_;
};

}  // namespace fermion
