#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>

namespace thermogeo {

// Coordinates always live in a 3-vector; 2D charts leave the last slot at zero.
using Point = Eigen::Vector3d;

// Stack-allocated, runtime-sized (2 or 3) linear algebra types.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;

// Rank-3 array with index range [0, dim). Entries outside the range stay zero.
class Tensor3 {
 public:
  Tensor3() : Tensor3(3) {}
  explicit Tensor3(int dim) : dim_(dim) { data_.fill(0.0); }

  int dim() const { return dim_; }
  double& operator()(int a, int b, int c) { return data_[(a * 3 + b) * 3 + c]; }
  double operator()(int a, int b, int c) const { return data_[(a * 3 + b) * 3 + c]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Tensor3& operator+=(const Tensor3& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor3& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }

 private:
  int dim_;
  std::array<double, 27> data_;
};

class Tensor4 {
 public:
  Tensor4() : Tensor4(3) {}
  explicit Tensor4(int dim) : dim_(dim) { data_.fill(0.0); }

  int dim() const { return dim_; }
  double& operator()(int a, int b, int c, int d) { return data_[((a * 3 + b) * 3 + c) * 3 + d]; }
  double operator()(int a, int b, int c, int d) const { return data_[((a * 3 + b) * 3 + c) * 3 + d]; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  Tensor4& operator+=(const Tensor4& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Tensor4& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }
  friend Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
  friend Tensor4 operator*(double s, Tensor4 a) { return a *= s; }
  friend Tensor4 operator*(Tensor4 a, double s) { return a *= s; }

 private:
  int dim_;
  std::array<double, 81> data_;
};

inline double max_abs(double v) { return std::abs(v); }
inline double max_abs(const Mat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
inline double max_abs(const Tensor3& t) { return t.max_abs(); }
inline double max_abs(const Tensor4& t) { return t.max_abs(); }

}  // namespace thermogeo
