#pragma once

// Exact coefficient arithmetic for constant-coefficient forms. Every
// coefficient that occurs is unit * (r_0 + sum_{i<=j} r_ij W_ij) with
// rational r and unit one of 1, pi, i/2, so curvature identities can be
// checked with zero residual instead of a tolerance.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "abeltheta/core_lattice.hpp"

namespace abeltheta {

using Rational = boost::rational<long long>;

enum class Unit { one, pi, half_i };

class SymExpr {
 public:
  SymExpr() = default;

  static SymExpr constant(Rational r, Unit unit = Unit::one);
  // r * W_ij; W is symmetric so (i, j) and (j, i) are the same symbol.
  static SymExpr w(int i, int j, Rational r = 1, Unit unit = Unit::one);

  bool is_zero() const { return terms_.empty(); }
  Unit unit() const { return unit_; }

  SymExpr operator+(const SymExpr& other) const;
  SymExpr operator-(const SymExpr& other) const { return *this + (-other); }
  SymExpr operator-() const { return scaled(-1); }
  SymExpr scaled(Rational r) const;
  // Same coefficients, reinterpreted in another unit.
  SymExpr with_unit(Unit unit) const;

  // Zero compares equal to zero in any unit.
  bool operator==(const SymExpr& other) const;

  cd evaluate(const PeriodData& p) const;
  std::string str() const;

 private:
  using Key = std::pair<int, int>;  // (-1, -1) is the constant
  void add_term(Key key, Rational r);

  Unit unit_ = Unit::one;
  std::map<Key, Rational> terms_;
};

class SymbolicMatrix {
 public:
  SymbolicMatrix() = default;
  SymbolicMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  SymExpr& operator()(int i, int j) { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
  const SymExpr& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i * cols_ + j)];
  }

  bool operator==(const SymbolicMatrix& other) const;
  // Number of entries that differ; 0 means an exact match.
  int mismatches(const SymbolicMatrix& other) const;

  Eigen::MatrixXcd evaluate(const PeriodData& p) const;
  std::string str() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<SymExpr> data_;
};

}  // namespace abeltheta
