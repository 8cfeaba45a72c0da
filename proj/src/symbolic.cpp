#include "abeltheta/symbolic.hpp"

#include <numbers>
#include <sstream>

namespace abeltheta {

namespace {

cd unit_value(Unit u) {
  switch (u) {
    case Unit::one: return 1.0;
    case Unit::pi: return std::numbers::pi;
    case Unit::half_i: return {0.0, 0.5};
  }
  return 1.0;
}

const char* unit_name(Unit u) {
  switch (u) {
    case Unit::one: return "";
    case Unit::pi: return "pi*";
    case Unit::half_i: return "(i/2)*";
  }
  return "";
}

double to_double(Rational r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

}  // namespace

SymExpr SymExpr::constant(Rational r, Unit unit) {
  SymExpr e;
  e.unit_ = unit;
  e.add_term({-1, -1}, r);
  return e;
}

SymExpr SymExpr::w(int i, int j, Rational r, Unit unit) {
  SymExpr e;
  e.unit_ = unit;
  e.add_term({std::min(i, j), std::max(i, j)}, r);
  return e;
}

// Tests go through numerator(): under C++20 rewritten comparisons,
// rational<long long> == int recurses forever in the Boost we build against.
void SymExpr::add_term(Key key, Rational r) {
  if (r.numerator() == 0) return;
  auto [it, inserted] = terms_.emplace(key, r);
  if (!inserted) {
    it->second += r;
    if (it->second.numerator() == 0) terms_.erase(it);
  }
}

SymExpr SymExpr::operator+(const SymExpr& other) const {
  if (other.is_zero()) return *this;
  if (is_zero()) return other;
  if (unit_ != other.unit_) {
    throw Error(ErrorCode::InvalidArgument, "adding symbolic terms with different units");
  }
  SymExpr out = *this;
  for (const auto& [key, r] : other.terms_) out.add_term(key, r);
  return out;
}

SymExpr SymExpr::scaled(Rational r) const {
  SymExpr out;
  out.unit_ = unit_;
  for (const auto& [key, v] : terms_) out.add_term(key, v * r);
  return out;
}

SymExpr SymExpr::with_unit(Unit unit) const {
  SymExpr out = *this;
  out.unit_ = unit;
  return out;
}

bool SymExpr::operator==(const SymExpr& other) const {
  if (is_zero() || other.is_zero()) return is_zero() && other.is_zero();
  return unit_ == other.unit_ && terms_ == other.terms_;
}

cd SymExpr::evaluate(const PeriodData& p) const {
  double sum = 0.0;
  for (const auto& [key, r] : terms_) {
    sum += to_double(r) * (key.first < 0 ? 1.0 : p.W()(key.first, key.second));
  }
  return unit_value(unit_) * sum;
}

std::string SymExpr::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  os << unit_name(unit_) << "(";
  bool first = true;
  for (const auto& [key, r] : terms_) {
    if (!first) os << (r.numerator() < 0 ? " - " : " + ");
    else if (r.numerator() < 0) os << "-";
    first = false;
    const Rational mag = r.numerator() < 0 ? -r : r;
    const bool is_one = mag == Rational(1);
    if (!is_one || key.first < 0) {
      os << mag.numerator();
      if (mag.denominator() != 1) os << "/" << mag.denominator();
    }
    if (key.first >= 0) {
      os << (is_one ? "" : "*") << "W" << key.first + 1 << key.second + 1;
    }
  }
  os << ")";
  return os.str();
}

bool SymbolicMatrix::operator==(const SymbolicMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && mismatches(other) == 0;
}

int SymbolicMatrix::mismatches(const SymbolicMatrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) return rows_ * cols_ + 1;
  int count = 0;
  for (std::size_t k = 0; k < data_.size(); ++k) count += data_[k] == other.data_[k] ? 0 : 1;
  return count;
}

Eigen::MatrixXcd SymbolicMatrix::evaluate(const PeriodData& p) const {
  Eigen::MatrixXcd out(rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out(i, j) = (*this)(i, j).evaluate(p);
  }
  return out;
}

std::string SymbolicMatrix::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows_; ++i) {
    os << "[";
    for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
    os << "]\n";
  }
  return os.str();
}

}  // namespace abeltheta
