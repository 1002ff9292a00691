#pragma once

// Tower-represented nonnegative magnitudes for escape estimates whose growth
// is doubly (and triply...) exponential.  A Magnitude stores (level, v) and
// denotes the value exp^level(v) -- v itself at level 0, e^v at level 1,
// e^(e^v) at level 2, and so on.  The canonical form keeps
//
//     level == 0  =>  0 <= v <= 709
//     level >= 1  =>  log(709) < v <= 709
//
// so distinct canonical pairs order lexicographically by (level, v) exactly
// as the denoted values do.  Additive terms and scalar factors vanish below
// double resolution once the denoted value passes e^709; the chain maps here
// apply identical recursions to whole chains, so strict dominance established
// while values are representable is preserved upward by monotonicity.

#include <cmath>
#include <compare>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "sindyn/constants.hpp"

namespace sindyn {

class Magnitude {
 public:
  Magnitude() : level_(0), v_(0.0) {}

  [[nodiscard]] static Magnitude from_value(double x) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw std::domain_error("Magnitude: value must be finite and >= 0");
    }
    return canonical(0, x);
  }

  // the value e^lx (lx may be any finite double)
  [[nodiscard]] static Magnitude from_log(double lx) {
    if (!std::isfinite(lx)) throw std::domain_error("Magnitude: non-finite log");
    if (lx < kDemoteLog) return canonical(0, std::exp(lx));
    return canonical(1, lx);
  }

  [[nodiscard]] int level() const { return level_; }
  [[nodiscard]] double inner() const { return v_; }

  // denoted value as a double; +inf once it exceeds double range
  [[nodiscard]] double value() const {
    if (level_ == 0) return v_;
    if (level_ == 1) return std::exp(v_);
    return HUGE_VAL;
  }

  // natural log of the denoted value; +inf once the log itself overflows
  [[nodiscard]] double log_value() const {
    if (level_ == 0) return std::log(v_);
    if (level_ == 1) return v_;
    if (level_ == 2) return std::exp(v_);
    return HUGE_VAL;
  }

  // L * cosh(X) for L > 0
  [[nodiscard]] Magnitude scale_cosh(double L) const {
    require_positive(L, "scale_cosh");
    if (level_ == 0) {
      const double t = L * std::cosh(v_);
      if (std::isfinite(t)) return from_value(t);
      return from_log(std::log(L) + log_cosh(v_));
    }
    // X > 709: L*cosh(X) = (L/2)*e^X up to a relative e^(-2X) correction,
    // far below double resolution; the result's log is X + log(L/2).
    return exp_of(add_signed(std::log(0.5 * L)));
  }

  // L * sinh(X) - c for L > 0, c >= 0 (the subtraction must stay positive)
  [[nodiscard]] Magnitude scale_sinh_minus(double L, double c) const {
    require_positive(L, "scale_sinh_minus");
    if (c < 0.0 || !std::isfinite(c)) {
      throw std::domain_error("Magnitude: subtrahend must be finite and >= 0");
    }
    if (level_ == 0) {
      const double t = L * std::sinh(v_) - c;
      if (std::isfinite(t)) {
        if (t < 0.0) throw std::domain_error("Magnitude: L*sinh(x) - c went negative");
        return from_value(t);
      }
      const double lsv = std::log(L) + log_sinh(v_);
      const double ratio = c > 0.0 ? std::exp(std::log(c) - lsv) : 0.0;
      if (ratio >= 1.0) throw std::domain_error("Magnitude: L*sinh(x) - c went negative");
      return from_log(lsv + std::log1p(-ratio));
    }
    // sinh and cosh agree beyond double resolution out here, and c vanishes
    return exp_of(log_magnitude().add_signed(std::log(0.5 * L)));
  }

  // X^2
  [[nodiscard]] Magnitude square() const {
    if (level_ == 0) {
      const double t = v_ * v_;
      if (std::isfinite(t)) return from_value(t);
      return from_log(2.0 * std::log(v_));
    }
    return exp_of(log_magnitude().scale(2.0));
  }

  // square root of X
  [[nodiscard]] Magnitude sqrt() const {
    if (level_ == 0) return from_value(std::sqrt(v_));
    return exp_of(log_magnitude().scale(0.5));
  }

  // X + c for c of either sign; |c| must stay below the denoted value
  [[nodiscard]] Magnitude offset(double c) const {
    if (!std::isfinite(c)) throw std::domain_error("Magnitude: non-finite offset");
    return add_signed(c);
  }

  // k * X for k > 0
  [[nodiscard]] Magnitude scale(double k) const {
    require_positive(k, "scale");
    if (level_ == 0) {
      const double t = k * v_;
      if (std::isfinite(t)) return from_value(t);
      return from_log(std::log(k) + std::log(v_));
    }
    if (level_ == 1) return from_log(v_ + std::log(k));
    return *this;  // scalar factors vanish at this height
  }

  // X + c for c >= 0
  [[nodiscard]] Magnitude add(double c) const {
    if (c < 0.0 || !std::isfinite(c)) {
      throw std::domain_error("Magnitude: addend must be finite and >= 0");
    }
    return add_signed(c);
  }

  [[nodiscard]] std::strong_ordering operator<=>(const Magnitude& o) const {
    if (level_ != o.level_) return level_ <=> o.level_;
    if (v_ < o.v_) return std::strong_ordering::less;
    if (v_ > o.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  [[nodiscard]] bool operator==(const Magnitude& o) const {
    return level_ == o.level_ && v_ == o.v_;
  }

  // short human-readable form for reports: plain number while the value is
  // an ordinary double, otherwise the tower "exp^k(v)"
  [[nodiscard]] std::string describe() const {
    char buf[64];
    if (level_ <= 1) {
      std::snprintf(buf, sizeof buf, "%.17g", value());
    } else {
      std::snprintf(buf, sizeof buf, "exp^%d(%.17g)", level_, v_);
    }
    return buf;
  }

 private:
  static constexpr double kDemoteLog = 6.564265196154254;  // log(709)

  int level_;
  double v_;

  Magnitude(int level, double v) : level_(level), v_(v) {}

  static void require_positive(double x, const char* where) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw std::domain_error(std::string("Magnitude::") + where +
                              ": factor must be finite and > 0");
    }
  }

  [[nodiscard]] static Magnitude canonical(int level, double v) {
    while (v > kSinhArgLimit) {
      v = std::log(v);
      ++level;
    }
    while (level >= 1 && v <= kDemoteLog) {
      v = std::exp(v);
      --level;
    }
    if (level == 0 && v < 0.0) {
      throw std::domain_error("Magnitude: negative value");
    }
    return Magnitude(level, v);
  }

  // log of the denoted value, as a Magnitude (requires level >= 1)
  [[nodiscard]] Magnitude log_magnitude() const { return canonical(level_ - 1, v_); }

  [[nodiscard]] static Magnitude exp_of(const Magnitude& m) {
    return canonical(m.level_ + 1, m.v_);
  }

  // X + c where c may be negative but |c| stays far below the denoted value
  [[nodiscard]] Magnitude add_signed(double c) const {
    if (level_ == 0) {
      const double t = v_ + c;
      if (t < 0.0) throw std::domain_error("Magnitude: addition went negative");
      return from_value(t);
    }
    if (level_ == 1) {
      // value + c = e^v * (1 + c*e^-v)
      const double corr = std::log1p(c * std::exp(-v_));
      return canonical(1, v_ + corr);
    }
    return *this;  // additive terms vanish at this height
  }

  static double log_cosh(double x) {
    // x >= 0: log(cosh x) = x + log1p(e^(-2x)) - log 2
    return x + std::log1p(std::exp(-2.0 * x)) - 0.6931471805599453;
  }
  static double log_sinh(double x) {
    // x > 0: log(sinh x) = x + log1p(-e^(-2x)) - log 2
    return x + std::log1p(-std::exp(-2.0 * x)) - 0.6931471805599453;
  }
};

}  // namespace sindyn
