#ifndef BSQUAD_PARAMS_HPP
#define BSQUAD_PARAMS_HPP

#include <algorithm>
#include <cmath>
#include <compare>
#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bsquad {

/// Raised for parameter sets outside the admissible domain.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a function is evaluated where it is singular or undefined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an iterative solver exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact value n/2 with n an integer.
///
/// The half-degree d_eps = (d - eps_plus - eps_minus)/2 selects branches in
/// the basis, the weights and the Jacobi matrix, so it is never rounded to a
/// float.  Comparisons against integers are exact.
class HalfInteger {
 public:
  constexpr HalfInteger() = default;

  static constexpr HalfInteger from_twice(int twice) {
    HalfInteger h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }

  constexpr int ceil() const { return twice_ >= 0 ? (twice_ + 1) / 2 : -((-twice_) / 2); }
  constexpr int floor() const { return twice_ >= 0 ? twice_ / 2 : -((-twice_ + 1) / 2); }

  template <typename Scalar = double>
  constexpr Scalar value() const {
    return Scalar(twice_) / Scalar(2);
  }

  friend constexpr HalfInteger operator+(HalfInteger a, HalfInteger b) {
    return from_twice(a.twice_ + b.twice_);
  }
  friend constexpr HalfInteger operator-(HalfInteger a, HalfInteger b) {
    return from_twice(a.twice_ - b.twice_);
  }
  friend constexpr HalfInteger operator-(int l, HalfInteger h) { return from_twice(2 * l - h.twice_); }

  friend constexpr bool operator==(HalfInteger, HalfInteger) = default;
  friend constexpr auto operator<=>(HalfInteger, HalfInteger) = default;
  friend constexpr bool operator==(HalfInteger h, int l) { return h.twice_ == 2 * l; }
  friend constexpr std::strong_ordering operator<=>(HalfInteger h, int l) { return h.twice_ <=> 2 * l; }

  std::string to_string() const {
    return is_integer() ? std::to_string(twice_ / 2) : std::to_string(twice_) + "/2";
  }

 private:
  int twice_ = 0;
};

/// One Bernstein-Szego parameter set: the Chebyshev flags and the poles alpha.
///
/// Invariants (enforced by the constructor): eps flags in {0,1},
/// 0 < |alpha_r| < 1, and non-real alphas come in exact conjugate pairs.
template <typename Scalar = double>
class BSFamily {
 public:
  using RealScalar = Scalar;
  using Complex = std::complex<Scalar>;

  BSFamily() : BSFamily(0, 0, {}) {}

  BSFamily(int eps_plus, int eps_minus, std::vector<Complex> alpha)
      : eps_plus_(eps_plus), eps_minus_(eps_minus), alpha_(std::move(alpha)) {
    if (eps_plus_ != 0 && eps_plus_ != 1)
      throw ParameterError("eps_plus must be 0 or 1, got " + std::to_string(eps_plus_));
    if (eps_minus_ != 0 && eps_minus_ != 1)
      throw ParameterError("eps_minus must be 0 or 1, got " + std::to_string(eps_minus_));

    for (std::size_t r = 0; r < alpha_.size(); ++r) {
      const Complex& a = alpha_[r];
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw ParameterError("alpha[" + std::to_string(r) + "] is not finite");
      const Scalar mod = std::abs(a);
      if (mod == Scalar(0))
        throw ParameterError("alpha[" + std::to_string(r) + "] = 0; omit the factor instead");
      if (!(mod < Scalar(1)))
        throw ParameterError("alpha[" + std::to_string(r) + "] has modulus >= 1");
    }
    // Exact conjugate matching: count(a) == count(conj(a)) for non-real a.
    for (std::size_t r = 0; r < alpha_.size(); ++r) {
      const Complex& a = alpha_[r];
      if (a.imag() == Scalar(0)) continue;
      const auto same = std::count(alpha_.begin(), alpha_.end(), a);
      const auto conj = std::count(alpha_.begin(), alpha_.end(), std::conj(a));
      if (same != conj) {
        std::ostringstream os;
        os << "alpha[" << r << "] = (" << a.real() << "," << a.imag()
           << ") has no exact complex-conjugate partner";
        throw ParameterError(os.str());
      }
    }
    d_eps_ = HalfInteger::from_twice(degree() - eps_plus_ - eps_minus_);
  }

  int eps_plus() const { return eps_plus_; }
  int eps_minus() const { return eps_minus_; }
  const std::vector<Complex>& alpha() const { return alpha_; }
  int degree() const { return static_cast<int>(alpha_.size()); }
  HalfInteger d_eps() const { return d_eps_; }

  bool operator==(const BSFamily&) const = default;

 private:
  int eps_plus_ = 0;
  int eps_minus_ = 0;
  std::vector<Complex> alpha_;
  HalfInteger d_eps_;
};

template <typename Scalar = double>
BSFamily<Scalar> validate_family(int eps_plus, int eps_minus,
                                 std::vector<std::complex<Scalar>> alpha) {
  return BSFamily<Scalar>(eps_plus, eps_minus, std::move(alpha));
}

/// Real-parameter convenience overload.
template <typename Scalar = double>
BSFamily<Scalar> validate_family(int eps_plus, int eps_minus, const std::vector<Scalar>& alpha) {
  std::vector<std::complex<Scalar>> c(alpha.begin(), alpha.end());
  return BSFamily<Scalar>(eps_plus, eps_minus, std::move(c));
}

/// A pair of families glued on a grid of m+1 nodes.  m > ceil(d_eps) + ceil(d~_eps~).
template <typename Scalar = double>
class CompositeConfig {
 public:
  using Family = BSFamily<Scalar>;

  CompositeConfig(Family fam, Family fam_t, int m)
      : fam_(std::move(fam)), fam_t_(std::move(fam_t)), m_(m) {
    const int c = fam_.d_eps().ceil();
    const int ct = fam_t_.d_eps().ceil();
    if (m_ <= 0 || m_ <= c + ct) {
      std::ostringstream os;
      os << "grid size m = " << m_ << " must be positive and exceed ceil(d_eps) + ceil(d~_eps~) = "
         << c << " + " << ct << " = " << c + ct;
      throw ParameterError(os.str());
    }
  }

  const Family& fam() const { return fam_; }
  const Family& fam_t() const { return fam_t_; }
  int m() const { return m_; }

  /// d_eps + d~_eps~, exact.
  HalfInteger d_sum() const { return fam_.d_eps() + fam_t_.d_eps(); }

  /// 2(m - d_eps - d~_eps~), always an integer; the linear slope of the node equation.
  int slope() const { return 2 * m_ - d_sum().twice(); }

  int eps_minus_sum() const { return fam_.eps_minus() + fam_t_.eps_minus(); }
  int eps_plus_sum() const { return fam_.eps_plus() + fam_t_.eps_plus(); }

  /// Whether xi_0 = 0 / xi_m = pi are nodes.
  bool has_left_endpoint() const { return eps_minus_sum() == 0; }
  bool has_right_endpoint() const { return eps_plus_sum() == 0; }

  bool operator==(const CompositeConfig&) const = default;

 private:
  Family fam_;
  Family fam_t_;
  int m_;
};

template <typename Scalar>
CompositeConfig<Scalar> validate_pair(BSFamily<Scalar> fam, BSFamily<Scalar> fam_t, int m) {
  return CompositeConfig<Scalar>(std::move(fam), std::move(fam_t), m);
}

}  // namespace bsquad

#endif  // BSQUAD_PARAMS_HPP
