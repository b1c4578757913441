#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "lightcone/error.hpp"

namespace lightcone {

inline constexpr int kMaxHarmonicDegree = 4;

/// Orthonormal real spherical harmonic Y_lm (l <= 4) as a polynomial in the
/// Cartesian direction (x, y, z). T is double or Jet2. m < 0 selects the sine
/// family, m > 0 the cosine family.
template <typename T>
T real_spherical_harmonic(int l, int m, const T& x, const T& y, const T& z) {
  using std::sqrt;
  constexpr double pi = std::numbers::pi;
  switch (l) {
    case 0:
      if (m == 0) return T(0.5 * sqrt(1.0 / pi));
      break;
    case 1: {
      const double c = sqrt(3.0 / (4.0 * pi));
      if (m == -1) return c * y;
      if (m == 0) return c * z;
      if (m == 1) return c * x;
      break;
    }
    case 2: {
      if (m == -2) return 0.5 * sqrt(15.0 / pi) * (x * y);
      if (m == -1) return 0.5 * sqrt(15.0 / pi) * (y * z);
      if (m == 0) return 0.25 * sqrt(5.0 / pi) * (3.0 * (z * z) - 1.0);
      if (m == 1) return 0.5 * sqrt(15.0 / pi) * (x * z);
      if (m == 2) return 0.25 * sqrt(15.0 / pi) * (x * x - y * y);
      break;
    }
    case 3: {
      if (m == -3) return 0.25 * sqrt(35.0 / (2.0 * pi)) * (y * (3.0 * (x * x) - y * y));
      if (m == -2) return 0.5 * sqrt(105.0 / pi) * (x * y * z);
      if (m == -1) return 0.25 * sqrt(21.0 / (2.0 * pi)) * (y * (5.0 * (z * z) - 1.0));
      if (m == 0) return 0.25 * sqrt(7.0 / pi) * (5.0 * (z * z * z) - 3.0 * z);
      if (m == 1) return 0.25 * sqrt(21.0 / (2.0 * pi)) * (x * (5.0 * (z * z) - 1.0));
      if (m == 2) return 0.25 * sqrt(105.0 / pi) * ((x * x - y * y) * z);
      if (m == 3) return 0.25 * sqrt(35.0 / (2.0 * pi)) * (x * (x * x - 3.0 * (y * y)));
      break;
    }
    case 4: {
      const T x2 = x * x, y2 = y * y, z2 = z * z;
      if (m == -4) return 0.75 * sqrt(35.0 / pi) * (x * y * (x2 - y2));
      if (m == -3) return 0.75 * sqrt(35.0 / (2.0 * pi)) * (y * z * (3.0 * x2 - y2));
      if (m == -2) return 0.75 * sqrt(5.0 / pi) * (x * y * (7.0 * z2 - 1.0));
      if (m == -1) return 0.75 * sqrt(5.0 / (2.0 * pi)) * (y * z * (7.0 * z2 - 3.0));
      if (m == 0) return (3.0 / 16.0) * sqrt(1.0 / pi) * (35.0 * (z2 * z2) - 30.0 * z2 + 3.0);
      if (m == 1) return 0.75 * sqrt(5.0 / (2.0 * pi)) * (x * z * (7.0 * z2 - 3.0));
      if (m == 2) return (3.0 / 8.0) * sqrt(5.0 / pi) * ((x2 - y2) * (7.0 * z2 - 1.0));
      if (m == 3) return 0.75 * sqrt(35.0 / (2.0 * pi)) * (x * z * (x2 - 3.0 * y2));
      if (m == 4)
        return (3.0 / 16.0) * sqrt(35.0 / pi) * (x2 * (x2 - 3.0 * y2) - y2 * (3.0 * x2 - y2));
      break;
    }
    default:
      break;
  }
  throw GeometryError(ErrorCode::InvalidArgument,
                      "spherical harmonic (" + std::to_string(l) + "," + std::to_string(m) +
                          ") outside 0 <= |m| <= l <= 4");
}

struct HarmonicTerm {
  int l = 0;
  int m = 0;
  double amplitude = 0.0;

  friend bool operator==(const HarmonicTerm&, const HarmonicTerm&) = default;
};

/// sigma = sum amplitude * Y_lm on the unit sphere.
struct HarmonicSpec {
  std::vector<HarmonicTerm> terms;

  int max_degree() const;
  /// Throws InvalidArgument for degrees above 4, |m| > l or non-finite amplitudes.
  void validate() const;

  template <typename T>
  T evaluate(const T& x, const T& y, const T& z) const {
    T sum(0.0);
    for (const auto& t : terms)
      if (t.amplitude != 0.0) sum += t.amplitude * real_spherical_harmonic(t.l, t.m, x, y, z);
    return sum;
  }

  friend bool operator==(const HarmonicSpec&, const HarmonicSpec&) = default;
};

/// JSON form: an array of [l, m, amplitude] triples.
HarmonicSpec parse_harmonic_spec(std::string_view json);
std::string to_json(const HarmonicSpec& spec);

}  // namespace lightcone
