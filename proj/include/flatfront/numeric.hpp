#pragma once

// Small complex-linear-algebra kit shared by all modules: 2x2 complex
// matrices, points of the Riemann sphere in homogeneous coordinates, and
// Moebius transformations acting on them.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace flatfront {

using Complex = std::complex<double>;

constexpr double kPi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

// Base class so the CLI can map failures to its exit-code contract.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameters / arguments outside an operation's domain.
struct ParameterError : Error {
    using Error::Error;
};

// Evaluation at a pole or essential singularity of the requested quantity.
struct PoleError : Error {
    using Error::Error;
};

// Iteration or series failed to converge.
struct ConvergenceError : Error {
    using Error::Error;
};

// Path planning / continuation constraint violations.
struct PathError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// 2x2 complex matrices
// ---------------------------------------------------------------------------

struct Mat2 {
    Complex a11{}, a12{}, a21{}, a22{};

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    Complex det() const { return a11 * a22 - a12 * a21; }
    Complex trace() const { return a11 + a22; }

    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator*(Complex s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }

    // Inverse via the adjugate; caller guarantees det != 0.
    Mat2 inverse() const {
        Complex d = det();
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    Mat2 conj_transpose() const {
        return {std::conj(a11), std::conj(a21), std::conj(a12), std::conj(a22)};
    }

    double max_abs() const {
        return std::max(std::max(std::abs(a11), std::abs(a12)),
                        std::max(std::abs(a21), std::abs(a22)));
    }
};

inline Mat2 operator*(Complex s, const Mat2& m) { return m * s; }

// Square root with deterministic branch: nonnegative real part, ties broken
// toward nonnegative imaginary part.
inline Complex sqrt_principal_positive(Complex z) {
    Complex s = std::sqrt(z);
    if (s.real() < 0.0 || (s.real() == 0.0 && s.imag() < 0.0)) s = -s;
    return s;
}

// ---------------------------------------------------------------------------
// Riemann sphere points in homogeneous coordinates [num : den]
// ---------------------------------------------------------------------------

struct ProjectivePoint {
    Complex num{0.0};
    Complex den{1.0};

    static ProjectivePoint infinity() { return {1.0, 0.0}; }
    static ProjectivePoint from_value(Complex z) { return {z, 1.0}; }

    bool is_infinite() const {
        return std::abs(den) == 0.0 ||
               (std::isfinite(std::abs(num)) && !std::isfinite(std::abs(num / den)));
    }

    // Affine value; +inf real part encodes the point at infinity.
    Complex value() const {
        if (std::abs(den) == 0.0)
            return {std::numeric_limits<double>::infinity(), 0.0};
        return num / den;
    }

    // Rescale so the larger coordinate has modulus one.
    ProjectivePoint normalized() const {
        double m = std::max(std::abs(num), std::abs(den));
        if (m == 0.0) return *this;
        return {num / m, den / m};
    }
};

// Chordal distance on the sphere of diameter two (matches the Euclidean
// distance of the stereographic images on the unit sphere).
inline double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    double np = std::hypot(std::abs(p.num), std::abs(p.den));
    double nq = std::hypot(std::abs(q.num), std::abs(q.den));
    return 2.0 * std::abs(p.num * q.den - q.num * p.den) / (np * nq);
}

inline double chordal_distance(Complex a, Complex b) {
    return chordal_distance(ProjectivePoint::from_value(a), ProjectivePoint::from_value(b));
}

// ---------------------------------------------------------------------------
// Moebius transformations
// ---------------------------------------------------------------------------

class Mobius {
  public:
    Mobius() : m_(Mat2::identity()) {}
    explicit Mobius(const Mat2& m) : m_(m) {}

    const Mat2& matrix() const { return m_; }

    ProjectivePoint apply(const ProjectivePoint& p) const {
        return ProjectivePoint{m_.a11 * p.num + m_.a12 * p.den,
                               m_.a21 * p.num + m_.a22 * p.den}
            .normalized();
    }
    Complex apply(Complex z) const { return apply(ProjectivePoint::from_value(z)).value(); }

    Mobius compose(const Mobius& inner) const { return Mobius(m_ * inner.m_); }
    Mobius inverse() const {
        return Mobius({m_.a22, -m_.a12, -m_.a21, m_.a11});
    }

    // The unique Moebius map sending (p1, p2, p3) to (0, 1, inf).
    static Mobius to_zero_one_inf(const ProjectivePoint& p1, const ProjectivePoint& p2,
                                  const ProjectivePoint& p3) {
        Complex s23 = p3.den * p2.num - p3.num * p2.den;
        Complex s21 = p1.den * p2.num - p1.num * p2.den;
        Mat2 m{p1.den * s23, -p1.num * s23, p3.den * s21, -p3.num * s21};
        if (m.max_abs() == 0.0) throw ParameterError("moebius: three points must be distinct");
        return Mobius(m * (1.0 / m.max_abs()));
    }

    static Mobius three_points(const ProjectivePoint& p1, const ProjectivePoint& p2,
                               const ProjectivePoint& p3, const ProjectivePoint& q1,
                               const ProjectivePoint& q2, const ProjectivePoint& q3) {
        return to_zero_one_inf(q1, q2, q3).inverse().compose(to_zero_one_inf(p1, p2, p3));
    }

  private:
    Mat2 m_;
};

}  // namespace flatfront
