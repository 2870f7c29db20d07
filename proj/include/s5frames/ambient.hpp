#pragma once

// Complex-linear algebra of C^3 and the unit sphere S^5.

#include <array>
#include <cmath>
#include <complex>

namespace s5frames {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

struct ComplexVec3 {
    std::array<cplx, 3> c{};

    constexpr ComplexVec3() = default;
    constexpr ComplexVec3(cplx c0, cplx c1, cplx c2) : c{c0, c1, c2} {}

    constexpr cplx& operator[](std::size_t k) { return c[k]; }
    constexpr const cplx& operator[](std::size_t k) const { return c[k]; }

    ComplexVec3& operator+=(const ComplexVec3& o) {
        for (std::size_t k = 0; k < 3; ++k) c[k] += o.c[k];
        return *this;
    }
    ComplexVec3& operator-=(const ComplexVec3& o) {
        for (std::size_t k = 0; k < 3; ++k) c[k] -= o.c[k];
        return *this;
    }
    ComplexVec3& operator*=(double s) {
        for (auto& z : c) z *= s;
        return *this;
    }
    ComplexVec3& operator*=(cplx s) {
        for (auto& z : c) z *= s;
        return *this;
    }
};

inline ComplexVec3 operator+(ComplexVec3 a, const ComplexVec3& b) { return a += b; }
inline ComplexVec3 operator-(ComplexVec3 a, const ComplexVec3& b) { return a -= b; }
inline ComplexVec3 operator-(ComplexVec3 a) { return a *= -1.0; }
inline ComplexVec3 operator*(double s, ComplexVec3 a) { return a *= s; }
inline ComplexVec3 operator*(ComplexVec3 a, double s) { return a *= s; }
inline ComplexVec3 operator*(cplx s, ComplexVec3 a) { return a *= s; }
inline ComplexVec3 operator/(ComplexVec3 a, double s) { return a *= (1.0 / s); }

/// (z, w) = sum_j z^j conj(w^j)
inline cplx hermitian_product(const ComplexVec3& z, const ComplexVec3& w) {
    return z[0] * std::conj(w[0]) + z[1] * std::conj(w[1]) + z[2] * std::conj(w[2]);
}

/// <z, w> = Re (z, w); the Euclidean product of C^3 viewed as R^6.
inline double real_inner(const ComplexVec3& z, const ComplexVec3& w) {
    double s = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
        s += z[k].real() * w[k].real() + z[k].imag() * w[k].imag();
    return s;
}

inline double norm(const ComplexVec3& z) { return std::sqrt(real_inner(z, z)); }

inline ComplexVec3 normalized(const ComplexVec3& z) { return z / norm(z); }

/// Multiplication by i, the complex structure of C^3.
inline ComplexVec3 j_multiply(const ComplexVec3& w) {
    return {cplx(-w[0].imag(), w[0].real()), cplx(-w[1].imag(), w[1].real()),
            cplx(-w[2].imag(), w[2].real())};
}

/// A point of S^5. Construction renormalizes, so |z| = 1 up to rounding.
class SpherePoint {
public:
    SpherePoint() : z_{1.0, 0.0, 0.0} {}
    explicit SpherePoint(const ComplexVec3& z) : z_(normalized(z)) {}

    const ComplexVec3& z() const noexcept { return z_; }
    operator const ComplexVec3&() const noexcept { return z_; }

private:
    ComplexVec3 z_;
};

/// Reeb field xi(z) = i z.
inline ComplexVec3 reeb(const SpherePoint& z) { return j_multiply(z.z()); }

/// Orthogonal projection of w onto T_z S^5.
inline ComplexVec3 tangent_project(const SpherePoint& z, const ComplexVec3& w) {
    return w - real_inner(w, z.z()) * z.z();
}

/// Projection of a sphere-tangent w onto the contact plane at z.
inline ComplexVec3 contact_project(const SpherePoint& z, const ComplexVec3& w) {
    const ComplexVec3 xi = reeb(z);
    return w - real_inner(w, xi) * xi;
}

} // namespace s5frames
