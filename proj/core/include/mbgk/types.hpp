#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mbgk {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

/// Physical parameters of one particle species.
struct Species {
    double mass = 1.0;       ///< g, or code units
    int charge_number = 0;   ///< Z, ignored by the power-law frequency family
    std::string name;

    void validate() const;
    bool operator==(const Species&) const = default;
};

/// Raised for malformed input: bad shapes, non-physical parameters, unknown presets.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical solve cannot meet its contract.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual = NAN, int iterations = 0, long cell = -1)
        : std::runtime_error(what), residual_(residual), iterations_(iterations), cell_(cell) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }
    long cell() const noexcept { return cell_; }

private:
    double residual_;
    int iterations_;
    long cell_;
};

/// Raised on file-system failures while reading or writing run data.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace constants {
/// erg per eV.
inline constexpr double kB = 1.602e-12;
/// Squared elementary charge in eV*cm.
inline constexpr double e2_eV_cm = 1.44e-7;
/// Squared elementary charge in erg*cm.
inline constexpr double e2_erg_cm = e2_eV_cm * kB;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

}  // namespace mbgk
