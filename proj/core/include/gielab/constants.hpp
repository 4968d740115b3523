#pragma once

namespace gielab {

inline constexpr double kPi = 3.14159265358979323846;

/// Pinned physical constants (CODATA-rounded). All modules share one set so
/// that cross-module checks are exact rather than approximate.
struct PhysicalConstants {
    double G = 6.674e-11;     ///< gravitational constant, m^3 kg^-1 s^-2
    double c = 2.998e8;       ///< speed of light, m/s
    double hbar = 1.055e-34;  ///< reduced Planck constant, J s

    /// Graviton coupling normalization kappa^2 = 32 pi G. Derived, so the
    /// ratio kappa^2/G is exact by construction.
    double kappa_sq() const { return 32.0 * kPi * G; }
};

}  // namespace gielab
