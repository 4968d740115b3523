#pragma once

#include <string>
#include <vector>

#include "gielab/constants.hpp"

namespace gielab::dressing {

/// Which characteristic frequency sets the equal-time commutator rate.
enum class FreqMode {
    RestEnergy,  ///< m c^2 / hbar (fast rest-energy phase retained)
    Kinetic,     ///< hbar / (2 m L^2) (wavepacket kinetic scale)
    Protocol,    ///< 1 / tau (protocol timescale)
};

std::string to_string(FreqMode mode);
FreqMode freq_mode_from_string(const std::string& name);

/// One evaluation point for the dressed-commutator figures of merit.
struct DressingPoint {
    double m = 0.0;    ///< kg
    double L = 0.0;    ///< wavepacket width, m
    double tau = 0.0;  ///< protocol time, s
    FreqMode freq_mode = FreqMode::RestEnergy;
    PhysicalConstants constants;

    void validate() const;  ///< all strictly positive
};

/// Equal-time spacelike commutator magnitude relative to the local field
/// amplitudes: G m / (c^2 L). Dimensionless.
double ratio_spacelike(const DressingPoint& p);

/// Selected characteristic frequency, 1/s.
double frequency(const DressingPoint& p);

/// Field/field-velocity commutator rate: ratio_spacelike * frequency, 1/s.
/// Exactly the product of the other two figures (no separate rounding).
double rate_equal_time(const DressingPoint& p);

/// Dimensionless figure of merit eps(tau) = tau * rate_equal_time.
double epsilon(const DressingPoint& p);

struct SweepGrid {
    std::vector<double> masses;   ///< kg
    std::vector<double> lengths;  ///< m
    std::vector<double> taus;     ///< s
    std::vector<FreqMode> modes;
};

struct SweepRow {
    double m = 0.0, L = 0.0, tau = 0.0;
    FreqMode mode = FreqMode::RestEnergy;
    double ratio = 0.0, freq = 0.0, rate = 0.0, eps = 0.0;
};

/// All four figures on the grid, rows ordered lexicographically in
/// (mass, length, tau, mode) grid indices.
std::vector<SweepRow> sweep(const SweepGrid& grid, const PhysicalConstants& constants = {});

}  // namespace gielab::dressing
