#include "gielab/dressing.hpp"

#include "gielab/errors.hpp"

namespace gielab::dressing {

std::string to_string(FreqMode mode) {
    switch (mode) {
        case FreqMode::RestEnergy: return "rest_energy";
        case FreqMode::Kinetic: return "kinetic";
        case FreqMode::Protocol: return "protocol";
    }
    return "rest_energy";
}

FreqMode freq_mode_from_string(const std::string& name) {
    if (name == "rest_energy") return FreqMode::RestEnergy;
    if (name == "kinetic") return FreqMode::Kinetic;
    if (name == "protocol") return FreqMode::Protocol;
    throw ConfigError("unknown frequency mode '" + name +
                      "' (expected rest_energy, kinetic or protocol)");
}

void DressingPoint::validate() const {
    if (!(m > 0.0) || !(L > 0.0) || !(tau > 0.0)) {
        throw ContractError("DressingPoint: m, L and tau must be strictly positive");
    }
}

double ratio_spacelike(const DressingPoint& p) {
    p.validate();
    return p.constants.G * p.m / (p.constants.c * p.constants.c * p.L);
}

double frequency(const DressingPoint& p) {
    p.validate();
    switch (p.freq_mode) {
        case FreqMode::RestEnergy:
            return p.m * p.constants.c * p.constants.c / p.constants.hbar;
        case FreqMode::Kinetic:
            return p.constants.hbar / (2.0 * p.m * p.L * p.L);
        case FreqMode::Protocol:
            return 1.0 / p.tau;
    }
    throw ContractError("frequency: unknown mode");
}

double rate_equal_time(const DressingPoint& p) { return ratio_spacelike(p) * frequency(p); }

double epsilon(const DressingPoint& p) { return p.tau * rate_equal_time(p); }

std::vector<SweepRow> sweep(const SweepGrid& grid, const PhysicalConstants& constants) {
    if (grid.masses.empty() || grid.lengths.empty() || grid.taus.empty() || grid.modes.empty()) {
        throw ConfigError("dressing sweep: all grid axes must be nonempty");
    }
    std::vector<SweepRow> rows;
    rows.reserve(grid.masses.size() * grid.lengths.size() * grid.taus.size() * grid.modes.size());
    for (double m : grid.masses) {
        for (double L : grid.lengths) {
            for (double tau : grid.taus) {
                for (FreqMode mode : grid.modes) {
                    DressingPoint p{m, L, tau, mode, constants};
                    SweepRow row;
                    row.m = m;
                    row.L = L;
                    row.tau = tau;
                    row.mode = mode;
                    row.ratio = ratio_spacelike(p);
                    row.freq = frequency(p);
                    row.rate = rate_equal_time(p);
                    row.eps = epsilon(p);
                    rows.push_back(row);
                }
            }
        }
    }
    return rows;
}

}  // namespace gielab::dressing
