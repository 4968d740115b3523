#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gielab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// The ten release criteria with their tolerances pinned in code. Each runs
// standalone; run_all executes them in order. All randomness derives from the
// master seed, so a given seed reproduces the battery bit for bit.
CriterionResult criterion_sos_certificate(std::uint64_t seed, unsigned jobs);
CriterionResult criterion_tsirelson_ceiling(std::uint64_t seed, unsigned jobs);
CriterionResult criterion_entanglement_criterion(std::uint64_t seed);
CriterionResult criterion_tripartite_consistency(std::uint64_t seed);
CriterionResult criterion_newtonian_limit();
CriterionResult criterion_dressing_figures();
CriterionResult criterion_nosignal_forward(std::uint64_t seed, unsigned jobs);
CriterionResult criterion_signalling_witnesses(std::uint64_t seed);
CriterionResult criterion_restricted_coexistence(std::uint64_t seed);
CriterionResult criterion_algebra_toolkit(std::uint64_t seed);

std::vector<CriterionResult> run_all(std::uint64_t seed = 0, unsigned jobs = 1);

}  // namespace gielab::acceptance
