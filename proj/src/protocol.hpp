#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pulses.hpp"
#include "trapdyn.hpp"

namespace polyion::protocol {

struct MoleculeRegister {
    int truth = 0;              // hidden state id
    std::vector<double> prior;  // population prior over table states
    std::mt19937_64 rng;

    MoleculeRegister() = default;
    MoleculeRegister(int truth_, std::vector<double> prior_, std::uint64_t seed)
        : truth(truth_), prior(std::move(prior_)), rng(seed) {}
    // draw the hidden truth from the prior
    static MoleculeRegister from_prior(std::vector<double> prior, std::uint64_t seed);
};

struct SubspaceQuery {
    std::vector<int> members;                      // state ids, non-empty
    std::vector<std::pair<int, int>> drive_plan;   // flip pairs covering the set

    void validate() const;  // throws if empty or the mixing graph is disconnected
    bool contains(int id) const;
    // chain plan i1-i2, i2-i3, ...
    static SubspaceQuery over(std::vector<int> members);
};

struct Thermometer {
    double threshold_T = 0.0;     // K
    double false_positive = 0.0;
    double false_negative = 0.0;

    void validate() const;
};

enum class Outcome { not_heated, heated };

struct MeasurementRecord {
    std::vector<int> query_ids;
    Outcome outcome = Outcome::not_heated;
    int post_state = 0;
    double elapsed = 0.0;  // s, model wall time
};

// wall-clock model per measurement: cool + drive + readout
inline constexpr double measurement_model_time = 10e-3;  // s

// Dynamics-backed measurement context for `full` mode.
struct FullModelContext {
    trapdyn::TrapConfig trap;
    trapdyn::IntegrateOptions integrate;  // potentials[0]=lo, potentials[1]=hi
    double T_init = 0.0;                  // K
    double readout_window = 0.0;          // s
    std::uint64_t seed = 0;
};

MeasurementRecord measure_subspace(MoleculeRegister& reg, const SubspaceQuery& q,
                                   const Thermometer& th);
MeasurementRecord measure_subspace_full(MoleculeRegister& reg, const SubspaceQuery& q,
                                        const Thermometer& th, const FullModelContext& ctx);

struct SearchResult {
    bool success = false;
    int state = -1;                  // identified state (the register's final truth)
    std::vector<int> surviving;      // candidate set at termination
    std::vector<MeasurementRecord> records;
};

// Adaptive halving over the thermally occupied candidate set.  vote_factor
// repeats each membership query and takes the majority.
SearchResult binary_search_state(MoleculeRegister& reg, std::vector<int> candidates,
                                 const Thermometer& th, int max_steps, int vote_factor = 1);

struct PrepareResult {
    bool success = false;
    int rounds = 0;
    std::vector<MeasurementRecord> records;
};

// Heralded preparation of target B via a bridge pair (A in manifold, B outside).
PrepareResult prepare_state(MoleculeRegister& reg, const SubspaceQuery& manifold, int bridge_a,
                            int target_b, const Thermometer& th, int max_rounds);

// OR-mode measurement over several co-trapped molecules.
MeasurementRecord ensemble_measure(std::vector<MoleculeRegister>& regs, const SubspaceQuery& q,
                                   const Thermometer& th, std::uint64_t seed);

struct ScanPulse {
    enum class Kind { rabi, ramsey } kind = Kind::rabi;
    double rabi = 0.0;        // rad/s
    double pulse_time = 0.0;  // s (pi-pulse for rabi, pi/2 for ramsey)
    double free_time = 0.0;   // s, ramsey only
};

struct ScanPoint {
    double detuning = 0.0;  // rad/s
    double transfer_prob = 0.0;
};

// Transfer probability vs detuning for a prepared state driven to a
// destination, read through the classifier response.
std::vector<ScanPoint> spectroscopy_scan(const ScanPulse& pulse, const Thermometer& th,
                                         const std::vector<double>& detunings);

}  // namespace polyion::protocol
