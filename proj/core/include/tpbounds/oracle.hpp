#pragma once

#include "tpbounds/bounds.hpp"
#include "tpbounds/rational.hpp"
#include "tpbounds/study.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace tpb {

// The four deterministic unit behaviors under binary treatment/outcome.
enum class ResponseType : int {
    Benefit = 0, // recovers iff treated
    Harm = 1,    // recovers iff untreated
    Always = 2,  // recovers either way
    Doomed = 3,  // recovers neither way
};

const char* response_type_name(ResponseType type);

// Latent joint over response type x treatment choice: eight probability
// cells q[type][choice], choice 0 = chooses treatment, 1 = avoids it.
// Everything observable is a linear functional of these cells.
struct ResponseTypeDistribution {
    // Cell layout: index = 2 * type + choice.
    std::array<Rat, 8> cells{};

    static constexpr int index(ResponseType type, bool chooses_treatment) {
        return 2 * static_cast<int>(type) + (chooses_treatment ? 0 : 1);
    }

    Rat cell(ResponseType type, bool chooses_treatment) const {
        return cells[static_cast<std::size_t>(index(type, chooses_treatment))];
    }

    Rat type_mass(ResponseType type) const {
        const int i = 2 * static_cast<int>(type);
        return cells[static_cast<std::size_t>(i)] + cells[static_cast<std::size_t>(i + 1)];
    }

    // All cells >= 0 and summing to 1.
    void validate() const;
};

// The observables a distribution induces; conditionals are absent when the
// conditioning mass is zero.
struct InducedObservables {
    Rat benefit;
    Rat harm;
    Rat p_yt;
    Rat p_yc;
    Rat p_t;
    std::optional<Rat> p_y_given_t;
    std::optional<Rat> p_y_given_c;

    StudyProbabilities study() const;
};

struct LinearEquality {
    std::string name;
    std::array<int, 8> coefficients;
    Rat rhs;
};

// q >= 0 (eight cells), the listed equalities, and the optimization target.
struct ConstraintSystem {
    std::vector<LinearEquality> equalities;
    CausalTarget target = CausalTarget::Benefit;

    static constexpr int nonnegativity_count = 8;
};

// Equalities for the scope: sum-to-1 always; Combined matches all five
// observables, ExperimentalOnly only P(y_t) and P(y_c), ObservationalOnly
// only P(t), P(t,y), P(c,y). Conditionals enter via the joint cells, which
// are zero for an empty arm.
ConstraintSystem build_polytope(const StudyProbabilities& p, EvidenceScope scope,
                                CausalTarget target = CausalTarget::Benefit);

struct OracleResult {
    Interval bounds;
    // Witness distributions attaining each endpoint.
    ResponseTypeDistribution lower_witness;
    ResponseTypeDistribution upper_witness;
    // Every vertex of the polytope, sorted lexicographically by cell values.
    std::vector<ResponseTypeDistribution> vertices;
};

// Exact [min, max] of the target mass over the polytope, by enumeration of
// basic feasible solutions in rational arithmetic. Throws
// Error(EmptyPolytope) if the constraints admit no distribution.
OracleResult oracle_bounds(const StudyProbabilities& p, EvidenceScope scope,
                           CausalTarget target);

// Exact observables and latent masses induced by a distribution.
InducedObservables pns_of(const ResponseTypeDistribution& d);

// Whether the Combined polytope is nonempty. Decided by the same vertex
// enumeration, independently of the closed-form compatibility inequalities.
bool feasible(const StudyProbabilities& p);

} // namespace tpb
