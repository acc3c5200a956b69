#include "tpbounds/oracle.hpp"

#include "tpbounds/error.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace tpb {

const char* response_type_name(ResponseType type) {
    switch (type) {
        case ResponseType::Benefit: return "benefit";
        case ResponseType::Harm: return "harm";
        case ResponseType::Always: return "always";
        case ResponseType::Doomed: return "doomed";
    }
    return "?";
}

void ResponseTypeDistribution::validate() const {
    Rat sum = 0;
    for (const auto& c : cells) {
        if (c < 0) raise(ErrorKind::ValueError, "negative cell: " + exact_string(c));
        sum += c;
    }
    if (sum != 1) raise(ErrorKind::ValueError, "cells sum to " + exact_string(sum) + ", not 1");
}

StudyProbabilities InducedObservables::study() const {
    StudyProbabilities p;
    p.p_yt = p_yt;
    p.p_yc = p_yc;
    p.p_t = p_t;
    p.p_y_given_t = p_y_given_t;
    p.p_y_given_c = p_y_given_c;
    return p;
}

namespace {

constexpr int kBenefitT = 0;
constexpr int kBenefitC = 1;
constexpr int kHarmT = 2;
constexpr int kHarmC = 3;
constexpr int kAlwaysT = 4;
constexpr int kAlwaysC = 5;
constexpr int kDoomedT = 6;
constexpr int kDoomedC = 7;

// q[b][.] + q[a][.]: units that recover when treated, etc.
constexpr std::array<int, 8> kRowSum{1, 1, 1, 1, 1, 1, 1, 1};
constexpr std::array<int, 8> kRowYt{1, 1, 0, 0, 1, 1, 0, 0};
constexpr std::array<int, 8> kRowYc{0, 0, 1, 1, 1, 1, 0, 0};
constexpr std::array<int, 8> kRowT{1, 0, 1, 0, 1, 0, 1, 0};
constexpr std::array<int, 8> kRowTy{1, 0, 0, 0, 1, 0, 0, 0};
constexpr std::array<int, 8> kRowCy{0, 0, 0, 1, 0, 1, 0, 0};

void require(bool present, const char* field) {
    if (!present) raise(ErrorKind::MissingField, std::string(field) + " required by scope");
}

// Basic feasible solutions of {q >= 0, Aq = b}: pick m linearly independent
// columns, solve, keep if nonnegative. The coefficient matrix is a fixed 0/1
// pattern per scope, so the basis inverses are computed once and cached by
// pattern; per input only an m-vector solve remains.
struct Basis {
    std::vector<int> columns;
    std::vector<std::vector<Rat>> inverse; // m x m
};

using RowPattern = std::vector<std::array<int, 8>>;

std::vector<Basis> enumerate_bases(const RowPattern& rows) {
    const std::size_t m = rows.size();
    std::vector<Basis> bases;

    std::vector<int> pick(m);
    // All m-subsets of the 8 columns, lexicographic.
    auto next_combination = [&](std::vector<int>& c) {
        int i = static_cast<int>(m) - 1;
        while (i >= 0 && c[static_cast<std::size_t>(i)] == 8 - static_cast<int>(m) + i) --i;
        if (i < 0) return false;
        ++c[static_cast<std::size_t>(i)];
        for (std::size_t j = static_cast<std::size_t>(i) + 1; j < m; ++j)
            c[j] = c[j - 1] + 1;
        return true;
    };
    for (std::size_t i = 0; i < m; ++i) pick[i] = static_cast<int>(i);

    do {
        // Gauss-Jordan on [A_B | I] to get the inverse, if nonsingular.
        std::vector<std::vector<Rat>> work(m, std::vector<Rat>(2 * m, 0));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c)
                work[r][c] = rows[r][static_cast<std::size_t>(pick[c])];
            work[r][m + r] = 1;
        }
        bool singular = false;
        for (std::size_t col = 0; col < m && !singular; ++col) {
            std::size_t pivot = col;
            while (pivot < m && work[pivot][col] == 0) ++pivot;
            if (pivot == m) {
                singular = true;
                break;
            }
            std::swap(work[pivot], work[col]);
            const Rat inv = 1 / work[col][col];
            for (std::size_t c = col; c < 2 * m; ++c) work[col][c] *= inv;
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col || work[r][col] == 0) continue;
                const Rat factor = work[r][col];
                for (std::size_t c = col; c < 2 * m; ++c)
                    work[r][c] -= factor * work[col][c];
            }
        }
        if (singular) continue;

        Basis basis;
        basis.columns = pick;
        basis.inverse.assign(m, std::vector<Rat>(m));
        for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < m; ++c) basis.inverse[r][c] = work[r][m + c];
        bases.push_back(std::move(basis));
    } while (next_combination(pick));

    return bases;
}

const std::vector<Basis>& cached_bases(const RowPattern& rows) {
    static std::mutex mutex;
    static std::map<RowPattern, std::vector<Basis>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(rows);
    if (it == cache.end()) it = cache.emplace(rows, enumerate_bases(rows)).first;
    return it->second;
}

} // namespace

ConstraintSystem build_polytope(const StudyProbabilities& p, EvidenceScope scope,
                                CausalTarget target) {
    p.validate();
    ConstraintSystem system;
    system.target = target;
    system.equalities.push_back({"sum", kRowSum, Rat(1)});

    const bool want_exp = scope != EvidenceScope::ObservationalOnly;
    const bool want_obs = scope != EvidenceScope::ExperimentalOnly;

    if (want_exp) {
        require(p.p_yt.has_value(), "P(y_t)");
        require(p.p_yc.has_value(), "P(y_c)");
        system.equalities.push_back({"P(y_t)", kRowYt, *p.p_yt});
        system.equalities.push_back({"P(y_c)", kRowYc, *p.p_yc});
    }
    if (want_obs) {
        require(p.has_observational(), "P(t), P(y|t), P(y|c)");
        const JointCells cells = joint_cells(p);
        system.equalities.push_back({"P(t)", kRowT, *p.p_t});
        system.equalities.push_back({"P(t,y)", kRowTy, cells.ty});
        system.equalities.push_back({"P(c,y)", kRowCy, cells.cy});
    }
    return system;
}

namespace {

std::vector<ResponseTypeDistribution> enumerate_vertices(const ConstraintSystem& system) {
    const std::size_t m = system.equalities.size();
    RowPattern rows(m);
    std::vector<Rat> rhs(m);
    for (std::size_t i = 0; i < m; ++i) {
        rows[i] = system.equalities[i].coefficients;
        rhs[i] = system.equalities[i].rhs;
    }

    std::vector<std::array<Rat, 8>> raw;
    for (const Basis& basis : cached_bases(rows)) {
        std::array<Rat, 8> q{};
        bool ok = true;
        for (std::size_t r = 0; r < m && ok; ++r) {
            Rat x = 0;
            for (std::size_t c = 0; c < m; ++c) {
                if (basis.inverse[r][c] != 0) x += basis.inverse[r][c] * rhs[c];
            }
            if (x < 0)
                ok = false;
            else
                q[static_cast<std::size_t>(basis.columns[r])] = std::move(x);
        }
        if (ok) raw.push_back(std::move(q));
    }

    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());

    std::vector<ResponseTypeDistribution> vertices;
    vertices.reserve(raw.size());
    for (auto& q : raw) vertices.push_back(ResponseTypeDistribution{std::move(q)});
    return vertices;
}

Rat target_mass(const ResponseTypeDistribution& d, CausalTarget target) {
    return d.type_mass(target == CausalTarget::Benefit ? ResponseType::Benefit
                                                       : ResponseType::Harm);
}

} // namespace

OracleResult oracle_bounds(const StudyProbabilities& p, EvidenceScope scope,
                           CausalTarget target) {
    const ConstraintSystem system = build_polytope(p, scope, target);
    std::vector<ResponseTypeDistribution> vertices = enumerate_vertices(system);
    if (vertices.empty())
        raise(ErrorKind::EmptyPolytope, "no response-type distribution matches the data");

    std::size_t lo = 0, hi = 0;
    Rat lo_val = target_mass(vertices[0], target);
    Rat hi_val = lo_val;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        const Rat v = target_mass(vertices[i], target);
        if (v < lo_val) {
            lo_val = v;
            lo = i;
        }
        if (v > hi_val) {
            hi_val = v;
            hi = i;
        }
    }

    OracleResult result{Interval(lo_val, hi_val), vertices[lo], vertices[hi],
                        std::move(vertices)};
    return result;
}

InducedObservables pns_of(const ResponseTypeDistribution& d) {
    d.validate();

    InducedObservables obs;
    obs.benefit = d.type_mass(ResponseType::Benefit);
    obs.harm = d.type_mass(ResponseType::Harm);
    obs.p_yt = obs.benefit + d.type_mass(ResponseType::Always);
    obs.p_yc = obs.harm + d.type_mass(ResponseType::Always);
    obs.p_t = d.cells[kBenefitT] + d.cells[kHarmT] + d.cells[kAlwaysT] + d.cells[kDoomedT];

    if (obs.p_t > 0)
        obs.p_y_given_t = (d.cells[kBenefitT] + d.cells[kAlwaysT]) / obs.p_t;
    if (obs.p_t < 1)
        obs.p_y_given_c = (d.cells[kHarmC] + d.cells[kAlwaysC]) / (1 - obs.p_t);
    return obs;
}

bool feasible(const StudyProbabilities& p) {
    const ConstraintSystem system = build_polytope(p, EvidenceScope::Combined);
    return !enumerate_vertices(system).empty();
}

} // namespace tpb
