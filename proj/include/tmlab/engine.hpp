#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tmlab/geometry.hpp"
#include "tmlab/mappings.hpp"
#include "tmlab/schedules.hpp"

namespace tmlab {

struct IterationState {
    std::uint64_t n = 0;
    Point x;                 ///< x_n
    std::optional<Point> u_n;  ///< W(u, x_{n-1}, β_{n-1}) after the first step
    Point anchor;            ///< u
    Point x0;

    static IterationState initial(const Point& anchor, const Point& x0);
};

/// u_n = W(u, x_n, β_n), x_{n+1} = W(u_n, T_n u_n, λ_n).
IterationState step(const IterationState& state, const MappingFamily& family, const ScheduleBundle& bundle,
                    const SpaceModel& space);

struct TrajectoryRecord {
    std::uint64_t n = 0;
    Point x;
    Point u_n;
    double d_step = 0.0;  ///< d(x_n, x_{n+1}); NaN on the last record
    double d_Tn = 0.0;    ///< d(x_n, T_n x_n)
    double d_p = 0.0;     ///< d(x_n, p)
};

struct Trajectory {
    std::shared_ptr<const SpaceModel> space;
    std::string model;
    std::string family;
    std::string scenario_hash;
    Point anchor;
    Point p;
    std::vector<TrajectoryRecord> records;
    /// Set when a solver failure cut the run short.
    std::optional<std::string> error;
    double error_residual = 0.0;

    std::uint64_t last_index() const { return records.empty() ? 0 : records.back().n; }
    /// The model the trajectory lives in; throws std::logic_error when unset.
    const SpaceModel& model_space() const;
};

/// FNV-1a hash (16 hex digits) of model, family, schedule, u and x₀.
std::string scenario_hash(const SpaceModel& space, const MappingFamily& family, const ScheduleBundle& bundle,
                          const Point& u, const Point& x0);

/// steps + 1 records n = 0..steps. A solver failure stops the run and is
/// recorded in Trajectory::error with the records computed so far.
Trajectory run(const SpaceModel& space, const MappingFamily& family, const ScheduleBundle& bundle,
               const Point& u, const Point& x0, std::uint64_t steps);

/// Runs eq. (2) with u = 0 against (1 - λ_n)β_n x_n + λ_n T_n(β_n x_n) in plain
/// vector arithmetic. The report holds max over n of deviation - tol·n (axiom
/// "hilbert-special-case"), so it passes iff every deviation is ≤ tol·(1 + n).
AxiomReport check_hilbert_special_case(const SpaceModel& space, const MappingFamily& family,
                                       const ScheduleBundle& bundle, const Point& x0, std::uint64_t steps,
                                       double tol);

/// Header comment, column row, one row per record; floats with 17 significant digits.
void write_csv(std::ostream& out, const Trajectory& traj);

/// printf("%.17g").
std::string format_double(double v);

}  // namespace tmlab
