#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace presched {

// Quantities are plain doubles; the aliases mark intent at interfaces.
using Mw = double;
using Currency = double;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared numeric tolerances.
inline constexpr double kFeasTol = 1e-9;       // LP primal feasibility
inline constexpr double kIntTol = 1e-6;        // MILP integrality
inline constexpr double kDefaultGapTol = 1e-6; // MILP relative gap
inline constexpr double kSlackPenalty = 1e4;   // currency/MWh on shed/spill

enum class Errc {
  // system_model
  empty_system,
  duplicate_id,
  dangling_node_reference,
  non_positive_capacity,
  up_cost_not_above_down_cost,
  // solver
  malformed_problem,
  no_incumbent_within_time_limit,
  // dispatch
  prescription_out_of_range,
  solver_failure,
  // trainer
  dimension_mismatch,
  empty_sample_set,
  // datagen
  no_real_solution,
  unknown_variant,
  missing_capacity_file,
  // ingest
  missing_column,
  unparseable_timestamp,
  non_hourly_cadence,
  all_missing_field,
  timestamp_misalignment,
  // evaluate
  insufficient_data,
  non_positive_baseline,
  // cli / io
  usage_error,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::empty_system: return "EmptySystem";
    case Errc::duplicate_id: return "DuplicateId";
    case Errc::dangling_node_reference: return "DanglingNodeReference";
    case Errc::non_positive_capacity: return "NonPositiveCapacity";
    case Errc::up_cost_not_above_down_cost: return "UpCostNotAboveDownCost";
    case Errc::malformed_problem: return "MalformedProblem";
    case Errc::no_incumbent_within_time_limit: return "NoIncumbentWithinTimeLimit";
    case Errc::prescription_out_of_range: return "PrescriptionOutOfRange";
    case Errc::solver_failure: return "SolverFailure";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::empty_sample_set: return "EmptySampleSet";
    case Errc::no_real_solution: return "NoRealSolution";
    case Errc::unknown_variant: return "UnknownVariant";
    case Errc::missing_capacity_file: return "MissingCapacityFile";
    case Errc::missing_column: return "MissingColumn";
    case Errc::unparseable_timestamp: return "UnparseableTimestamp";
    case Errc::non_hourly_cadence: return "NonHourlyCadence";
    case Errc::all_missing_field: return "AllMissingField";
    case Errc::timestamp_misalignment: return "TimestampMisalignment";
    case Errc::insufficient_data: return "InsufficientData";
    case Errc::non_positive_baseline: return "NonPositiveBaseline";
    case Errc::usage_error: return "UsageError";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace presched
