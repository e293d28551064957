#pragma once

// Explicit mean curvature flow: each vertex moves along the geodesic in the
// direction of -H, with a curvature-limited time step.

#include "hmcf/errors.hpp"
#include "hmcf/hmesh.hpp"
#include "hmcf/ops.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hmcf {

enum class FlowStatus { running, extinct, singular, max_steps };

const char* to_string(FlowStatus s) noexcept;

struct FlowConfig {
  double cfl = 0.25;
  double dt_min = 1e-7;
  double h_max_abs = 50.0;
  int max_steps = 1000000;
  int record_every = 1;
  bool remesh = false;
  double remesh_ratio = 0.1;  // collapse edges shorter than ratio * mean edge
  double tangential = 1.0;    // vertex redistribution strength, 0 disables

  /// Throws DomainError when a field is outside its range.
  void check() const;
};

/// Geodesic through two points, used for neck measurements.
struct Axis {
  HPoint a;
  HPoint b;
};

/// Scalars evaluated once per step from the curvature field.
struct StepMetrics {
  double A = 0.0;
  double V = 0.0;
  double W = 0.0;     // sum H^2 A_v
  double Wbar = 0.0;  // sum (H^2 - 1) A_v
  double intH = 0.0;  // sum H A_v
  double maxAbsH = 0.0;
  double minEdge = 0.0;
  double maxEdge = 0.0;
  double meanEdge = 0.0;
  int flagged = 0;
};

StepMetrics measure(const TriMesh& mesh, const CurvatureField& cf);

struct DiagnosticsRecord {
  int step = 0;
  double t = 0.0;
  double A = 0.0;
  double V = 0.0;
  double Wbar = 0.0;
  double W = 0.0;
  double intH = 0.0;
  double maxAbsH = 0.0;
  double minEdge = 0.0;
  double maxEdge = 0.0;
  double diameter = 0.0;
  std::optional<double> neckRadius;
  int flaggedFaces = 0;
};

struct FlowState {
  TriMesh mesh;
  double t = 0.0;
  int step_index = 0;
  double dt_last = 0.0;
  FlowStatus status = FlowStatus::running;
  std::string reason;

  CurvatureField field;
  StepMetrics metrics;
  double A0 = 0.0;
  double V0 = 0.0;
};

/// Evaluates the curvature of `mesh` and sets the status for t = 0.
FlowState make_state(TriMesh mesh, const FlowConfig& config);

/// min(cfl minEdge^2 / max(1, maxAbsH minEdge), cfl / maxAbsH^2)
double stable_dt(const StepMetrics& m, const FlowConfig& config);

/// Hard numerical failure during a step. what() carries a dump of the state.
class FlowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// One explicit step with the given dt (or the stable dt), followed by status
/// evaluation. Requires status == running.
FlowState step(const FlowState& state, const FlowConfig& config, std::optional<double> dt = std::nullopt);

DiagnosticsRecord make_record(const FlowState& state, const std::optional<Axis>& axis);

struct RunResult {
  FlowState final_state;
  std::vector<DiagnosticsRecord> records;
};

/// Called after every step with the new state; used for sweeps over snapshots.
using StepObserver = std::function<void(const FlowState&)>;

RunResult run(TriMesh mesh, const FlowConfig& config, const std::optional<Axis>& axis = std::nullopt,
              const StepObserver& observer = {});

struct PairRecord {
  int step = 0;
  double t = 0.0;
  DiagnosticsRecord a;
  DiagnosticsRecord b;
  double d = 0.0;
  double diameter = 0.0;    // of the union of both surfaces
  double monitorF1 = 0.0;   // e^t sinh(d/2) - sinh(d0/2)
  double monitorFa1 = 0.0;  // e^t d - d0
};

struct PairResult {
  FlowState a;
  FlowState b;
  std::vector<PairRecord> records;
  double d0 = 0.0;
  double max_edge0 = 0.0;  // largest initial edge over both meshes
};

/// Evolves both surfaces on a shared clock until either stops.
PairResult run_pair(TriMesh a, TriMesh b, const FlowConfig& config);

/// Smallest distance to the axis among vertices whose axial coordinate lies in
/// the middle third between axis.a and axis.b. Throws DomainError if none do.
double neck_radius(const TriMesh& mesh, const Axis& axis);

}  // namespace hmcf
