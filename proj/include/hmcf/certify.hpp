#pragma once

// Inequality checks with signed margins. A positive margin means the relation
// holds; tolerances absorb discretization error.

#include "hmcf/flow.hpp"
#include "hmcf/hmesh.hpp"
#include "hmcf/ops.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hmcf {

enum class Verdict { pass, fail, inconclusive };

const char* to_string(Verdict v) noexcept;

struct Certificate {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string relation;  // ">=", "<=" or "approx"
  double margin = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::fail;
  std::string inputs_digest;
  std::vector<std::pair<std::string, double>> extras;
  std::string note;

  bool passed() const noexcept { return verdict == Verdict::pass; }
  std::optional<double> extra(const std::string& key) const;
};

/// Quantities of one mesh shared by several checks, computed on first use.
class MeshEvaluation {
 public:
  explicit MeshEvaluation(const TriMesh& mesh);
  MeshEvaluation(TriMesh&&) = delete;  // keeps a reference to the mesh

  const TriMesh& mesh() const noexcept { return mesh_; }
  const CurvatureField& field() const;
  double area() const { return field().total_area; }
  double volume() const;
  double willmore() const;      // sum H^2 A_v
  double willmore_bar() const;  // sum (H^2 - 1) A_v
  double diameter() const;
  int flagged() const { return field().flagged; }
  int euler() const noexcept { return euler_characteristic(mesh_); }
  const std::string& digest() const noexcept { return digest_; }

 private:
  const TriMesh& mesh_;
  std::string digest_;
  mutable std::optional<CurvatureField> field_;
  mutable std::optional<double> volume_, diameter_;
};

Certificate check_willmore_sphere_bound(const MeshEvaluation& ev);
/// Throws DomainError("not a torus") unless chi = 0.
Certificate check_torus_willmore_bound(const MeshEvaluation& ev, double c0);
Certificate check_isoperimetric(const MeshEvaluation& ev);
/// Certifies a singularity (pass) when the volume exceeds the c0 profile bound.
Certificate check_torus_singularity(const MeshEvaluation& ev, double c0);
/// Certifies a singularity (pass) when area0^2 < (16 pi^2 / 49) T0 d^2.
/// T0 defaults to ln cosh 1, the extinction time of a unit sphere.
Certificate check_dumbbell_singularity(double area0, double d, std::optional<double> T0 = std::nullopt);
Certificate check_diameter_bound(const MeshEvaluation& ev);
Certificate check_diameter_bound(double diameter, double area, double willmore, int flagged = 0,
                                 const std::string& digest = {});
Certificate check_local_monotonicity(const MeshEvaluation& ev, int32_t center, double rho0);
/// Minimum of e^t sinh(d/2) - sinh(d0/2) over the paired run.
Certificate check_comparison_monitor(const PairResult& pair);
/// Minimum of e^t d - d0 over the paired run.
Certificate check_comparison_monitor_weak(const PairResult& pair);
/// Tolerance fraction defaults to 3%, or 5% for chi = 0.
Certificate check_conformal_invariance(const MeshEvaluation& ev, std::optional<double> fraction = std::nullopt);

/// Names of the certificates that take a single mesh.
const std::vector<std::string>& mesh_certificate_names();

}  // namespace hmcf
