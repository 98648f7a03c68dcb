#pragma once

// Multiplicity-level model of rigid C*-tensor categories and their module
// categories: fusion rings, module action tensors, Perron-Frobenius
// dimensions, module traces, Plancherel weights, functor dimension functions
// and the standard solutions of the conjugate equations for action functors.

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qindex/error.hpp"

namespace qindex {

class FusionRing {
 public:
  FusionRing() = default;
  // mult is laid out as mult[(u * rank + v) * rank + w] = N_{uv}^w.
  FusionRing(std::vector<std::string> labels, int unit, std::vector<int> dual,
             std::vector<int> mult);

  int rank() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int u) const { return labels_.at(u); }
  int index_of(std::string_view label) const;
  int unit() const { return unit_; }
  int dual(int u) const { return dual_.at(u); }
  int N(int u, int v, int w) const { return mult_[(static_cast<size_t>(u) * rank() + v) * rank() + w]; }
  const std::vector<int>& multiplicities() const { return mult_; }

  // (N_u)_{vw} = N_{uv}^w.
  Eigen::MatrixXd fusion_matrix(int u) const;

 private:
  std::vector<std::string> labels_;
  int unit_ = 0;
  std::vector<int> dual_;
  std::vector<int> mult_;
};

class FusionModule {
 public:
  FusionModule() = default;
  // action is laid out as action[(u * size + i) * size + j] = n_{u,i}^j
  // = dim M(j, U (x) i).
  FusionModule(FusionRing ring, std::vector<std::string> labels, std::vector<int> action);

  const FusionRing& ring() const { return ring_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(i); }
  int index_of(std::string_view label) const;
  int n(int u, int i, int j) const { return action_[(static_cast<size_t>(u) * size() + i) * size() + j]; }
  const std::vector<int>& action() const { return action_; }

  // (A_u)_{ij} = n_{u,i}^j.
  Eigen::MatrixXd action_matrix(int u) const;

 private:
  FusionRing ring_;
  std::vector<std::string> labels_;
  std::vector<int> action_;
};

struct StructureCheck {
  bool ok = true;
  std::string violation;  // names the failed identity and its indices
};

StructureCheck validate_fusion(const FusionRing& ring);
StructureCheck validate_module(const FusionModule& module);

// The positive character d of the ring (d(1) = 1), taken from the
// Perron-Frobenius eigenvector of sum_u N_u and verified against
// sum_w N_{uv}^w d(w) = d(u) d(v) to 1e-10. Throws a Validation error when
// the candidate is not a positive character.
std::vector<double> pf_dimensions(const FusionRing& ring);

// max over (u, v) of |sum_w N_{uv}^w d(w) - d(u) d(v)|.
double character_defect(const FusionRing& ring, std::span<const double> dims);

enum class TraceStatus { Ok, NoSolution, NoPositiveSolution, Decomposable };

const char* to_string(TraceStatus status);

struct ModuleTrace {
  std::vector<double> values;  // m(i) for i in Irr M
  int normalization = 0;       // m(normalization) = 1
};

struct ModuleTraceResult {
  TraceStatus status = TraceStatus::NoSolution;
  std::optional<ModuleTrace> trace;
  int nullity = 0;  // dimension of the solution space
};

// Solves sum_j n_{u,i}^j m(j) = d(u) m(i) for every u and i simultaneously.
ModuleTraceResult module_trace_solve(const FusionModule& module, std::span<const double> ring_dims,
                                     int normalization = 0);

// sum_i m(i)^2 a_i
std::complex<double> plancherel_weight(const ModuleTrace& trace,
                                       std::span<const std::complex<double>> a);

// Partition of Irr M generated by i ~ j when n_{u,j}^i != 0 for some u in the
// subring. Classes are sorted by their smallest member.
std::vector<std::vector<int>> equivalence_classes(const FusionModule& module,
                                                  std::span<const int> subring);

// Multiplicity data of an endofunctor F of M: dims(j, i) = dim M(j, F(i)).
// Optional explicit solution vectors are stored per (j, i) at j * size + i:
// r lives in conj(H_ji) (x) H_ji and rbar in H_ji (x) conj(H_ji), both with
// index a * dim + b.
struct MultiplicityFunctor {
  Eigen::MatrixXi dims;
  std::vector<Eigen::VectorXcd> r;
  std::vector<Eigen::VectorXcd> rbar;

  int size() const { return static_cast<int>(dims.rows()); }
  bool has_vectors() const { return !r.empty(); }

  static MultiplicityFunctor identity(int size);
  // F = U (x) -, dims(j, i) = n_{u,i}^j.
  static MultiplicityFunctor action(const FusionModule& module, int u);
};

// d_F(i) = sum_j dims(j, i) m(j) / m(i)
std::vector<double> functor_dimension(const MultiplicityFunctor& f, const ModuleTrace& trace);

struct LocalConstancy {
  bool ok = true;
  int violating_class = -1;  // index into the partition, -1 when ok
  double spread = 0.0;       // spread of the violating class (or the largest)
};

LocalConstancy check_locally_constant(std::span<const double> d_f,
                                      const std::vector<std::vector<int>>& partition,
                                      double tol = 1e-9);

struct StandardComponent {
  int i = 0;
  int j = 0;
  int multiplicity = 0;       // dims(j, i)
  double norm_r_sq = 0.0;     // (m(j) / m(i)) * multiplicity
  double norm_rbar_sq = 0.0;  // (m(i) / m(j)) * multiplicity
  Eigen::VectorXcd r;
  Eigen::VectorXcd rbar;
};

// Per (i, j): the standard solution components of F, realised as
// maximally entangled vectors scaled by sqrt(m(j)/m(i)) and sqrt(m(i)/m(j)).
std::vector<StandardComponent> standard_solution_components(const MultiplicityFunctor& f,
                                                            const ModuleTrace& trace);
std::vector<StandardComponent> standard_solution_components(const FusionModule& module,
                                                            const ModuleTrace& trace, int u);

// Copy of f carrying the standard vectors.
MultiplicityFunctor with_standard_vectors(MultiplicityFunctor f, const ModuleTrace& trace);

struct FunctorTraceResult {
  double closed_form = 0.0;  // sum_{i,j} m(i) m(j) tr(eta_ji)
  double left = 0.0;         // omega(R^*(id (x) eta) R) from the explicit vectors
  double right = 0.0;        // omega(Rbar^*(eta (x) id) Rbar)
  bool agree = false;
};

// eta holds one positive matrix per (j, i) at j * size + i, sized dims(j, i).
FunctorTraceResult functor_trace(const MultiplicityFunctor& f, const ModuleTrace& trace,
                                 std::span<const Eigen::MatrixXcd> eta, double tol = 1e-9);

struct UniformFiniteness {
  bool uniformly_finite = true;
  long max_row_sum = 0;
  long max_col_sum = 0;
};

UniformFiniteness uniformly_finite_check(const Eigen::MatrixXi& dims);

struct JonesMembership {
  bool member = false;
  bool continuum = false;
  int witness = 0;  // n with d = 4 cos^2(pi / n); 0 when none
};

// Membership of d in {4 cos^2(pi/n) : n >= 3} U [4, inf).
JonesMembership jones_membership(double d, double tol = 1e-9);

// d(X)^2, the degree of the Q-system conj(X) (x) X.
double qsystem_degree(std::span<const double> ring_dims, int x);

}  // namespace qindex
