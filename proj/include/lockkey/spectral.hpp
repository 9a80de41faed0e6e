#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "lockkey/grid.hpp"
#include "lockkey/operator.hpp"

namespace lockkey {

/// Leading eigenpairs of the discretized operator.
///
/// Modes are addressed with 1-based indices in ascending eigenvalue order,
/// so mode 1 is the most negative. Eigenfields are orthonormal in the
/// weighted inner product; each is signed so that its first component of
/// non-negligible magnitude is positive.
struct SpectralDecomposition {
  GridPtr grid;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenfields;  // one column per mode, nodal values
  double max_residual = 0.0;           // max_i ||R e_i - lambda_i e_i||
  double orthonormality_error = 0.0;   // max |(e_i, e_j) - delta_ij|

  int mode_count() const { return static_cast<int>(eigenvalues.size()); }
  double eigenvalue(int mode) const;
  Field eigenfield(int mode) const;
  bool all_negative() const { return (eigenvalues.array() < 0.0).all(); }
  /// Largest |lambda|, i.e. |lambda_1|.
  double spectral_radius() const;
};

/// First n_modes eigenpairs (all of them when n_modes <= 0).
/// Throws NumericError if the symmetric eigensolver does not converge.
SpectralDecomposition eigendecompose(const OperatorMatrix& op, int n_modes = 0);

/// Pr f = f - mean_value(f), the orthogonal projection onto neutral fields.
Field project_neutral(const Field& f);

/// |total_charge(f)| <= tol * max(1, ||f|| sqrt(mes Q)).
bool is_neutral(const Field& f, double tol);

/// Sum over retained modes of lambda_n (f, e_n)(g, e_n). With a full-rank
/// decomposition this equals interaction_force(op, f, g).
double spectral_interaction(const SpectralDecomposition& dec, const Field& f,
                            const Field& g);

/// F_ij = (R Pr e_i, Pr e_j) - lambda_i delta_ij over a set of modes.
struct FMatrix {
  std::vector<int> modes;  // 1-based mode indices labelling rows/columns
  Eigen::MatrixXd entries;
  double mes_q = 0.0;

  /// Entry addressed by mode indices (not positions).
  double at(int mode_i, int mode_j) const;
  double max_abs() const { return entries.cwiseAbs().maxCoeff(); }
};

FMatrix f_matrix(const OperatorMatrix& op, const SpectralDecomposition& dec,
                 std::span<const int> modes);

/// Cauchy-Schwarz bounds on the pieces of the projected expansion.
///
/// Writing t_i = <e_i> (total charge of a unit eigenfield),
///   F_ij = -lambda_i t_i t_j / mesQ - t_i (R1, e_j) / mesQ + t_i t_j (R1, 1) / mesQ^2,
/// and |t_i| <= sqrt(mesQ), |(R1, e_j)| <= ||R1||, |(R1, 1)| <= ||R1|| sqrt(mesQ)
/// give |F_ij| <= |lambda_1| + 2 ||R1|| / sqrt(mesQ). Both terms are at most
/// C0 = max|R1| <= amplitude * mesQ, so the bound is O(mes Q).
struct SchwartzBounds {
  double avg_bound = 0.0;           // sqrt(mes Q)
  double r1_bound = 0.0;            // ||R1||
  double rhs_bound = 0.0;           // |lambda_1| + 2 ||R1|| / sqrt(mes Q)
  double c0 = 0.0;                  // max |R1| on this domain
  double c_constant = 0.0;          // rhs_bound / mes Q
  double max_total_charge = 0.0;    // max_i |<e_i>|, checked against avg_bound
  double max_r1_projection = 0.0;   // max_j |(e_j, R1)|, checked against r1_bound
};

SchwartzBounds schwartz_bounds(const SpectralDecomposition& dec, const OperatorMatrix& op);

}  // namespace lockkey
