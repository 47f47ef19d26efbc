#pragma once

// Reference computations used only by tests. They are written against Eigen
// directly and avoid the library's own routines so that agreement means
// something.

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;

// Smallest lambda with 2^lambda sigma >= rho, by bisection on the PSD test
// restricted to supp sigma. Assumes supp rho is inside supp sigma.
double dmax_bisection(const Mat& rho, const Mat& sigma);

// Minimum of tr X over C (x) X >= rho for a qubit B, by scanning the Bloch
// ball for omega and taking the closed-form trace 2^Dmax(rho || C (x) omega).
// Coarse grid (step 0.1) then local refinement down to step 1e-4.
struct GridResult {
  double value = 0.0;
  Eigen::Vector3d bloch = Eigen::Vector3d::Zero();
};
GridResult bloch_grid_min(const Mat& c, const Mat& rho);

// Same problem for diagonal C and diagonal rho (dims dA x dB): the optimum is
// sum_b max_a p(a, b) / c_a.
double diagonal_lp(const Eigen::VectorXd& c, const Eigen::VectorXd& p, int da, int db);

// Sum of singular values from a divide-and-conquer SVD.
double trace_norm(const Mat& m);

// Eigenvalues ascending, straight from Eigen.
Eigen::VectorXd eigenvalues(const Mat& m);

// Independent partial trace on H_A (x) H_B keeping A or B.
Mat keep_a(const Mat& m, int da, int db);
Mat keep_b(const Mat& m, int da, int db);

}  // namespace oracle
