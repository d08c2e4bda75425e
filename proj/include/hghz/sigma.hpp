#pragma once

#include "hghz/modq.hpp"

namespace hghz {

struct SigmaEstimate {
    double sigma;          // estimated largest singular value
    double lambda;         // Rayleigh quotient for R^T R (lower bound on lambda_max)
    double residual;       // ||R^T R v - lambda v||_2 at the final iterate
    double sigma_upper;    // sqrt(lambda + residual), used by the certified comparison
    int iterations;
};

// Largest singular value of the real lift of R, by power iteration on R^T R.
// Convergence threshold 1e-12 relative, 1e4 iteration cap.
SigmaEstimate sigma_max_estimate(const IntMatrix& R);

double sigma_max(const IntMatrix& R);

// Certified test sqrt(sigma_max(R)^2 + 1) <= bound: the residual error of the
// power iterate is added before comparing.
bool sigma_sq_plus_one_leq(const IntMatrix& R, double bound);

} // namespace hghz
