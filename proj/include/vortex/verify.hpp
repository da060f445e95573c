#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vortex {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 7;
    std::size_t configs = 100;           // random configurations for the H_N identity
    std::size_t fields = 10000;          // white-noise samples for the truncation identity
    std::size_t variance_samples = 10000;  // Monte-Carlo draws for the variance identity
};

// The exact-identity suite:
//  - green-dft: production evaluator against -1/(4 pi^2 |k|^2) on a grid
//  - hamiltonian-quadratic-form: H_N = -<w_N (x) w_N, G>/2
//  - truncation-identity: <w_N (x) w_N, G> = -2 E_N - 2 L_N per sample
//  - variance-identity: Var <w_N (x) w_N, G_n> = 2 int int G_n^2 (3 SE)
//  - momentum: sum_i xi_i v_i = 0
std::vector<CheckResult> run_identity_checks(const VerifyOptions& options = {});

// Residual of the variance identity, also used by the acceptance suite.
struct VarianceCheck {
    double variance = 0.0;
    double variance_se = 0.0;
    double target = 0.0;        // 2 int int f^2
    double finite_target = 0.0; // 2 (N-1)/N int int f^2, exact at finite N
    double mean = 0.0;
    double mean_se = 0.0;
};

VarianceCheck variance_identity(std::size_t n, int mollifier, std::size_t samples,
                                std::uint64_t seed, int grid = 256);

}  // namespace vortex
