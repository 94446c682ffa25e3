#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ptcop {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Array = Eigen::ArrayXd;

// Stable machine-readable error codes. The CLI prints these verbatim and maps
// them onto exit codes, so renaming an enumerator is a breaking change.
enum class ErrorCode {
    invalid_dimension,
    dimension_mismatch,
    unsupported_model,
    invalid_basis,
    invalid_atom,
    domain_error,
    complexity_guard,
    outside_domain,
    outside_upper_region,
    invalid_config,
    invalid_threshold,
    threshold_too_high,
    margin_domain,
    invalid_parameter,
    insufficient_data,
    below_threshold_level,
    increase_n,
    grid_mismatch,
    ingestion,
    io_error,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
    if (!cond) throw Error(code, what);
}

// Monte Carlo estimate with its standard error. Closed-form evaluations are
// reported as estimates with std_error == 0 and n_samples == 0.
struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    Index n_samples = 0;

    static MCEstimate exact(double v) { return MCEstimate{v, 0.0, 0}; }

    // Mean and standard error of a sample of evaluations.
    static MCEstimate from_sample_moments(double sum, double sum_sq, Index n) {
        MCEstimate e;
        e.n_samples = n;
        const double nn = static_cast<double>(n);
        e.value = sum / nn;
        if (n > 1) {
            double var = (sum_sq - nn * e.value * e.value) / (nn - 1.0);
            if (var < 0.0) var = 0.0;  // fp cancellation on constant samples
            e.std_error = std::sqrt(var / nn);
        }
        return e;
    }
};

// |a - b| within k combined standard errors. Exact estimates combine to a
// zero-width band, so closed-form pairs must match to fp tolerance.
inline bool agree(const MCEstimate& a, const MCEstimate& b, double k_sigma = 4.0,
                  double atol = 1e-12) {
    const double band = k_sigma * std::hypot(a.std_error, b.std_error);
    return std::abs(a.value - b.value) <= band + atol;
}

}  // namespace ptcop
