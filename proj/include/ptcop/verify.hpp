#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptcop/common.hpp"
#include "ptcop/copula.hpp"
#include "ptcop/generators.hpp"
#include "ptcop/rng.hpp"

namespace ptcop {

// One statistical check turned into a pass/fail record. `statistic` and
// `band` mean different things per check (KS distance vs critical value,
// worst deviation in combined-SE units vs the 4-SE budget, ...) but always
// satisfy: pass <=> statistic <= band.
struct CheckReport {
    std::string name;
    double statistic = 0.0;
    double band = 0.0;
    bool pass = false;
    Index n_used = 0;
    std::uint64_t seed = 0;
};

nlohmann::json to_json(const CheckReport& report);
nlohmann::json reports_to_json(const std::vector<CheckReport>& reports,
                               std::uint64_t seed);

// Two-sided Monte Carlo comparisons use 4 combined standard errors throughout;
// KS tests run at alpha = 0.01.
inline constexpr double kSigmaBand = 4.0;
inline constexpr double kKsAlpha = 0.01;

// KS uniformity of every column of `samples` against uniform(0,1).
std::vector<CheckReport> margin_uniformity(const Matrix& samples, std::uint64_t seed,
                                           const std::string& name_prefix = "margin");

// Empirical CDF of `samples` against `expected_cdf(x)` (an MCEstimate, so both
// Monte Carlo and closed-form references fit) on a grid of evaluation points.
// statistic: worst |diff| / combined SE over the grid when `require_all`,
// otherwise 1 - (fraction of points within band), with band 0.05 (>= 95% of
// points must pass).
CheckReport cdf_agreement(const Matrix& samples,
                          const std::function<MCEstimate(const Vector&)>& expected_cdf,
                          const std::vector<Vector>& eval_points, const std::string& name,
                          std::uint64_t seed, bool require_all = false);

// Upper-tail agreement: empirical P(Y <= x) vs 1 - thinned_norm(x - 1) on a
// grid inside the exact region; >= 95% of grid points must agree within 4
// combined SEs.
CheckReport upper_tail_agreement(
    const Matrix& samples, const std::function<MCEstimate(const Vector&)>& thinned_norm,
    const std::vector<Vector>& x_grid, std::uint64_t seed);

// Joint-exceedance agreement (peaks-over-threshold conditioning): compares
// P(U > v) under `copula` against P{Y_j > u_j + v_j (1 - u_j) for all j | U > u}
// where Y is the PT vector built from (copula, gen, u). With `assert_equality`
// every grid point must agree within 4 combined SEs (the exact case, copula =
// GPD-copula with this generator). Otherwise the discrepancies are reported
// and the check monitors that they shrink toward v = 1 instead of asserting
// pointwise equality; v_grid must then be ordered with increasing min(v).
CheckReport pot_conditional_agreement(const CopulaModel& copula, const GeneratorSpec& gen,
                                      const Vector& threshold,
                                      const std::vector<Vector>& v_grid, Index n_samples,
                                      std::uint64_t seed, std::uint64_t stream,
                                      bool assert_equality);

// Column means of generator samples against 1, with the 4c/sqrt(N) band.
CheckReport generator_mean_check(const GeneratorSpec& gen, Index n_samples,
                                 std::uint64_t seed, std::uint64_t stream);

}  // namespace ptcop
