#pragma once

#include <functional>
#include <span>
#include <vector>

namespace zmw::numerics
{
// Evaluates the model at every abscissa: values[i] = f(params; x[i]).
using BatchModel =
    std::function<void(std::span<const double> params, std::span<const double> x, std::span<double> values)>;

// Column-major Jacobian: jacobian[j * x.size() + i] = df(x[i]) / dparams[j].
using BatchJacobian =
    std::function<void(std::span<const double> params, std::span<const double> x, std::span<double> jacobian)>;

// Adapts a scalar model f(params, x) to the batch form.
BatchModel pointwise(std::function<double(std::span<const double>, double)> f);

struct FitProblem
{
    BatchModel model;
    BatchJacobian jacobian; // central differences when empty
    std::vector<double> x;  // strictly increasing
    std::vector<double> y;
    std::vector<double> initial_guess;
    // Accepted step converges when the relative drop of the squared residual
    // falls below this.
    double tolerance = 1e-12;
    int max_iterations = 200;
    double initial_damping = 1e-3;
};

enum class FitStatus
{
    Converged,
    IterationLimit,
    Singular
};

const char *to_string(FitStatus status);

struct FitResult
{
    std::vector<double> parameters;
    double residual = 0.0; // ||y - f||_2 at the returned parameters
    FitStatus status = FitStatus::Converged;
    int iterations = 0;
    // Squared residual at the initial guess and after every accepted step.
    std::vector<double> cost_history;

    bool converged() const { return status == FitStatus::Converged; }
};

// Levenberg-Marquardt: solves (J^T J + lambda diag(J^T J)) dp = J^T r,
// lambda starts at initial_damping, is divided by 10 after an accepted step
// and multiplied by 10 after a rejected one. Returns the best parameters
// found; a parameter with no influence on the model (zero Jacobian column)
// yields FitStatus::Singular.
FitResult fit_least_squares(const FitProblem &problem);

} // namespace zmw::numerics
