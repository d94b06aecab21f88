#include "zmw/numerics/least_squares.hpp"

#include "zmw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace zmw::numerics
{
namespace
{
constexpr double kMaxDamping = 1e20;

double sum_of_squares(std::span<const double> y, std::span<const double> f, std::span<double> r)
{
    double cost = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
    {
        r[i] = y[i] - f[i];
        cost += r[i] * r[i];
    }
    return cost;
}

// In-place Cholesky solve of the symmetric positive definite system a x = b.
std::optional<std::vector<double>> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t n)
{
    for (std::size_t j = 0; j < n; ++j)
    {
        double diag = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k)
            diag -= a[j * n + k] * a[j * n + k];
        if (!(diag > 0.0) || !std::isfinite(diag))
            return std::nullopt;
        const double l_jj = std::sqrt(diag);
        a[j * n + j] = l_jj;
        for (std::size_t i = j + 1; i < n; ++i)
        {
            double v = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                v -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = v / l_jj;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k)
            v -= a[i * n + k] * b[k];
        b[i] = v / a[i * n + i];
    }
    for (std::size_t ii = n; ii-- > 0;)
    {
        double v = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k)
            v -= a[k * n + ii] * b[k];
        b[ii] = v / a[ii * n + ii];
    }
    return b;
}

void finite_difference_jacobian(const BatchModel &model, std::span<const double> params, std::span<const double> x,
                                std::span<double> jacobian)
{
    const std::size_t n = x.size();
    std::vector<double> p(params.begin(), params.end());
    std::vector<double> plus(n);
    std::vector<double> minus(n);
    const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
    for (std::size_t j = 0; j < p.size(); ++j)
    {
        const double original = p[j];
        const double h = base_step * std::max(std::abs(original), 1.0);
        p[j] = original + h;
        model(p, x, plus);
        p[j] = original - h;
        model(p, x, minus);
        p[j] = original;
        const double width = 2.0 * h;
        for (std::size_t i = 0; i < n; ++i)
            jacobian[j * n + i] = (plus[i] - minus[i]) / width;
    }
}

void validate(const FitProblem &problem)
{
    if (!problem.model)
        throw DomainError("fit_least_squares: no model");
    if (problem.x.size() != problem.y.size())
        throw DomainError("fit_least_squares: abscissa/value length mismatch");
    if (problem.initial_guess.empty())
        throw DomainError("fit_least_squares: empty parameter vector");
    if (problem.x.size() < problem.initial_guess.size())
        throw DomainError("fit_least_squares: " + std::to_string(problem.x.size()) + " data points for " +
                          std::to_string(problem.initial_guess.size()) + " parameters");
    for (std::size_t i = 1; i < problem.x.size(); ++i)
        if (!(problem.x[i] > problem.x[i - 1]))
            throw DomainError("fit_least_squares: abscissas not strictly increasing at index " + std::to_string(i));
    for (std::size_t i = 0; i < problem.y.size(); ++i)
        if (!std::isfinite(problem.x[i]) || !std::isfinite(problem.y[i]))
            throw DomainError("fit_least_squares: non-finite data at index " + std::to_string(i));
    if (problem.max_iterations < 1)
        throw DomainError("fit_least_squares: iteration cap must be positive");
}

} // namespace

const char *to_string(FitStatus status)
{
    switch (status)
    {
    case FitStatus::Converged:
        return "converged";
    case FitStatus::IterationLimit:
        return "iteration limit";
    case FitStatus::Singular:
        return "singular normal equations";
    }
    return "unknown";
}

BatchModel pointwise(std::function<double(std::span<const double>, double)> f)
{
    return [f = std::move(f)](std::span<const double> params, std::span<const double> x, std::span<double> values) {
        for (std::size_t i = 0; i < x.size(); ++i)
            values[i] = f(params, x[i]);
    };
}

FitResult fit_least_squares(const FitProblem &problem)
{
    validate(problem);

    const std::size_t n = problem.x.size();
    const std::size_t m = problem.initial_guess.size();

    FitResult result;
    result.parameters = problem.initial_guess;

    std::vector<double> values(n);
    std::vector<double> residual(n);
    problem.model(result.parameters, problem.x, values);
    double cost = sum_of_squares(problem.y, values, residual);
    if (!std::isfinite(cost))
        throw DomainError("fit_least_squares: model not finite at the initial guess");
    result.cost_history.push_back(cost);

    double data_scale = 0.0;
    for (double v : problem.y)
        data_scale += v * v;
    const double exact_fit = 1e-28 * (data_scale + std::numeric_limits<double>::min());

    std::vector<double> jacobian(n * m);
    std::vector<double> normal(m * m);
    std::vector<double> gradient(m);
    std::vector<double> trial(m);
    std::vector<double> trial_values(n);
    std::vector<double> trial_residual(n);
    double damping = problem.initial_damping;

    result.status = FitStatus::IterationLimit;
    for (int iteration = 0; iteration < problem.max_iterations; ++iteration)
    {
        result.iterations = iteration + 1;
        if (cost <= exact_fit)
        {
            result.status = FitStatus::Converged;
            break;
        }

        if (problem.jacobian)
            problem.jacobian(result.parameters, problem.x, jacobian);
        else
            finite_difference_jacobian(problem.model, result.parameters, problem.x, jacobian);

        for (std::size_t a = 0; a < m; ++a)
        {
            const double *col_a = jacobian.data() + a * n;
            double g = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                g += col_a[i] * residual[i];
            gradient[a] = g;
            for (std::size_t b = 0; b <= a; ++b)
            {
                const double *col_b = jacobian.data() + b * n;
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    s += col_a[i] * col_b[i];
                normal[a * m + b] = s;
                normal[b * m + a] = s;
            }
        }

        bool singular = false;
        for (std::size_t a = 0; a < m; ++a)
            if (!(normal[a * m + a] > 0.0) || !std::isfinite(normal[a * m + a]))
                singular = true;
        if (singular)
        {
            result.status = FitStatus::Singular;
            break;
        }

        bool accepted = false;
        bool stationary = false;
        while (!accepted)
        {
            std::vector<double> damped = normal;
            for (std::size_t a = 0; a < m; ++a)
                damped[a * m + a] += damping * normal[a * m + a];
            const auto step = cholesky_solve(std::move(damped), gradient, m);
            if (step)
            {
                double step_norm = 0.0;
                double param_norm = 0.0;
                for (std::size_t a = 0; a < m; ++a)
                {
                    trial[a] = result.parameters[a] + (*step)[a];
                    step_norm += (*step)[a] * (*step)[a];
                    param_norm += result.parameters[a] * result.parameters[a];
                }
                problem.model(trial, problem.x, trial_values);
                const double trial_cost = sum_of_squares(problem.y, trial_values, trial_residual);
                if (std::isfinite(trial_cost) && trial_cost < cost)
                {
                    const double drop = cost - trial_cost;
                    result.parameters = trial;
                    residual.swap(trial_residual);
                    cost = trial_cost;
                    result.cost_history.push_back(cost);
                    damping = std::max(damping / 10.0, 1e-15);
                    accepted = true;
                    if (drop <= problem.tolerance * cost ||
                        std::sqrt(step_norm) <= 1e-15 * (std::sqrt(param_norm) + 1e-15))
                        stationary = true;
                    break;
                }
            }
            damping *= 10.0;
            if (damping > kMaxDamping)
            {
                // No descent direction left at any damping: a stationary point.
                stationary = true;
                break;
            }
        }
        if (stationary)
        {
            result.status = FitStatus::Converged;
            break;
        }
    }

    if (result.status == FitStatus::IterationLimit && cost <= exact_fit)
        result.status = FitStatus::Converged;
    result.residual = std::sqrt(cost);
    return result;
}

} // namespace zmw::numerics
