#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lowdefault {

/// Nodes and weights of a Gauss-Hermite rule for the standard normal
/// weight: sum_i w_i f(x_i) ~ E[f(Y)], Y ~ N(0,1). Weights sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline constexpr int kHermiteBaseNodes = 200;
inline constexpr int kHermiteMaxLevel = 4;

/// Rule with kHermiteBaseNodes * 2^level nodes, computed once and cached.
const QuadratureRule& gauss_hermite_normal(int level);

template <class F>
double normal_expectation(const QuadratureRule& rule, F&& f)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        if (rule.weights[i] > 0.0)
            sum += rule.weights[i] * f(rule.nodes[i]);
    }
    return sum;
}

/// Smallest rule level whose result agrees with the next level to abs_tol.
template <class F>
int converged_hermite_level(F&& f, double abs_tol = 1e-10)
{
    double previous = normal_expectation(gauss_hermite_normal(0), f);
    for (int level = 1; level <= kHermiteMaxLevel; ++level) {
        const double current = normal_expectation(gauss_hermite_normal(level), f);
        if (std::abs(current - previous) < abs_tol)
            return level - 1;
        previous = current;
    }
    return kHermiteMaxLevel;
}

/// E[f(Y)] for standard normal Y. Doubles the node count starting from
/// kHermiteBaseNodes until two successive results differ by less than
/// abs_tol, or the largest rule is reached.
template <class F>
double normal_expectation(F&& f, double abs_tol = 1e-10)
{
    double previous = 0.0;
    for (int level = 0; level <= kHermiteMaxLevel; ++level) {
        const double sum = normal_expectation(gauss_hermite_normal(level), f);
        if (level > 0 && std::abs(sum - previous) < abs_tol)
            return sum;
        previous = sum;
    }
    return previous;
}

/// Abscissae and weights of the 7-point Gauss / 15-point Kronrod pair on
/// [-1, 1], non-negative half: index 0 is the centre, even indices are the
/// Gauss nodes.
struct KronrodTable {
    std::array<double, 8> abscissa;
    std::array<double, 8> kronrod_weight;
    std::array<double, 4> gauss_weight;
};
const KronrodTable& kronrod15();

/// Integrates a vector-valued function over the union of the panels
/// [breakpoints[i], breakpoints[i+1]] with globally adaptive G7/K15
/// bisection: the panel with the largest error share is split until every
/// component's summed error estimate is below rel_tol times its magnitude,
/// or max_panels is reached. f is never evaluated at panel endpoints.
template <std::size_t N, class F>
std::array<double, N> integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                         double rel_tol = 1e-9, std::size_t max_panels = 4000)
{
    using Values = std::array<double, N>;
    struct Panel {
        double a;
        double b;
        Values estimate;
        Values error;
    };
    const KronrodTable& table = kronrod15();
    auto evaluate = [&](double a, double b) {
        const double centre = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        Panel panel{a, b, {}, {}};
        Values gauss{};
        const Values mid = f(centre);
        for (std::size_t c = 0; c < N; ++c) {
            panel.estimate[c] = table.kronrod_weight[0] * mid[c];
            gauss[c] = table.gauss_weight[0] * mid[c];
        }
        for (std::size_t j = 1; j < table.abscissa.size(); ++j) {
            const Values left = f(centre - half * table.abscissa[j]);
            const Values right = f(centre + half * table.abscissa[j]);
            for (std::size_t c = 0; c < N; ++c) {
                panel.estimate[c] += table.kronrod_weight[j] * (left[c] + right[c]);
                if (j % 2 == 0)
                    gauss[c] += table.gauss_weight[j / 2] * (left[c] + right[c]);
            }
        }
        for (std::size_t c = 0; c < N; ++c) {
            panel.estimate[c] *= half;
            panel.error[c] = std::abs(panel.estimate[c] - half * gauss[c]);
        }
        return panel;
    };

    std::vector<Panel> panels;
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
        panels.push_back(evaluate(breakpoints[i], breakpoints[i + 1]));

    Values total{};
    while (true) {
        Values error{};
        total = Values{};
        for (const Panel& panel : panels) {
            for (std::size_t c = 0; c < N; ++c) {
                total[c] += panel.estimate[c];
                error[c] += panel.error[c];
            }
        }
        bool done = true;
        for (std::size_t c = 0; c < N; ++c)
            done = done && error[c] <= rel_tol * std::abs(total[c]);
        if (done || panels.size() >= max_panels)
            break;

        auto share = [&](const Panel& panel) {
            double worst = 0.0;
            for (std::size_t c = 0; c < N; ++c) {
                if (total[c] != 0.0)
                    worst = std::max(worst, panel.error[c] / std::abs(total[c]));
            }
            return worst;
        };
        std::size_t worst = 0;
        double worst_share = -1.0;
        for (std::size_t i = 0; i < panels.size(); ++i) {
            const double s = share(panels[i]);
            if (s > worst_share) {
                worst_share = s;
                worst = i;
            }
        }
        const Panel split = panels[worst];
        const double middle = 0.5 * (split.a + split.b);
        if (!(middle > split.a && middle < split.b))
            break;
        panels[worst] = evaluate(split.a, middle);
        panels.push_back(evaluate(middle, split.b));
    }
    return total;
}

}  // namespace lowdefault
