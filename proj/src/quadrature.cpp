#include "lowdefault/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <array>
#include <mutex>

#include "lowdefault/errors.hpp"

namespace lowdefault {
namespace {

// Golub-Welsch: the nodes are the eigenvalues of the Jacobi matrix of the
// probabilists' Hermite recurrence. Weights come from the Christoffel
// function 1 / sum_j p_j(x)^2 of the orthonormal polynomials, which avoids
// computing eigenvectors.
QuadratureRule build_rule(int count)
{
    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(count);
    Eigen::VectorXd off_diagonal(count - 1);
    for (int i = 0; i < count - 1; ++i)
        off_diagonal[i] = std::sqrt(static_cast<double>(i + 1));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, off_diagonal, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw EstimationError("Gauss-Hermite eigenvalue computation failed");

    QuadratureRule rule;
    rule.nodes.resize(count);
    rule.weights.resize(count);
    constexpr double kRescale = 1e-100;
    const double log_rescale = std::log(kRescale);
    for (int i = 0; i < count; ++i) {
        const double x = solver.eigenvalues()[i];
        rule.nodes[i] = x;
        // Weight is below exp(-x^2/2); nothing representable beyond this.
        if (0.5 * x * x > 740.0) {
            rule.weights[i] = 0.0;
            continue;
        }
        double p_prev = 0.0;
        double p = 1.0;
        double sum = 1.0;
        double log_scale = 0.0;  // true p = scaled p * exp(log_scale)
        for (int j = 0; j + 1 < count; ++j) {
            const double p_next = (x * p - std::sqrt(static_cast<double>(j)) * p_prev)
                                  / std::sqrt(static_cast<double>(j + 1));
            p_prev = p;
            p = p_next;
            sum += p * p;
            if (std::abs(p) > 1e100) {
                p *= kRescale;
                p_prev *= kRescale;
                sum *= kRescale * kRescale;
                log_scale -= log_rescale;
            }
        }
        rule.weights[i] = std::exp(-std::log(sum) - 2.0 * log_scale);
    }
    return rule;
}

}  // namespace

const QuadratureRule& gauss_hermite_normal(int level)
{
    if (level < 0 || level > kHermiteMaxLevel)
        throw DomainError("Gauss-Hermite level out of range");
    static std::array<QuadratureRule, kHermiteMaxLevel + 1> rules;
    static std::array<std::once_flag, kHermiteMaxLevel + 1> flags;
    std::call_once(flags[level], [level] { rules[level] = build_rule(kHermiteBaseNodes << level); });
    return rules[level];
}

const KronrodTable& kronrod15()
{
    static const KronrodTable table = [] {
        KronrodTable t{};
        const auto& abscissa = boost::math::quadrature::gauss_kronrod<double, 15>::abscissa();
        const auto& kronrod = boost::math::quadrature::gauss_kronrod<double, 15>::weights();
        const auto& gauss = boost::math::quadrature::gauss<double, 7>::weights();
        for (std::size_t i = 0; i < t.abscissa.size(); ++i) {
            t.abscissa[i] = abscissa[i];
            t.kronrod_weight[i] = kronrod[i];
        }
        for (std::size_t i = 0; i < t.gauss_weight.size(); ++i)
            t.gauss_weight[i] = gauss[i];
        return t;
    }();
    return table;
}

}  // namespace lowdefault
