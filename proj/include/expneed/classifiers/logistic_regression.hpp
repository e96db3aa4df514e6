#ifndef EXPNEED_CLASSIFIERS_LOGISTIC_REGRESSION_HPP
#define EXPNEED_CLASSIFIERS_LOGISTIC_REGRESSION_HPP

#include <algorithm>
#include <cmath>
#include <vector>

#include "expneed/classifiers/common.hpp"
#include "expneed/classifiers/spec.hpp"

namespace expneed {

/// L2-regularized logistic regression,
///   min  1/2 |w|^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b))),
/// solved by truncated Newton (conjugate gradient on Hessian-vector
/// products). solver=newton-cg leaves the intercept unpenalized;
/// solver=liblinear penalizes it like any other weight (intercept as a
/// constant-1 feature).
class LogisticRegressionModel {
public:
    static LogisticRegressionModel fit(const ClassifierSpec& spec, const TrainingSet& data) {
        const double c = spec.real("C");
        const bool penalize_bias = spec.choice("solver") == "liblinear";
        const auto max_iter = spec.integer("max_iter");
        const double tol = spec.real("tol");
        const std::size_t dim = data.dimension;
        const std::size_t n = data.size();

        // Parameter layout: [w_0 .. w_{dim-1}, b].
        std::vector<double> theta(dim + 1, 0.0);
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = data.labels[i] ? 1.0 : -1.0;

        auto margins = [&](const std::vector<double>& p) {
            std::vector<double> z(n);
            for (std::size_t i = 0; i < n; ++i) z[i] = dot(data.vectors[i], p) + p[dim];
            return z;
        };
        auto objective = [&](const std::vector<double>& p, const std::vector<double>& z) {
            double f = 0.0;
            for (std::size_t t = 0; t < dim; ++t) f += 0.5 * p[t] * p[t];
            if (penalize_bias) f += 0.5 * p[dim] * p[dim];
            for (std::size_t i = 0; i < n; ++i) f += c * detail::log1p_exp_neg(y[i] * z[i]);
            return f;
        };

        LogisticRegressionModel m;
        std::vector<double> z = margins(theta);
        double f = objective(theta, z);
        std::vector<double> grad(dim + 1), curvature(n);

        for (std::int64_t iter = 0; iter < max_iter; ++iter) {
            // Gradient and per-sample curvature.
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t t = 0; t < dim; ++t) grad[t] = theta[t];
            if (penalize_bias) grad[dim] = theta[dim];
            for (std::size_t i = 0; i < n; ++i) {
                const double s = detail::sigmoid(y[i] * z[i]);
                const double coef = c * (s - 1.0) * y[i];
                for (const auto& e : data.vectors[i].entries) grad[e.index] += coef * e.weight;
                grad[dim] += coef;
                curvature[i] = c * s * (1.0 - s);
            }
            double grad_inf = 0.0, grad_sq = 0.0;
            for (double g : grad) {
                grad_inf = std::max(grad_inf, std::abs(g));
                grad_sq += g * g;
            }
            m.iterations_ = static_cast<int>(iter);
            if (grad_inf <= tol) {
                m.converged_ = true;
                break;
            }

            auto hessian_times = [&](const std::vector<double>& v, std::vector<double>& out) {
                for (std::size_t t = 0; t < dim; ++t) out[t] = v[t];
                out[dim] = penalize_bias ? v[dim] : 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double proj = curvature[i] * (dot(data.vectors[i], v) + v[dim]);
                    for (const auto& e : data.vectors[i].entries) out[e.index] += proj * e.weight;
                    out[dim] += proj;
                }
            };

            // Solve H d = -g approximately (Steihaug-free CG; H is PSD).
            std::vector<double> d(dim + 1, 0.0), r(grad), p(dim + 1), hp(dim + 1);
            for (std::size_t k = 0; k <= dim; ++k) r[k] = -grad[k];
            p = r;
            double rr = grad_sq;
            const double cg_tol = std::min(0.5, std::sqrt(std::sqrt(grad_sq))) * std::sqrt(grad_sq);
            for (std::size_t cg = 0; cg < 200 && std::sqrt(rr) > cg_tol; ++cg) {
                hessian_times(p, hp);
                double php = 0.0;
                for (std::size_t k = 0; k <= dim; ++k) php += p[k] * hp[k];
                if (php <= 1e-300) break;
                const double step = rr / php;
                double rr_new = 0.0;
                for (std::size_t k = 0; k <= dim; ++k) {
                    d[k] += step * p[k];
                    r[k] -= step * hp[k];
                    rr_new += r[k] * r[k];
                }
                for (std::size_t k = 0; k <= dim; ++k) p[k] = r[k] + (rr_new / rr) * p[k];
                rr = rr_new;
            }
            double slope = 0.0;
            for (std::size_t k = 0; k <= dim; ++k) slope += grad[k] * d[k];
            if (slope >= 0.0) {  // CG broke down; fall back to steepest descent
                for (std::size_t k = 0; k <= dim; ++k) d[k] = -grad[k];
                slope = -grad_sq;
            }

            // Armijo backtracking.
            double step = 1.0;
            std::vector<double> candidate(dim + 1);
            bool accepted = false;
            for (int ls = 0; ls < 50; ++ls) {
                for (std::size_t k = 0; k <= dim; ++k) candidate[k] = theta[k] + step * d[k];
                auto z_new = margins(candidate);
                const double f_new = objective(candidate, z_new);
                if (f_new <= f + 1e-4 * step * slope) {
                    theta.swap(candidate);
                    z.swap(z_new);
                    f = f_new;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) break;
            m.iterations_ = static_cast<int>(iter) + 1;
        }

        m.weights_.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(dim));
        m.bias_ = theta[dim];
        return m;
    }

    double decision(const SparseVector& x) const { return dot(x, weights_) + bias_; }
    double score(const SparseVector& x) const { return detail::sigmoid(decision(x)); }

    bool converged() const noexcept { return converged_; }
    int iterations() const noexcept { return iterations_; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double bias() const noexcept { return bias_; }

    Json to_json() const {
        return {{"weights", weights_}, {"bias", bias_}, {"converged", converged_}, {"iterations", iterations_}};
    }

    static LogisticRegressionModel from_json(const Json& j, std::size_t dimension) {
        LogisticRegressionModel m;
        m.weights_ = j.at("weights").get<std::vector<double>>();
        if (m.weights_.size() != dimension) throw ModelIoError("logistic regression weight length mismatch");
        m.bias_ = j.at("bias").get<double>();
        m.converged_ = j.at("converged").get<bool>();
        m.iterations_ = j.at("iterations").get<int>();
        return m;
    }

private:
    std::vector<double> weights_;
    double bias_ = 0.0;
    bool converged_ = false;
    int iterations_ = 0;
};

}  // namespace expneed

#endif
