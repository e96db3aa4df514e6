#ifndef EXPNEED_CLASSIFIERS_SVM_HPP
#define EXPNEED_CLASSIFIERS_SVM_HPP

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <vector>

#include "expneed/classifiers/common.hpp"
#include "expneed/classifiers/spec.hpp"

namespace expneed {

enum class Kernel : std::uint8_t { linear, rbf };

/// C-SVM trained on the dual with SMO and second-order working set selection
/// (the libsvm scheme, without shrinking). Stops when the maximal KKT
/// violation drops below `tol` or after `max_iter` pair updates; the outcome
/// is kept in converged().
///
/// score(x) = sigmoid(f(x)) with f(x) = sum_i coef_i K(sv_i, x) - rho, so
/// label = (f(x) >= 0).
class SvmModel {
public:
    static SvmModel fit(const ClassifierSpec& spec, const TrainingSet& data) {
        SvmModel m;
        m.dimension_ = data.dimension;
        m.kernel_ = spec.choice("kernel") == "linear" ? Kernel::linear : Kernel::rbf;
        const auto& gamma = spec.param("gamma");
        // gamma=auto is 1 / number of features.
        m.gamma_ = std::holds_alternative<std::string>(gamma)
                       ? 1.0 / static_cast<double>(std::max<std::size_t>(1, data.dimension))
                       : std::get<double>(gamma);
        const double c = spec.real("C");
        const double eps = spec.real("tol");
        const auto max_iter = spec.integer("max_iter");

        const std::size_t n = data.size();
        std::vector<double> y(n), sq_norm(n), alpha(n, 0.0), grad(n, -1.0), diag(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = data.labels[i] ? 1.0 : -1.0;
            sq_norm[i] = squared_norm(data.vectors[i]);
        }
        auto kernel = [&](std::size_t i, std::size_t j) {
            if (m.kernel_ == Kernel::linear) return dot(data.vectors[i], data.vectors[j]);
            const double d2 = std::max(0.0, sq_norm[i] + sq_norm[j] - 2.0 * dot(data.vectors[i], data.vectors[j]));
            return std::exp(-m.gamma_ * d2);
        };
        for (std::size_t i = 0; i < n; ++i) diag[i] = kernel(i, i);

        // Rows of Q (Q_ij = y_i y_j K_ij), computed lazily with a FIFO budget.
        std::vector<std::vector<double>> rows(n);
        std::deque<std::size_t> cached;
        const std::size_t max_cached = std::max<std::size_t>(2, (std::size_t{1} << 25) / std::max<std::size_t>(1, n));
        auto q_row = [&](std::size_t i) -> const std::vector<double>& {
            if (rows[i].empty()) {
                if (cached.size() >= max_cached) {
                    rows[cached.front()].clear();
                    rows[cached.front()].shrink_to_fit();
                    cached.pop_front();
                }
                rows[i].resize(n);
                for (std::size_t j = 0; j < n; ++j) rows[i][j] = y[i] * y[j] * kernel(i, j);
                cached.push_back(i);
            }
            return rows[i];
        };

        auto at_upper = [&](std::size_t i) { return alpha[i] >= c; };
        auto at_lower = [&](std::size_t i) { return alpha[i] <= 0.0; };
        constexpr double tau = 1e-12;

        std::int64_t iter = 0;
        for (; iter < max_iter; ++iter) {
            // Select i: maximal violating index.
            double gmax = -std::numeric_limits<double>::infinity();
            std::optional<std::size_t> pick_i;
            for (std::size_t t = 0; t < n; ++t) {
                if (y[t] > 0) {
                    if (!at_upper(t) && -grad[t] >= gmax) {
                        gmax = -grad[t];
                        pick_i = t;
                    }
                } else if (!at_lower(t) && grad[t] >= gmax) {
                    gmax = grad[t];
                    pick_i = t;
                }
            }
            if (!pick_i) {
                m.converged_ = true;
                break;
            }
            const std::size_t i = *pick_i;
            const auto& qi = q_row(i);

            // Select j: largest second-order objective decrease.
            double gmax2 = -std::numeric_limits<double>::infinity();
            double best_obj = std::numeric_limits<double>::infinity();
            std::optional<std::size_t> pick_j;
            for (std::size_t t = 0; t < n; ++t) {
                if (y[t] > 0) {
                    if (!at_lower(t)) {
                        const double grad_diff = gmax + grad[t];
                        gmax2 = std::max(gmax2, grad[t]);
                        if (grad_diff > 0) {
                            double quad = diag[i] + diag[t] - 2.0 * y[i] * qi[t];
                            if (quad <= 0) quad = tau;
                            const double obj = -(grad_diff * grad_diff) / quad;
                            if (obj <= best_obj) {
                                best_obj = obj;
                                pick_j = t;
                            }
                        }
                    }
                } else if (!at_upper(t)) {
                    const double grad_diff = gmax - grad[t];
                    gmax2 = std::max(gmax2, -grad[t]);
                    if (grad_diff > 0) {
                        double quad = diag[i] + diag[t] + 2.0 * y[i] * qi[t];
                        if (quad <= 0) quad = tau;
                        const double obj = -(grad_diff * grad_diff) / quad;
                        if (obj <= best_obj) {
                            best_obj = obj;
                            pick_j = t;
                        }
                    }
                }
            }
            if (gmax + gmax2 < eps || !pick_j) {
                m.converged_ = true;
                break;
            }
            const std::size_t j = *pick_j;
            const auto& qj = q_row(j);
            const auto& qi_again = q_row(i);  // may have been evicted by q_row(j)

            const double old_ai = alpha[i], old_aj = alpha[j];
            if (y[i] != y[j]) {
                double quad = diag[i] + diag[j] + 2.0 * qi_again[j];
                if (quad <= 0) quad = tau;
                const double delta = (-grad[i] - grad[j]) / quad;
                const double diff = alpha[i] - alpha[j];
                alpha[i] += delta;
                alpha[j] += delta;
                if (diff > 0) {
                    if (alpha[j] < 0) {
                        alpha[j] = 0;
                        alpha[i] = diff;
                    }
                } else if (alpha[i] < 0) {
                    alpha[i] = 0;
                    alpha[j] = -diff;
                }
                if (diff > 0) {
                    if (alpha[i] > c) {
                        alpha[i] = c;
                        alpha[j] = c - diff;
                    }
                } else if (alpha[j] > c) {
                    alpha[j] = c;
                    alpha[i] = c + diff;
                }
            } else {
                double quad = diag[i] + diag[j] - 2.0 * qi_again[j];
                if (quad <= 0) quad = tau;
                const double delta = (grad[i] - grad[j]) / quad;
                const double sum = alpha[i] + alpha[j];
                alpha[i] -= delta;
                alpha[j] += delta;
                if (sum > c) {
                    if (alpha[i] > c) {
                        alpha[i] = c;
                        alpha[j] = sum - c;
                    }
                } else if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = sum;
                }
                if (sum > c) {
                    if (alpha[j] > c) {
                        alpha[j] = c;
                        alpha[i] = sum - c;
                    }
                } else if (alpha[i] < 0) {
                    alpha[i] = 0;
                    alpha[j] = sum;
                }
            }
            const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
            for (std::size_t t = 0; t < n; ++t) grad[t] += qi_again[t] * dai + qj[t] * daj;
        }
        m.iterations_ = iter;

        // rho from free support vectors, else the midpoint of the feasible range.
        double upper = std::numeric_limits<double>::infinity();
        double lower = -std::numeric_limits<double>::infinity();
        double free_sum = 0.0;
        std::size_t free_count = 0;
        for (std::size_t t = 0; t < n; ++t) {
            const double yg = y[t] * grad[t];
            if (at_upper(t)) {
                if (y[t] < 0) upper = std::min(upper, yg);
                else lower = std::max(lower, yg);
            } else if (at_lower(t)) {
                if (y[t] > 0) upper = std::min(upper, yg);
                else lower = std::max(lower, yg);
            } else {
                ++free_count;
                free_sum += yg;
            }
        }
        m.rho_ = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;

        for (std::size_t t = 0; t < n; ++t) {
            if (alpha[t] <= 0.0) continue;
            m.support_.push_back(data.vectors[t]);
            m.coef_.push_back(alpha[t] * y[t]);
        }
        if (m.kernel_ == Kernel::linear) {
            m.weights_.assign(m.dimension_, 0.0);
            for (std::size_t s = 0; s < m.support_.size(); ++s)
                for (const auto& e : m.support_[s].entries) m.weights_[e.index] += m.coef_[s] * e.weight;
        }
        return m;
    }

    double decision(const SparseVector& x) const {
        if (kernel_ == Kernel::linear) return dot(x, weights_) - rho_;
        double f = -rho_;
        for (std::size_t s = 0; s < support_.size(); ++s)
            f += coef_[s] * std::exp(-gamma_ * squared_distance(support_[s], x));
        return f;
    }

    double score(const SparseVector& x) const { return detail::sigmoid(decision(x)); }

    bool converged() const noexcept { return converged_; }
    std::int64_t iterations() const noexcept { return iterations_; }
    double gamma() const noexcept { return gamma_; }
    std::size_t support_count() const noexcept { return support_.size(); }

    Json to_json() const {
        Json j{{"kernel", kernel_ == Kernel::linear ? "linear" : "rbf"},
               {"gamma", gamma_},
               {"rho", rho_},
               {"converged", converged_},
               {"iterations", iterations_}};
        if (kernel_ == Kernel::linear) {
            j["weights"] = weights_;
        } else {
            Json svs = Json::array();
            for (const auto& sv : support_) svs.push_back(detail::sparse_to_json(sv));
            j["support_vectors"] = std::move(svs);
            j["coefficients"] = coef_;
        }
        return j;
    }

    static SvmModel from_json(const Json& j, std::size_t dimension) {
        SvmModel m;
        m.dimension_ = dimension;
        m.kernel_ = j.at("kernel").get<std::string>() == "linear" ? Kernel::linear : Kernel::rbf;
        m.gamma_ = j.at("gamma").get<double>();
        m.rho_ = j.at("rho").get<double>();
        m.converged_ = j.at("converged").get<bool>();
        m.iterations_ = j.at("iterations").get<std::int64_t>();
        if (m.kernel_ == Kernel::linear) {
            m.weights_ = j.at("weights").get<std::vector<double>>();
            if (m.weights_.size() != dimension) throw ModelIoError("svm weight length mismatch");
        } else {
            for (const auto& sv : j.at("support_vectors")) m.support_.push_back(detail::sparse_from_json(sv, dimension));
            m.coef_ = j.at("coefficients").get<std::vector<double>>();
            if (m.coef_.size() != m.support_.size()) throw ModelIoError("svm coefficient count mismatch");
        }
        return m;
    }

private:
    std::size_t dimension_ = 0;
    Kernel kernel_ = Kernel::rbf;
    double gamma_ = 0.0;
    double rho_ = 0.0;
    std::vector<SparseVector> support_;
    std::vector<double> coef_;
    std::vector<double> weights_;
    bool converged_ = false;
    std::int64_t iterations_ = 0;
};

}  // namespace expneed

#endif
