#pragma once

// Small dense network with ReLU hidden layers and a 2-logit softmax head,
// trained by mini-batch backprop with adaptive-moment updates. Sized for
// 51-dim inputs; layer widths are stored so masked (reduced) inputs work too.

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "advfeat/error.hpp"
#include "advfeat/matrix.hpp"
#include "advfeat/rng.hpp"

namespace advfeat {

struct MlpModel {
    std::vector<std::size_t> layers;           // e.g. {51, 64, 32, 2}
    std::vector<Matrix> weights;               // weights[l]: layers[l+1] x layers[l]
    std::vector<std::vector<double>> biases;   // biases[l]: layers[l+1]
    double lr = 1e-3;
    std::size_t batch = 32;
    std::size_t max_epochs = 200;
    std::size_t patience = 20;
    std::size_t epochs_used = 0;
};

struct MlpGradients {
    std::vector<Matrix> weights;
    std::vector<std::vector<double>> biases;
};

inline MlpModel make_mlp(const std::vector<std::size_t>& layers, std::uint64_t seed) {
    MlpModel m;
    m.layers = layers;
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        const std::size_t fan_in = layers[l];
        const std::size_t fan_out = layers[l + 1];
        Matrix w(fan_out, fan_in);
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        for (double& v : w.data()) v = rng.normal() * scale;
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out, 0.0);
    }
    return m;
}

namespace detail {

/// Forward pass for one sample; fills per-layer activations (post-ReLU for
/// hidden layers, raw logits for the last). activations[0] is the input.
inline void mlp_forward(const MlpModel& m, const double* x,
                        std::vector<std::vector<double>>& activations) {
    const std::size_t n_layers = m.weights.size();
    activations.resize(n_layers + 1);
    activations[0].assign(x, x + m.layers[0]);
    for (std::size_t l = 0; l < n_layers; ++l) {
        const Matrix& w = m.weights[l];
        const std::vector<double>& prev = activations[l];
        std::vector<double>& cur = activations[l + 1];
        cur.assign(w.rows(), 0.0);
        for (std::size_t o = 0; o < w.rows(); ++o) {
            double acc = m.biases[l][o];
            const double* wr = w.row(o);
            for (std::size_t i = 0; i < w.cols(); ++i) acc += wr[i] * prev[i];
            cur[o] = (l + 1 < n_layers && acc < 0.0) ? 0.0 : acc;  // ReLU on hidden layers
        }
    }
}

inline void softmax2(const std::vector<double>& logits, double& p0, double& p1) {
    const double mx = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - mx);
    const double e1 = std::exp(logits[1] - mx);
    p0 = e0 / (e0 + e1);
    p1 = e1 / (e0 + e1);
}

}  // namespace detail

/// Mean cross-entropy of the batch.
inline double mlp_loss(const MlpModel& m, const Matrix& x, const std::vector<int>& y) {
    std::vector<std::vector<double>> acts;
    double loss = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        detail::mlp_forward(m, x.row(i), acts);
        const auto& logits = acts.back();
        const double mx = std::max(logits[0], logits[1]);
        const double lse = mx + std::log(std::exp(logits[0] - mx) + std::exp(logits[1] - mx));
        loss += lse - logits[y[i] ? 1 : 0];
    }
    return loss / static_cast<double>(x.rows());
}

/// Backprop over the batch; gradients are averaged, matching mlp_loss.
inline std::pair<double, MlpGradients> mlp_loss_and_gradients(const MlpModel& m, const Matrix& x,
                                                              const std::vector<int>& y) {
    const std::size_t n_layers = m.weights.size();
    MlpGradients g;
    for (std::size_t l = 0; l < n_layers; ++l) {
        g.weights.emplace_back(m.weights[l].rows(), m.weights[l].cols());
        g.biases.emplace_back(m.biases[l].size(), 0.0);
    }
    std::vector<std::vector<double>> acts;
    std::vector<double> delta, delta_prev;
    double loss = 0.0;
    const double inv_n = 1.0 / static_cast<double>(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        detail::mlp_forward(m, x.row(i), acts);
        const auto& logits = acts.back();
        double p0, p1;
        detail::softmax2(logits, p0, p1);
        const double mx = std::max(logits[0], logits[1]);
        const double lse = mx + std::log(std::exp(logits[0] - mx) + std::exp(logits[1] - mx));
        loss += lse - logits[y[i] ? 1 : 0];

        delta = {p0, p1};
        delta[y[i] ? 1 : 0] -= 1.0;
        for (std::size_t l = n_layers; l-- > 0;) {
            const std::vector<double>& prev = acts[l];
            Matrix& gw = g.weights[l];
            for (std::size_t o = 0; o < gw.rows(); ++o) {
                const double d = delta[o] * inv_n;
                g.biases[l][o] += d;
                double* row = gw.row(o);
                for (std::size_t k = 0; k < gw.cols(); ++k) row[k] += d * prev[k];
            }
            if (l == 0) break;
            delta_prev.assign(m.layers[l], 0.0);
            const Matrix& w = m.weights[l];
            for (std::size_t o = 0; o < w.rows(); ++o) {
                const double d = delta[o];
                const double* row = w.row(o);
                for (std::size_t k = 0; k < w.cols(); ++k) delta_prev[k] += d * row[k];
            }
            // ReLU mask: activations at layer l are post-ReLU, zero means blocked.
            for (std::size_t k = 0; k < delta_prev.size(); ++k)
                if (acts[l][k] <= 0.0) delta_prev[k] = 0.0;
            delta.swap(delta_prev);
        }
    }
    return {loss * inv_n, std::move(g)};
}

/// Trains with seeded init and per-epoch seeded shuffling. With a validation
/// set, stops after `patience` epochs without improvement and restores the
/// best weights; without one, runs exactly 100 epochs.
inline MlpModel train_mlp(const Matrix& x, const std::vector<int>& labels, const Matrix* valid_x,
                          const std::vector<int>* valid_y, std::uint64_t seed,
                          std::vector<std::size_t> hidden = {64, 32}, double lr = 1e-3,
                          std::size_t batch = 32, std::size_t max_epochs = 200,
                          std::size_t patience = 20) {
    const std::size_t n = x.rows();
    if (n < 4) throw TooFewSamples("train_mlp needs at least 4 rows");
    if (labels.size() != n) throw DimensionMismatch("train_mlp: label count mismatch");
    for (double v : x.data())
        if (!std::isfinite(v)) throw NonFiniteInput("train_mlp: non-finite feature");
    bool has0 = false, has1 = false;
    for (int l : labels) (l ? has1 : has0) = true;
    if (!has0 || !has1) throw SingleClass("train_mlp needs both classes");

    std::vector<std::size_t> layers;
    layers.push_back(x.cols());
    for (std::size_t h : hidden) layers.push_back(h);
    layers.push_back(2);

    MlpModel m = make_mlp(layers, derive_seed(seed, 0));
    m.lr = lr;
    m.batch = batch;
    m.max_epochs = max_epochs;
    m.patience = patience;

    const bool has_valid = valid_x != nullptr && valid_y != nullptr && valid_x->rows() > 0;
    const std::size_t epochs = has_valid ? max_epochs : 100;

    // Adaptive-moment state, one slot per parameter tensor.
    MlpGradients mom, vel;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        mom.weights.emplace_back(m.weights[l].rows(), m.weights[l].cols());
        mom.biases.emplace_back(m.biases[l].size(), 0.0);
        vel.weights.emplace_back(m.weights[l].rows(), m.weights[l].cols());
        vel.biases.emplace_back(m.biases[l].size(), 0.0);
    }
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::size_t t = 0;

    Rng shuffle_rng(derive_seed(seed, 1));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    double best_loss = std::numeric_limits<double>::infinity();
    MlpModel best = m;
    std::size_t since_best = 0;

    Matrix bx;
    std::vector<int> by;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t bsz = std::min(batch, n - start);
            bx = Matrix(bsz, x.cols());
            by.resize(bsz);
            for (std::size_t i = 0; i < bsz; ++i) {
                std::copy(x.row(order[start + i]), x.row(order[start + i]) + x.cols(), bx.row(i));
                by[i] = labels[order[start + i]];
            }
            auto [bloss, grad] = mlp_loss_and_gradients(m, bx, by);
            (void)bloss;
            ++t;
            const double corr1 = 1.0 - std::pow(beta1, static_cast<double>(t));
            const double corr2 = 1.0 - std::pow(beta2, static_cast<double>(t));
            for (std::size_t l = 0; l < m.weights.size(); ++l) {
                auto update = [&](double& p, double& mo, double& ve, double gr) {
                    mo = beta1 * mo + (1.0 - beta1) * gr;
                    ve = beta2 * ve + (1.0 - beta2) * gr * gr;
                    p -= lr * (mo / corr1) / (std::sqrt(ve / corr2) + eps);
                };
                for (std::size_t i = 0; i < m.weights[l].data().size(); ++i)
                    update(m.weights[l].data()[i], mom.weights[l].data()[i],
                           vel.weights[l].data()[i], grad.weights[l].data()[i]);
                for (std::size_t i = 0; i < m.biases[l].size(); ++i)
                    update(m.biases[l][i], mom.biases[l][i], vel.biases[l][i], grad.biases[l][i]);
            }
        }
        m.epochs_used = epoch + 1;
        if (has_valid) {
            const double vloss = mlp_loss(m, *valid_x, *valid_y);
            if (vloss < best_loss) {
                best_loss = vloss;
                best = m;
                since_best = 0;
            } else if (++since_best >= patience) {
                break;
            }
        }
    }
    if (has_valid) {
        const std::size_t used = m.epochs_used;
        m = best;
        m.epochs_used = used;
    }
    return m;
}

/// Probability of the positive class for each row.
inline std::vector<double> mlp_scores(const MlpModel& m, const Matrix& x) {
    if (x.cols() != m.layers.front()) throw DimensionMismatch("mlp_scores: dimension mismatch");
    std::vector<double> out(x.rows());
    std::vector<std::vector<double>> acts;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        detail::mlp_forward(m, x.row(i), acts);
        double p0, p1;
        detail::softmax2(acts.back(), p0, p1);
        out[i] = p1;
    }
    return out;
}

}  // namespace advfeat
