#include "hemon/model/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace hemon::model {

double mae(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& predicted) {
    if (truth.rows() != predicted.rows() || truth.cols() != predicted.cols()) {
        throw DataError("MAE shape mismatch: " + std::to_string(truth.rows()) + "x" +
                        std::to_string(truth.cols()) + " vs " +
                        std::to_string(predicted.rows()) + "x" +
                        std::to_string(predicted.cols()));
    }
    if (truth.rows() == 0) throw DataError("MAE of zero stimuli");
    return (truth - predicted).cwiseAbs().sum() / static_cast<double>(truth.rows());
}

double regression_l1_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets,
                          double max_rating, Eigen::MatrixXd* d_logits) {
    const double b = static_cast<double>(logits.cols());
    const Eigen::MatrixXd pred = max_rating * sigmoid(logits);
    const Eigen::MatrixXd diff = pred - targets;
    if (d_logits) {
        // d|e|/dlogit = sign(e) * a * s(1-s) = sign(e) * pred * (1 - pred/a)
        const Eigen::MatrixXd dpred =
            pred.cwiseProduct((1.0 - pred.array() / max_rating).matrix());
        *d_logits = diff.array().sign().matrix().cwiseProduct(dpred) / b;
    }
    return diff.cwiseAbs().sum() / b;
}

double regression_mse_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets,
                           double max_rating, Eigen::MatrixXd* d_logits) {
    const double b = static_cast<double>(logits.cols());
    const Eigen::MatrixXd pred = max_rating * sigmoid(logits);
    const Eigen::MatrixXd diff = pred - targets;
    if (d_logits) {
        const Eigen::MatrixXd dpred =
            pred.cwiseProduct((1.0 - pred.array() / max_rating).matrix());
        *d_logits = 2.0 * diff.cwiseProduct(dpred) / b;
    }
    return diff.array().square().sum() / b;
}

double cross_entropy_loss(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                          Eigen::MatrixXd* d_logits) {
    const int b = static_cast<int>(logits.cols());
    if (static_cast<int>(labels.size()) != b) {
        throw DataError("label count does not match batch size");
    }
    const Eigen::MatrixXd probs = softmax_columns(logits);
    double loss = 0.0;
    for (int j = 0; j < b; ++j) {
        const int y = labels[j];
        if (y < 0 || y >= logits.rows()) throw DataError("class label out of range");
        loss -= std::log(std::max(probs(y, j), 1e-300));
    }
    if (d_logits) {
        *d_logits = probs;
        for (int j = 0; j < b; ++j) (*d_logits)(labels[j], j) -= 1.0;
        *d_logits /= static_cast<double>(b);
    }
    return loss / static_cast<double>(b);
}

// ---------------------------------------------------------------------------
// Adam
// ---------------------------------------------------------------------------

Adam::Adam(std::vector<Param*> params, double beta1, double beta2, double epsilon)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
    for (const Param* p : params_) {
        m_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(Eigen::MatrixXd::Zero(p->value.rows(), p->value.cols()));
    }
}

void Adam::step(double lr) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < params_.size(); ++i) {
        Param& p = *params_[i];
        m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
        v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
        const Eigen::MatrixXd m_hat = m_[i] / bc1;
        const Eigen::MatrixXd v_hat = v_[i] / bc2;
        p.value -= lr * m_hat.cwiseQuotient(
                            (v_hat.array().sqrt() + epsilon_).matrix());
    }
}

// ---------------------------------------------------------------------------
// PlateauScheduler
// ---------------------------------------------------------------------------

PlateauScheduler::PlateauScheduler(double lr_init, double factor, int patience, double lr_min)
    : lr_(lr_init),
      factor_(factor),
      lr_min_(lr_min),
      patience_(patience),
      best_metric_(std::numeric_limits<double>::infinity()) {}

PlateauScheduler::Observation PlateauScheduler::observe(int epoch, double metric) {
    Observation obs;
    if (metric < best_metric_) {
        best_metric_ = metric;
        epochs_since_best_ = 0;
        obs.improved = true;
        return obs;
    }
    if (++epochs_since_best_ >= patience_) {
        const double old_lr = lr_;
        lr_ *= factor_;
        events_.push_back(LrEvent{epoch, old_lr, lr_});
        epochs_since_best_ = 0;
        if (lr_ < lr_min_) obs.stop = true;
    }
    return obs;
}

// ---------------------------------------------------------------------------
// Training loop
// ---------------------------------------------------------------------------

namespace {

double validation_metric(Model& m, const std::vector<Sample>& val) {
    if (m.config().head == HeadKind::kRegression) return evaluate_mae(m, val);
    return evaluate_cross_entropy(m, val);
}

}  // namespace

TrainReport train(Model& m, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set) {
    const auto started = std::chrono::steady_clock::now();
    const ModelConfig& cfg = m.config();
    cfg.validate();
    if (train_set.empty() || val_set.empty()) {
        throw DataError("training needs non-empty train and validation sets");
    }

    Rng shuffle_rng = Rng::substream(cfg.seed, "shuffle");
    Rng dropout_rng = Rng::substream(cfg.seed, "dropout");
    Adam opt(m.params());
    PlateauScheduler sched(cfg.lr_init, cfg.lr_factor, cfg.lr_patience, cfg.lr_min);

    TrainReport report;
    report.seed = cfg.seed;
    report.metric_name =
        cfg.head == HeadKind::kRegression ? "val_mae" : "val_cross_entropy";

    std::vector<int> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    std::vector<Eigen::MatrixXd> best_values = m.snapshot_values();
    double best_val = std::numeric_limits<double>::infinity();
    int best_epoch = 0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        shuffle_rng.shuffle(order);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::vector<const Sample*> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) batch.push_back(&train_set[order[i]]);

            const Eigen::MatrixXd logits = m.forward(batch, /*training=*/true, &dropout_rng);

            Eigen::MatrixXd d_logits;
            double loss = 0.0;
            if (cfg.head == HeadKind::kRegression) {
                Eigen::MatrixXd targets(cfg.categories, static_cast<int>(batch.size()));
                for (std::size_t i = 0; i < batch.size(); ++i) {
                    targets.col(static_cast<int>(i)) = batch[i]->ratings;
                }
                loss = cfg.loss == LossKind::kL1
                           ? regression_l1_loss(logits, targets, cfg.max_rating, &d_logits)
                           : regression_mse_loss(logits, targets, cfg.max_rating, &d_logits);
            } else {
                std::vector<int> labels;
                labels.reserve(batch.size());
                for (const Sample* s : batch) labels.push_back(s->label);
                loss = cross_entropy_loss(logits, labels, &d_logits);
            }
            if (!std::isfinite(loss)) {
                throw NumericError("non-finite training loss at epoch " +
                                   std::to_string(epoch) + ", batch starting at index " +
                                   std::to_string(start));
            }
            loss_sum += loss * static_cast<double>(batch.size());

            m.zero_grads();
            m.backward(d_logits);
            opt.step(sched.lr());
        }
        report.train_loss.push_back(loss_sum / static_cast<double>(train_set.size()));

        const double val = validation_metric(m, val_set);
        if (!std::isfinite(val)) {
            throw NumericError("non-finite validation metric at epoch " +
                               std::to_string(epoch));
        }
        report.val_metric.push_back(val);

        const auto obs = sched.observe(epoch, val);
        if (val < best_val) {
            best_val = val;
            best_epoch = epoch;
            best_values = m.snapshot_values();
        }
        report.epochs_run = epoch;
        if (obs.stop) {
            report.stop_reason = "lr_below_min";
            break;
        }
    }
    if (report.stop_reason.empty()) report.stop_reason = "max_epochs";

    m.restore_values(best_values);
    report.lr_events = sched.events();
    report.best_epoch = best_epoch;
    report.best_val = best_val;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

double evaluate_mae(Model& m, const std::vector<Sample>& samples) {
    if (samples.empty()) throw DataError("evaluation over zero samples");
    Eigen::MatrixXd truth(static_cast<int>(samples.size()), m.config().categories);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        truth.row(static_cast<int>(i)) = samples[i].ratings.transpose();
    }
    return mae(truth, predict_ratings_matrix(m, samples));
}

double evaluate_cross_entropy(Model& m, const std::vector<Sample>& samples) {
    if (samples.empty()) throw DataError("evaluation over zero samples");
    const int chunk = std::max(1, m.config().batch_size);
    double total = 0.0;
    for (std::size_t start = 0; start < samples.size(); start += chunk) {
        const std::size_t stop = std::min(samples.size(), start + chunk);
        std::vector<const Sample*> batch;
        std::vector<int> labels;
        for (std::size_t i = start; i < stop; ++i) {
            batch.push_back(&samples[i]);
            labels.push_back(samples[i].label);
        }
        const Eigen::MatrixXd logits = m.forward(batch, /*training=*/false, nullptr);
        total += cross_entropy_loss(logits, labels, nullptr) *
                 static_cast<double>(batch.size());
    }
    return total / static_cast<double>(samples.size());
}

}  // namespace hemon::model
