#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hemon/model/model.hpp"

namespace hemon::model {

// Mean over stimuli (rows) of the sum over categories (columns) of absolute
// rating errors.
double mae(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& predicted);

// Losses return the scalar loss and fill d_logits (normalized by batch).
double regression_l1_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets,
                          double max_rating, Eigen::MatrixXd* d_logits);
double regression_mse_loss(const Eigen::MatrixXd& logits, const Eigen::MatrixXd& targets,
                           double max_rating, Eigen::MatrixXd* d_logits);
double cross_entropy_loss(const Eigen::MatrixXd& logits, const std::vector<int>& labels,
                          Eigen::MatrixXd* d_logits);

class Adam {
public:
    explicit Adam(std::vector<Param*> params, double beta1 = 0.9, double beta2 = 0.999,
                  double epsilon = 1e-8);

    void step(double lr);

private:
    std::vector<Param*> params_;
    double beta1_, beta2_, epsilon_;
    long t_ = 0;
    std::vector<Eigen::MatrixXd> m_;
    std::vector<Eigen::MatrixXd> v_;
};

struct LrEvent {
    int epoch = 0;
    double old_lr = 0.0;
    double new_lr = 0.0;

    bool operator==(const LrEvent&) const = default;
};

// Reduce-on-plateau: halve the rate after `patience` epochs without strict
// improvement of the validation metric; request a stop once the rate falls
// below the floor.
class PlateauScheduler {
public:
    PlateauScheduler(double lr_init, double factor, int patience, double lr_min);

    struct Observation {
        bool improved = false;
        bool stop = false;
    };

    Observation observe(int epoch, double metric);
    double lr() const { return lr_; }
    const std::vector<LrEvent>& events() const { return events_; }

private:
    double lr_, factor_, lr_min_;
    int patience_;
    int epochs_since_best_ = 0;
    double best_metric_;
    std::vector<LrEvent> events_;
};

struct TrainReport {
    std::vector<double> train_loss;   // per epoch
    std::vector<double> val_metric;   // per epoch
    std::string metric_name;          // "val_mae" or "val_cross_entropy"
    std::vector<LrEvent> lr_events;
    std::string stop_reason;          // "lr_below_min" or "max_epochs"
    int epochs_run = 0;
    int best_epoch = 0;               // 1-based epoch of the returned weights
    double best_val = 0.0;
    std::uint64_t seed = 0;
    double wall_seconds = 0.0;        // excluded from the determinism contract
};

// Mini-batch training with Adam and the plateau schedule from the model's
// config. Shuffle and dropout randomness derive from config.seed, so the
// report (wall time aside) is bit-identical across runs. The model is left
// holding its best-validation parameters. Throws NumericError on a
// non-finite loss.
TrainReport train(Model& m, const std::vector<Sample>& train_set,
                  const std::vector<Sample>& val_set);

// Eq.-style evaluation helpers (evaluation mode, deterministic).
double evaluate_mae(Model& m, const std::vector<Sample>& samples);
double evaluate_cross_entropy(Model& m, const std::vector<Sample>& samples);

}  // namespace hemon::model
