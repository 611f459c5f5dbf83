#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "hemon/graph.hpp"
#include "hemon/model/config.hpp"
#include "hemon/model/lstm.hpp"
#include "hemon/model/param.hpp"
#include "hemon/trunks.hpp"

namespace hemon::model {

// One training pair: per-node response values for a single stimulus plus
// its target. `ratings` feeds the regression head, `label` the
// classification head.
struct Sample {
    Eigen::MatrixXd features;  // node_count x input_dim
    Eigen::VectorXd ratings;   // size C
    int label = -1;
};

// level -> trunk -> ordered vertex sequence
using TrunkSequences = std::vector<std::vector<std::vector<graph::NodeId>>>;

// Common surface for trainable predictors. forward() records the
// activations needed by backward(); parameter gradients accumulate until
// zero_grads().
class Model {
public:
    virtual ~Model() = default;

    virtual const ModelConfig& config() const = 0;
    virtual int feature_node_count() const = 0;
    // Returns C x B logits for the batch. Training mode enables dropout,
    // drawing masks from dropout_rng.
    virtual Eigen::MatrixXd forward(const std::vector<const Sample*>& batch, bool training,
                                    Rng* dropout_rng) = 0;
    virtual void backward(const Eigen::MatrixXd& d_logits) = 0;
    virtual std::vector<Param*> params() = 0;

    void zero_grads();
    std::vector<Eigen::MatrixXd> snapshot_values();
    void restore_values(const std::vector<Eigen::MatrixXd>& values);
};

// Hierarchical trunk-sequence model: per-node features are linearly
// embedded, each trunk runs through its level's LSTM stack, trunk outputs
// sum within a level, and level representations combine through per-level
// linear maps into C logits.
class HemonModel : public Model {
public:
    HemonModel(ModelConfig cfg, TrunkSequences sequences);
    static HemonModel from_hierarchy(ModelConfig cfg, const trunks::TrunkHierarchy& h);

    const ModelConfig& config() const override { return cfg_; }
    int feature_node_count() const override { return node_count_; }
    int level_count() const { return static_cast<int>(sequences_.size()); }
    const TrunkSequences& sequences() const { return sequences_; }

    Eigen::MatrixXd forward(const std::vector<const Sample*>& batch, bool training,
                            Rng* dropout_rng) override;
    void backward(const Eigen::MatrixXd& d_logits) override;
    std::vector<Param*> params() override;

    // Sum of trunk LSTM outputs at one level (1-based), evaluation mode.
    Eigen::VectorXd level_representation(const Sample& sample, int level);
    // Sum over levels of the per-level linear maps.
    Eigen::VectorXd combine_levels(const std::vector<Eigen::VectorXd>& reprs) const;

private:
    LstmStack& stack_for_level(int level_index);

    ModelConfig cfg_;
    TrunkSequences sequences_;
    int node_count_ = 0;

    Param w_in_;
    Param b_in_;
    std::vector<LstmStack> stacks_;  // per level, or a single shared stack
    std::vector<Param> w_comb_;      // per level: C x hidden

    struct TrunkTape {
        std::vector<Eigen::MatrixXd> raw;  // input_dim x B per step
        LstmTape lstm;
    };
    struct Tape {
        int batch = 0;
        std::vector<std::vector<TrunkTape>> trunks;   // [level][trunk]
        std::vector<Eigen::MatrixXd> level_repr;      // hidden x B per level
    };
    Tape tape_;
};

// Flattened two-layer perceptron baseline sharing the heads and the
// training loop.
class FnnModel : public Model {
public:
    FnnModel(ModelConfig cfg, int node_count);

    const ModelConfig& config() const override { return cfg_; }
    int feature_node_count() const override { return node_count_; }

    Eigen::MatrixXd forward(const std::vector<const Sample*>& batch, bool training,
                            Rng* dropout_rng) override;
    void backward(const Eigen::MatrixXd& d_logits) override;
    std::vector<Param*> params() override;

private:
    ModelConfig cfg_;
    int node_count_;
    Param w1_, b1_, w2_, b2_;

    struct Tape {
        Eigen::MatrixXd x;        // flattened inputs
        Eigen::MatrixXd hidden;   // tanh activations, pre-dropout
        Eigen::MatrixXd dropped;  // hidden after dropout (== hidden in eval)
        Eigen::MatrixXd mask;     // dropout mask (empty when none)
    };
    Tape tape_;
};

// Ablation keeping only the 1st-level trunks and combination map; shared
// parameters are copied from the source model.
HemonModel build_ea1_variant(HemonModel& full);

// Preorder depth-first vertex sequence from node 0, neighbors in ascending
// id order.
std::vector<graph::NodeId> dft_sequence(const graph::Tree& t);

// Ablation replacing the hierarchy with the single depth-first sequence.
HemonModel build_dft_variant(ModelConfig cfg, const graph::Tree& t);

// Heads --------------------------------------------------------------------

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z);
Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& z);

// a * sigmoid(logits), evaluation mode.
Eigen::VectorXd predict_ratings(Model& m, const Sample& sample);

struct ClassPrediction {
    int index = 0;
    Eigen::VectorXd probabilities;
};

// softmax over logits; argmax with smallest-index tie-break.
ClassPrediction predict_class(Model& m, const Sample& sample);

// Rows are samples, columns are categories; evaluation in batches.
Eigen::MatrixXd predict_ratings_matrix(Model& m, const std::vector<Sample>& samples);

}  // namespace hemon::model
