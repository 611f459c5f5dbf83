#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hemon/model/param.hpp"
#include "hemon/rng.hpp"

namespace hemon::model {

// Activation record of one layer step; column b is batch element b.
struct LstmStepTape {
    Eigen::MatrixXd x;      // layer input at this step (after dropout below)
    Eigen::MatrixXd gates;  // [i; f; g; o] post-activation, 4H x B
    Eigen::MatrixXd c;      // cell state after the step
    Eigen::MatrixXd h;      // hidden state after the step
    Eigen::MatrixXd mask;   // dropout mask applied to h (empty when none)
};

struct LstmTape {
    std::vector<std::vector<LstmStepTape>> layers;  // [layer][step]
};

// Stacked LSTM over a feature sequence, standard gate formulation:
//   z = Wx x_t + Wh h_{t-1} + b,  split into (i, f, g, o)
//   c_t = f . c_{t-1} + i . g,    h_t = o . tanh(c_t)
// Inverted dropout is applied to each layer's output except the last, with
// a fresh mask per time step, training mode only.
class LstmStack {
public:
    LstmStack(std::string name_prefix, int input_dim, int hidden_dim, int layers,
              double dropout);

    void init_params(Rng& rng);
    std::vector<Param*> params();

    int input_dim() const { return input_dim_; }
    int hidden_dim() const { return hidden_dim_; }
    int layer_count() const { return layers_; }

    // seq holds one input_dim x B matrix per step. Returns the top layer's
    // final hidden state (H x B); an empty sequence gives zeros. The tape is
    // required for backward.
    Eigen::MatrixXd forward(const std::vector<Eigen::MatrixXd>& seq, bool training,
                            Rng* dropout_rng, LstmTape* tape) const;

    // d_top: gradient wrt the forward result. Accumulates parameter
    // gradients and returns per-step gradients wrt the sequence inputs.
    std::vector<Eigen::MatrixXd> backward(const Eigen::MatrixXd& d_top, const LstmTape& tape);

private:
    int input_dim_;
    int hidden_dim_;
    int layers_;
    double dropout_;
    std::vector<Param> wx_;  // per layer: 4H x in
    std::vector<Param> wh_;  // per layer: 4H x H
    std::vector<Param> b_;   // per layer: 4H x 1
};

// Single-sequence convenience: final hidden state for one vector sequence.
Eigen::VectorXd lstm_forward(const LstmStack& stack, const std::vector<Eigen::VectorXd>& seq);

}  // namespace hemon::model
