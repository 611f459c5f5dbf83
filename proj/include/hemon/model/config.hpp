#pragma once

#include <cstdint>

#include "hemon/error.hpp"

namespace hemon::model {

enum class HeadKind { kRegression, kClassification };

// Training loss for the regression head; classification always uses
// cross-entropy.
enum class LossKind { kL1, kMse };

struct ModelConfig {
    int input_dim = 1;      // per-node feature width
    int embed_dim = 64;     // width after the input linear map
    int hidden_dim = 64;    // LSTM hidden units per layer
    int lstm_layers = 3;
    double dropout = 0.2;   // between stacked LSTM layers, not after the last
    int batch_size = 32;
    double lr_init = 5e-4;
    double lr_factor = 0.5;
    int lr_patience = 10;   // epochs without validation improvement
    double lr_min = 2e-5;
    int max_epochs = 300;
    HeadKind head = HeadKind::kRegression;
    LossKind loss = LossKind::kL1;
    double max_rating = 100.0;  // rating scale `a` for the regression head
    int categories = 1;         // output dimension C
    // One LSTM stack per level by default; flip to reuse a single stack
    // across levels.
    bool share_level_stacks = false;
    std::uint64_t seed = 0;

    void validate() const {
        if (input_dim < 1 || embed_dim < 1 || hidden_dim < 1 || lstm_layers < 1 ||
            batch_size < 1 || max_epochs < 1 || categories < 1 || lr_patience < 1) {
            throw DataError("model config: all dimensions and counts must be positive");
        }
        if (!(dropout >= 0.0 && dropout < 1.0)) {
            throw DataError("model config: dropout must lie in [0, 1)");
        }
        if (!(lr_init > 0.0 && lr_factor > 0.0 && lr_factor < 1.0 && lr_min > 0.0)) {
            throw DataError("model config: invalid learning-rate schedule");
        }
        if (!(lr_min < lr_init)) {
            throw DataError("model config: lr_min must be below lr_init");
        }
        if (!(max_rating > 0.0)) {
            throw DataError("model config: max rating must be positive");
        }
    }
};

}  // namespace hemon::model
