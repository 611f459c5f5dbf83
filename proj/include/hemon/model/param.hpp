#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "hemon/rng.hpp"

namespace hemon::model {

// Named parameter tensor with its gradient accumulator.
struct Param {
    std::string name;
    Eigen::MatrixXd value;
    Eigen::MatrixXd grad;

    Param(std::string n, int rows, int cols)
        : name(std::move(n)),
          value(Eigen::MatrixXd::Zero(rows, cols)),
          grad(Eigen::MatrixXd::Zero(rows, cols)) {}

    void zero_grad() { grad.setZero(); }
};

// Glorot/Xavier uniform fill: U(-b, b) with b = sqrt(6 / (fan_in + fan_out)),
// fan_in = cols, fan_out = rows.
Eigen::MatrixXd xavier_init(int rows, int cols, Rng& rng);
Eigen::MatrixXd xavier_init(int rows, int cols, std::uint64_t seed);

}  // namespace hemon::model
