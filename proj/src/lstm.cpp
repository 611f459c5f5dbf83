#include "hemon/model/lstm.hpp"

#include <cmath>

#include "hemon/error.hpp"

namespace hemon::model {

namespace {

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

}  // namespace

Eigen::MatrixXd xavier_init(int rows, int cols, Rng& rng) {
    if (rows < 1 || cols < 1) throw DataError("xavier init needs positive dimensions");
    const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Eigen::MatrixXd m(rows, cols);
    // Column-major fill order, matching Eigen's storage.
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) m(i, j) = rng.uniform(-bound, bound);
    }
    return m;
}

Eigen::MatrixXd xavier_init(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    return xavier_init(rows, cols, rng);
}

LstmStack::LstmStack(std::string name_prefix, int input_dim, int hidden_dim, int layers,
                     double dropout)
    : input_dim_(input_dim), hidden_dim_(hidden_dim), layers_(layers), dropout_(dropout) {
    if (input_dim < 1 || hidden_dim < 1 || layers < 1) {
        throw DataError("LSTM stack needs positive dimensions");
    }
    for (int l = 0; l < layers_; ++l) {
        const int in = (l == 0) ? input_dim_ : hidden_dim_;
        const std::string p = name_prefix + ".layer" + std::to_string(l);
        wx_.emplace_back(p + ".Wx", 4 * hidden_dim_, in);
        wh_.emplace_back(p + ".Wh", 4 * hidden_dim_, hidden_dim_);
        b_.emplace_back(p + ".b", 4 * hidden_dim_, 1);
    }
}

void LstmStack::init_params(Rng& rng) {
    for (int l = 0; l < layers_; ++l) {
        wx_[l].value = xavier_init(static_cast<int>(wx_[l].value.rows()),
                                   static_cast<int>(wx_[l].value.cols()), rng);
        wh_[l].value = xavier_init(static_cast<int>(wh_[l].value.rows()),
                                   static_cast<int>(wh_[l].value.cols()), rng);
        b_[l].value.setZero();
    }
}

std::vector<Param*> LstmStack::params() {
    std::vector<Param*> out;
    for (int l = 0; l < layers_; ++l) {
        out.push_back(&wx_[l]);
        out.push_back(&wh_[l]);
        out.push_back(&b_[l]);
    }
    return out;
}

Eigen::MatrixXd LstmStack::forward(const std::vector<Eigen::MatrixXd>& seq, bool training,
                                   Rng* dropout_rng, LstmTape* tape) const {
    const int h = hidden_dim_;
    if (seq.empty()) {
        if (tape) tape->layers.clear();
        return Eigen::MatrixXd::Zero(h, 1);
    }
    const int batch = static_cast<int>(seq.front().cols());
    const int steps = static_cast<int>(seq.size());
    const bool drop = training && dropout_ > 0.0;

    if (tape) {
        tape->layers.assign(layers_, {});
        for (auto& lt : tape->layers) lt.resize(steps);
    }

    std::vector<Eigen::MatrixXd> inputs(seq.begin(), seq.end());
    Eigen::MatrixXd top_h;
    for (int l = 0; l < layers_; ++l) {
        Eigen::MatrixXd hs = Eigen::MatrixXd::Zero(h, batch);
        Eigen::MatrixXd cs = Eigen::MatrixXd::Zero(h, batch);
        std::vector<Eigen::MatrixXd> outputs(steps);
        for (int t = 0; t < steps; ++t) {
            if (inputs[t].rows() != (l == 0 ? input_dim_ : h) || inputs[t].cols() != batch) {
                throw DataError("LSTM input shape mismatch at step " + std::to_string(t));
            }
            Eigen::MatrixXd z = wx_[l].value * inputs[t] + wh_[l].value * hs;
            z.colwise() += Eigen::VectorXd(b_[l].value.col(0));

            Eigen::MatrixXd gates(4 * h, batch);
            gates.topRows(h) = sigmoid(z.topRows(h));                    // input gate
            gates.middleRows(h, h) = sigmoid(z.middleRows(h, h));        // forget gate
            gates.middleRows(2 * h, h) = z.middleRows(2 * h, h).array().tanh();  // candidate
            gates.bottomRows(h) = sigmoid(z.bottomRows(h));              // output gate

            cs = gates.middleRows(h, h).cwiseProduct(cs) +
                 gates.topRows(h).cwiseProduct(gates.middleRows(2 * h, h));
            hs = gates.bottomRows(h).cwiseProduct(cs.array().tanh().matrix());

            Eigen::MatrixXd mask;
            Eigen::MatrixXd out = hs;
            if (drop && l + 1 < layers_) {
                mask.resize(h, batch);
                const double keep = 1.0 - dropout_;
                for (int j = 0; j < batch; ++j) {
                    for (int i = 0; i < h; ++i) {
                        mask(i, j) = (dropout_rng->uniform() < keep) ? 1.0 / keep : 0.0;
                    }
                }
                out = out.cwiseProduct(mask);
            }
            if (tape) {
                auto& st = tape->layers[l][t];
                st.x = inputs[t];
                st.gates = std::move(gates);
                st.c = cs;
                st.h = hs;
                st.mask = mask;
            }
            outputs[t] = std::move(out);
        }
        top_h = hs;
        inputs = std::move(outputs);
    }
    return top_h;
}

std::vector<Eigen::MatrixXd> LstmStack::backward(const Eigen::MatrixXd& d_top,
                                                 const LstmTape& tape) {
    if (tape.layers.empty()) return {};
    const int h = hidden_dim_;
    const int steps = static_cast<int>(tape.layers.front().size());
    const int batch = static_cast<int>(d_top.cols());

    // Per-step gradients flowing into each layer's outputs.
    std::vector<Eigen::MatrixXd> d_out(steps, Eigen::MatrixXd::Zero(h, batch));
    d_out[steps - 1] = d_top;

    std::vector<Eigen::MatrixXd> d_inputs;
    for (int l = layers_ - 1; l >= 0; --l) {
        const auto& layer = tape.layers[l];
        const int in_dim = (l == 0) ? input_dim_ : h;
        d_inputs.assign(steps, Eigen::MatrixXd::Zero(in_dim, batch));

        Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(h, batch);
        Eigen::MatrixXd dc = Eigen::MatrixXd::Zero(h, batch);
        for (int t = steps - 1; t >= 0; --t) {
            const auto& st = layer[t];
            Eigen::MatrixXd d_hidden = d_out[t];
            if (st.mask.size() > 0) d_hidden = d_hidden.cwiseProduct(st.mask);
            dh += d_hidden;

            const auto gi = st.gates.topRows(h);
            const auto gf = st.gates.middleRows(h, h);
            const auto gg = st.gates.middleRows(2 * h, h);
            const auto go = st.gates.bottomRows(h);
            const Eigen::MatrixXd tc = st.c.array().tanh().matrix();
            const Eigen::MatrixXd c_prev =
                (t > 0) ? layer[t - 1].c : Eigen::MatrixXd::Zero(h, batch);
            const Eigen::MatrixXd h_prev =
                (t > 0) ? layer[t - 1].h : Eigen::MatrixXd::Zero(h, batch);

            dc += dh.cwiseProduct(go).cwiseProduct(
                (1.0 - tc.array().square()).matrix());

            Eigen::MatrixXd dz(4 * h, batch);
            // d input gate
            dz.topRows(h) = dc.cwiseProduct(gg).cwiseProduct(
                gi.cwiseProduct((1.0 - gi.array()).matrix()));
            // d forget gate
            dz.middleRows(h, h) = dc.cwiseProduct(c_prev).cwiseProduct(
                gf.cwiseProduct((1.0 - gf.array()).matrix()));
            // d candidate
            dz.middleRows(2 * h, h) =
                dc.cwiseProduct(gi).cwiseProduct((1.0 - gg.array().square()).matrix());
            // d output gate
            dz.bottomRows(h) = dh.cwiseProduct(tc).cwiseProduct(
                go.cwiseProduct((1.0 - go.array()).matrix()));

            wx_[l].grad += dz * st.x.transpose();
            wh_[l].grad += dz * h_prev.transpose();
            b_[l].grad += dz.rowwise().sum();

            d_inputs[t] = wx_[l].value.transpose() * dz;
            dh = wh_[l].value.transpose() * dz;
            dc = dc.cwiseProduct(gf);
        }
        d_out = d_inputs;  // becomes the output gradient of the layer below
    }
    return d_inputs;
}

Eigen::VectorXd lstm_forward(const LstmStack& stack, const std::vector<Eigen::VectorXd>& seq) {
    if (seq.empty()) return Eigen::VectorXd::Zero(stack.hidden_dim());
    std::vector<Eigen::MatrixXd> cols;
    cols.reserve(seq.size());
    for (const auto& v : seq) cols.push_back(v);
    return stack.forward(cols, /*training=*/false, nullptr, nullptr).col(0);
}

}  // namespace hemon::model
