#include "hemon/model/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace hemon::model {

using graph::NodeId;

// ---------------------------------------------------------------------------
// Model base helpers
// ---------------------------------------------------------------------------

void Model::zero_grads() {
    for (Param* p : params()) p->zero_grad();
}

std::vector<Eigen::MatrixXd> Model::snapshot_values() {
    std::vector<Eigen::MatrixXd> out;
    for (Param* p : params()) out.push_back(p->value);
    return out;
}

void Model::restore_values(const std::vector<Eigen::MatrixXd>& values) {
    auto ps = params();
    if (values.size() != ps.size()) throw DataError("parameter snapshot size mismatch");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (values[i].rows() != ps[i]->value.rows() || values[i].cols() != ps[i]->value.cols()) {
            throw DataError("parameter snapshot shape mismatch for " + ps[i]->name);
        }
        ps[i]->value = values[i];
    }
}

// ---------------------------------------------------------------------------
// HemonModel
// ---------------------------------------------------------------------------

HemonModel::HemonModel(ModelConfig cfg, TrunkSequences sequences)
    : cfg_(cfg),
      sequences_(std::move(sequences)),
      w_in_("embed.W", cfg.embed_dim, cfg.input_dim),
      b_in_("embed.b", cfg.embed_dim, 1) {
    cfg_.validate();
    if (sequences_.empty()) throw DataError("model needs at least one level of sequences");

    NodeId max_id = -1;
    for (const auto& level : sequences_) {
        if (level.empty()) throw DataError("a level has no trunk sequences");
        for (const auto& seq : level) {
            if (seq.empty()) throw DataError("empty trunk sequence");
            for (NodeId v : seq) {
                if (v < 0) throw DataError("negative node id in trunk sequence");
                max_id = std::max(max_id, v);
            }
        }
    }
    node_count_ = max_id + 1;

    const int stack_count = cfg_.share_level_stacks ? 1 : level_count();
    for (int s = 0; s < stack_count; ++s) {
        const std::string prefix =
            cfg_.share_level_stacks ? std::string("shared") : "level" + std::to_string(s + 1);
        stacks_.emplace_back(prefix, cfg_.embed_dim, cfg_.hidden_dim, cfg_.lstm_layers,
                             cfg_.dropout);
    }
    for (int l = 0; l < level_count(); ++l) {
        w_comb_.emplace_back("comb.W" + std::to_string(l + 1), cfg_.categories,
                             cfg_.hidden_dim);
    }

    Rng rng = Rng::substream(cfg_.seed, "init");
    w_in_.value = xavier_init(cfg_.embed_dim, cfg_.input_dim, rng);
    b_in_.value.setZero();
    for (auto& stack : stacks_) stack.init_params(rng);
    for (auto& w : w_comb_) {
        w.value = xavier_init(cfg_.categories, cfg_.hidden_dim, rng);
    }
}

HemonModel HemonModel::from_hierarchy(ModelConfig cfg, const trunks::TrunkHierarchy& h) {
    TrunkSequences seqs;
    seqs.reserve(h.level_count());
    for (int level = 1; level <= h.level_count(); ++level) {
        std::vector<std::vector<NodeId>> level_seqs;
        for (const auto& trunk : h.trunks_at(level)) {
            level_seqs.push_back(trunk.path.vertices);
        }
        seqs.push_back(std::move(level_seqs));
    }
    HemonModel m(cfg, std::move(seqs));
    // Every node is covered by some level, so the ids span 0..N-1.
    if (m.feature_node_count() != h.node_count()) {
        throw DataError("hierarchy node ids do not span its node count");
    }
    return m;
}

LstmStack& HemonModel::stack_for_level(int level_index) {
    return cfg_.share_level_stacks ? stacks_[0] : stacks_[level_index];
}

Eigen::MatrixXd HemonModel::forward(const std::vector<const Sample*>& batch, bool training,
                                    Rng* dropout_rng) {
    const int b = static_cast<int>(batch.size());
    if (b == 0) throw DataError("empty batch");
    for (const Sample* s : batch) {
        if (s->features.rows() != node_count_ || s->features.cols() != cfg_.input_dim) {
            throw DataError("sample features must be " + std::to_string(node_count_) + " x " +
                            std::to_string(cfg_.input_dim) + ", got " +
                            std::to_string(s->features.rows()) + " x " +
                            std::to_string(s->features.cols()));
        }
    }
    if (training && cfg_.dropout > 0.0 && dropout_rng == nullptr) {
        throw DataError("training forward needs a dropout RNG");
    }

    tape_ = Tape{};
    tape_.batch = b;
    tape_.trunks.resize(level_count());
    tape_.level_repr.resize(level_count());

    Eigen::MatrixXd logits = Eigen::MatrixXd::Zero(cfg_.categories, b);
    for (int l = 0; l < level_count(); ++l) {
        Eigen::MatrixXd repr = Eigen::MatrixXd::Zero(cfg_.hidden_dim, b);
        tape_.trunks[l].resize(sequences_[l].size());
        for (std::size_t ti = 0; ti < sequences_[l].size(); ++ti) {
            const auto& seq = sequences_[l][ti];
            TrunkTape& tt = tape_.trunks[l][ti];
            tt.raw.reserve(seq.size());
            std::vector<Eigen::MatrixXd> embedded;
            embedded.reserve(seq.size());
            for (NodeId v : seq) {
                Eigen::MatrixXd x(cfg_.input_dim, b);
                for (int col = 0; col < b; ++col) {
                    x.col(col) = batch[col]->features.row(v).transpose();
                }
                Eigen::MatrixXd e = w_in_.value * x;
                e.colwise() += Eigen::VectorXd(b_in_.value.col(0));
                tt.raw.push_back(std::move(x));
                embedded.push_back(std::move(e));
            }
            repr += stack_for_level(l).forward(embedded, training, dropout_rng, &tt.lstm);
        }
        logits += w_comb_[l].value * repr;
        tape_.level_repr[l] = std::move(repr);
    }
    return logits;
}

void HemonModel::backward(const Eigen::MatrixXd& d_logits) {
    if (tape_.batch == 0) throw DataError("backward without a recorded forward");
    if (d_logits.rows() != cfg_.categories || d_logits.cols() != tape_.batch) {
        throw DataError("logit gradient shape mismatch");
    }
    for (int l = 0; l < level_count(); ++l) {
        w_comb_[l].grad += d_logits * tape_.level_repr[l].transpose();
        const Eigen::MatrixXd d_repr = w_comb_[l].value.transpose() * d_logits;
        for (auto& tt : tape_.trunks[l]) {
            const auto d_embedded = stack_for_level(l).backward(d_repr, tt.lstm);
            for (std::size_t t = 0; t < d_embedded.size(); ++t) {
                w_in_.grad += d_embedded[t] * tt.raw[t].transpose();
                b_in_.grad += d_embedded[t].rowwise().sum();
            }
        }
    }
}

std::vector<Param*> HemonModel::params() {
    std::vector<Param*> out{&w_in_, &b_in_};
    for (auto& stack : stacks_) {
        for (Param* p : stack.params()) out.push_back(p);
    }
    for (auto& w : w_comb_) out.push_back(&w);
    return out;
}

Eigen::VectorXd HemonModel::level_representation(const Sample& sample, int level) {
    if (level < 1 || level > level_count()) {
        throw DataError("level " + std::to_string(level) + " out of range");
    }
    forward({&sample}, /*training=*/false, nullptr);
    return tape_.level_repr[level - 1].col(0);
}

Eigen::VectorXd HemonModel::combine_levels(const std::vector<Eigen::VectorXd>& reprs) const {
    if (static_cast<int>(reprs.size()) != level_count()) {
        throw DataError("combine_levels expects one representation per level");
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(cfg_.categories);
    for (int l = 0; l < level_count(); ++l) {
        if (reprs[l].size() != cfg_.hidden_dim) {
            throw DataError("level representation size mismatch");
        }
        out += w_comb_[l].value * reprs[l];
    }
    return out;
}

// ---------------------------------------------------------------------------
// FnnModel
// ---------------------------------------------------------------------------

FnnModel::FnnModel(ModelConfig cfg, int node_count)
    : cfg_(cfg),
      node_count_(node_count),
      w1_("fnn.W1", cfg.hidden_dim, node_count * cfg.input_dim),
      b1_("fnn.b1", cfg.hidden_dim, 1),
      w2_("fnn.W2", cfg.categories, cfg.hidden_dim),
      b2_("fnn.b2", cfg.categories, 1) {
    cfg_.validate();
    if (node_count < 1) throw DataError("baseline needs a positive node count");
    Rng rng = Rng::substream(cfg_.seed, "init");
    w1_.value = xavier_init(static_cast<int>(w1_.value.rows()),
                            static_cast<int>(w1_.value.cols()), rng);
    w2_.value = xavier_init(static_cast<int>(w2_.value.rows()),
                            static_cast<int>(w2_.value.cols()), rng);
}

Eigen::MatrixXd FnnModel::forward(const std::vector<const Sample*>& batch, bool training,
                                  Rng* dropout_rng) {
    const int b = static_cast<int>(batch.size());
    if (b == 0) throw DataError("empty batch");
    const int flat = node_count_ * cfg_.input_dim;

    tape_ = Tape{};
    tape_.x.resize(flat, b);
    for (int col = 0; col < b; ++col) {
        const Sample* s = batch[col];
        if (s->features.rows() != node_count_ || s->features.cols() != cfg_.input_dim) {
            throw DataError("sample features shape mismatch in baseline");
        }
        tape_.x.col(col) =
            Eigen::Map<const Eigen::VectorXd>(s->features.data(), flat);
    }

    Eigen::MatrixXd z1 = w1_.value * tape_.x;
    z1.colwise() += Eigen::VectorXd(b1_.value.col(0));
    tape_.hidden = z1.array().tanh().matrix();

    Eigen::MatrixXd dropped = tape_.hidden;
    if (training && cfg_.dropout > 0.0) {
        if (dropout_rng == nullptr) throw DataError("training forward needs a dropout RNG");
        const double keep = 1.0 - cfg_.dropout;
        tape_.mask.resize(tape_.hidden.rows(), b);
        for (int j = 0; j < b; ++j) {
            for (int i = 0; i < tape_.hidden.rows(); ++i) {
                tape_.mask(i, j) = (dropout_rng->uniform() < keep) ? 1.0 / keep : 0.0;
            }
        }
        dropped = dropped.cwiseProduct(tape_.mask);
    }
    tape_.dropped = dropped;

    Eigen::MatrixXd logits = w2_.value * dropped;
    logits.colwise() += Eigen::VectorXd(b2_.value.col(0));
    return logits;
}

void FnnModel::backward(const Eigen::MatrixXd& d_logits) {
    if (tape_.x.size() == 0) throw DataError("backward without a recorded forward");
    w2_.grad += d_logits * tape_.dropped.transpose();
    b2_.grad += d_logits.rowwise().sum();

    Eigen::MatrixXd d_hidden = w2_.value.transpose() * d_logits;
    if (tape_.mask.size() > 0) d_hidden = d_hidden.cwiseProduct(tape_.mask);
    Eigen::MatrixXd dz1 =
        d_hidden.cwiseProduct((1.0 - tape_.hidden.array().square()).matrix());

    w1_.grad += dz1 * tape_.x.transpose();
    b1_.grad += dz1.rowwise().sum();
}

std::vector<Param*> FnnModel::params() { return {&w1_, &b1_, &w2_, &b2_}; }

// ---------------------------------------------------------------------------
// Variants
// ---------------------------------------------------------------------------

HemonModel build_ea1_variant(HemonModel& full) {
    TrunkSequences level1{full.sequences().front()};
    HemonModel variant(full.config(), std::move(level1));

    // Carry over the parameters the variant shares with the source model:
    // the embedding, the level-1 stack and the first combination map.
    std::vector<Param*> src_params = full.params();
    for (Param* dst : variant.params()) {
        for (Param* sp : src_params) {
            if (sp->name == dst->name) {
                dst->value = sp->value;
                break;
            }
        }
    }
    return variant;
}

std::vector<NodeId> dft_sequence(const graph::Tree& t) {
    std::vector<NodeId> order;
    order.reserve(t.node_count());
    std::vector<bool> seen(t.node_count(), false);
    std::vector<NodeId> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        order.push_back(v);
        const auto& nbrs = t.neighbors(v);  // ascending
        for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
            if (!seen[*it]) {
                seen[*it] = true;
                stack.push_back(*it);
            }
        }
    }
    return order;
}

HemonModel build_dft_variant(ModelConfig cfg, const graph::Tree& t) {
    TrunkSequences seqs{{dft_sequence(t)}};
    return HemonModel(cfg, std::move(seqs));
}

// ---------------------------------------------------------------------------
// Heads
// ---------------------------------------------------------------------------

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& z) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Eigen::MatrixXd softmax_columns(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd out(z.rows(), z.cols());
    for (int j = 0; j < z.cols(); ++j) {
        const Eigen::VectorXd shifted = z.col(j).array() - z.col(j).maxCoeff();
        const Eigen::VectorXd e = shifted.array().exp();
        out.col(j) = e / e.sum();
    }
    return out;
}

Eigen::VectorXd predict_ratings(Model& m, const Sample& sample) {
    if (m.config().head != HeadKind::kRegression) {
        throw DataError("predict_ratings requires the regression head");
    }
    const Eigen::MatrixXd logits = m.forward({&sample}, /*training=*/false, nullptr);
    return m.config().max_rating * sigmoid(logits).col(0);
}

ClassPrediction predict_class(Model& m, const Sample& sample) {
    if (m.config().head != HeadKind::kClassification) {
        throw DataError("predict_class requires the classification head");
    }
    const Eigen::MatrixXd logits = m.forward({&sample}, /*training=*/false, nullptr);
    ClassPrediction out;
    out.probabilities = softmax_columns(logits).col(0);
    out.index = 0;
    for (int i = 1; i < out.probabilities.size(); ++i) {
        if (out.probabilities(i) > out.probabilities(out.index)) out.index = i;
    }
    return out;
}

Eigen::MatrixXd predict_ratings_matrix(Model& m, const std::vector<Sample>& samples) {
    if (m.config().head != HeadKind::kRegression) {
        throw DataError("rating predictions require the regression head");
    }
    const int n = static_cast<int>(samples.size());
    Eigen::MatrixXd out(n, m.config().categories);
    const int chunk = std::max(1, m.config().batch_size);
    for (int start = 0; start < n; start += chunk) {
        const int stop = std::min(n, start + chunk);
        std::vector<const Sample*> batch;
        batch.reserve(stop - start);
        for (int i = start; i < stop; ++i) batch.push_back(&samples[i]);
        const Eigen::MatrixXd logits = m.forward(batch, /*training=*/false, nullptr);
        const Eigen::MatrixXd preds = m.config().max_rating * sigmoid(logits);
        for (int i = start; i < stop; ++i) out.row(i) = preds.col(i - start).transpose();
    }
    return out;
}

}  // namespace hemon::model
