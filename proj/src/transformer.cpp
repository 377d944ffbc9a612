#include "ompadvisor/transformer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ompadvisor/error.hpp"
#include "ompadvisor/loss.hpp"
#include "ompadvisor/rng.hpp"

namespace ompadvisor {

namespace {

constexpr double kLnEps = 1e-5;

void fill_uniform(Eigen::MatrixXd& mat, double range, Rng& rng) {
    for (Eigen::Index r = 0; r < mat.rows(); ++r) {
        for (Eigen::Index c = 0; c < mat.cols(); ++c) {
            mat(r, c) = rng.uniform(-range, range);
        }
    }
}

// Inverted dropout: each entry is either 0 or 1/keep, so multiplying by the
// mask both drops and rescales.
Eigen::MatrixXd dropout_mask(Eigen::Index rows, Eigen::Index cols, double rate,
                             Rng& rng) {
    const double keep = 1.0 - rate;
    Eigen::MatrixXd mask(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            mask(r, c) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
        }
    }
    return mask;
}

Eigen::MatrixXd layer_norm(const Eigen::MatrixXd& x,
                           const Eigen::MatrixXd& gain,
                           const Eigen::MatrixXd& bias, Eigen::MatrixXd& xhat,
                           Eigen::VectorXd& inv_std) {
    const auto n = static_cast<double>(x.cols());
    Eigen::MatrixXd out(x.rows(), x.cols());
    xhat.resize(x.rows(), x.cols());
    inv_std.resize(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const double mu = x.row(r).mean();
        const double var = (x.row(r).array() - mu).square().sum() / n;
        const double is = 1.0 / std::sqrt(var + kLnEps);
        inv_std(r) = is;
        xhat.row(r) = (x.row(r).array() - mu) * is;
        out.row(r) = xhat.row(r).array() * gain.row(0).array().transpose() +
                     bias.row(0).array().transpose();
    }
    return out;
}

// d(loss)/d(input) of layer_norm given d(loss)/d(output); also accumulates
// the gain/bias gradients.
Eigen::MatrixXd layer_norm_backward(const Eigen::MatrixXd& dy,
                                    const Eigen::MatrixXd& xhat,
                                    const Eigen::VectorXd& inv_std,
                                    const Eigen::MatrixXd& gain,
                                    Eigen::MatrixXd& dgain,
                                    Eigen::MatrixXd& dbias) {
    const auto n = static_cast<double>(xhat.cols());
    dgain.row(0) += dy.cwiseProduct(xhat).colwise().sum();
    dbias.row(0) += dy.colwise().sum();
    Eigen::MatrixXd dx(dy.rows(), dy.cols());
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
        const Eigen::ArrayXd dxhat =
            dy.row(r).array().transpose() * gain.row(0).array().transpose();
        const Eigen::ArrayXd xh = xhat.row(r).array().transpose();
        const double mean_dxhat = dxhat.mean();
        const double mean_dxhat_xh = (dxhat * xh).sum() / n;
        dx.row(r) =
            (inv_std(r) * (dxhat - mean_dxhat - xh * mean_dxhat_xh)).matrix();
    }
    return dx;
}

void softmax_rows_in_place(Eigen::MatrixXd& s) {
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        const double m = s.row(r).maxCoeff();
        Eigen::ArrayXd e = (s.row(r).array() - m).exp().transpose();
        s.row(r) = (e / e.sum()).matrix();
    }
}

}  // namespace

struct LayerTrace {
    Eigen::MatrixXd x_in;
    Eigen::MatrixXd q, k, v;
    std::vector<Eigen::MatrixXd> attn;          // post-softmax
    std::vector<Eigen::MatrixXd> attn_dropped;  // as used against V
    std::vector<Eigen::MatrixXd> attn_mask;     // empty when not training
    Eigen::MatrixXd concat;
    Eigen::MatrixXd add1, xhat1;
    Eigen::VectorXd inv_std1;
    Eigen::MatrixXd x_mid;
    Eigen::MatrixXd z1, h1;
    Eigen::MatrixXd add2, xhat2;
    Eigen::VectorXd inv_std2;
};

struct ForwardTrace {
    std::vector<int> ids;  // ids actually embedded (sliced or full)
    int true_length = 0;
    Eigen::MatrixXd emb_mask;  // empty when not training
    Eigen::MatrixXd x0;
    std::vector<LayerTrace> layers;
    Eigen::RowVectorXd cls_in, cls_dropped;
    Eigen::RowVectorXd head_mask;  // empty when not training
    Eigen::RowVectorXd hz, hh;
};

TransformerClassifier init_transformer(int vocab_size,
                                       const TrainConfig& cfg) {
    cfg.validate();
    if (vocab_size < 3) {
        throw FormatError("vocabulary too small for a transformer");
    }
    TransformerClassifier m;
    m.vocab_size = vocab_size;
    m.max_len = cfg.max_len;
    m.dim = cfg.dim;
    m.heads = cfg.heads;
    m.ffn_dim = cfg.ffn_dim;
    m.head_hidden = cfg.head_hidden;
    m.dropout = cfg.dropout;

    Rng rng(cfg.seed);
    const double emb_range = 1.0 / std::sqrt(static_cast<double>(cfg.dim));
    m.token_embed.resize(vocab_size, cfg.dim);
    fill_uniform(m.token_embed, emb_range, rng);
    m.pos_embed.resize(cfg.max_len, cfg.dim);
    fill_uniform(m.pos_embed, emb_range, rng);

    const double d_range = emb_range;
    const double f_range = 1.0 / std::sqrt(static_cast<double>(cfg.ffn_dim));
    m.layers.resize(static_cast<std::size_t>(cfg.layers));
    for (auto& layer : m.layers) {
        layer.wq.resize(cfg.dim, cfg.dim);
        layer.wk.resize(cfg.dim, cfg.dim);
        layer.wv.resize(cfg.dim, cfg.dim);
        layer.wo.resize(cfg.dim, cfg.dim);
        fill_uniform(layer.wq, d_range, rng);
        fill_uniform(layer.wk, d_range, rng);
        fill_uniform(layer.wv, d_range, rng);
        fill_uniform(layer.wo, d_range, rng);
        layer.bq = Eigen::MatrixXd::Zero(1, cfg.dim);
        layer.bk = Eigen::MatrixXd::Zero(1, cfg.dim);
        layer.bv = Eigen::MatrixXd::Zero(1, cfg.dim);
        layer.bo = Eigen::MatrixXd::Zero(1, cfg.dim);
        layer.ln1_gain = Eigen::MatrixXd::Ones(1, cfg.dim);
        layer.ln1_bias = Eigen::MatrixXd::Zero(1, cfg.dim);
        layer.w1.resize(cfg.dim, cfg.ffn_dim);
        fill_uniform(layer.w1, d_range, rng);
        layer.b1 = Eigen::MatrixXd::Zero(1, cfg.ffn_dim);
        layer.w2.resize(cfg.ffn_dim, cfg.dim);
        fill_uniform(layer.w2, f_range, rng);
        layer.b2 = Eigen::MatrixXd::Zero(1, cfg.dim);
        layer.ln2_gain = Eigen::MatrixXd::Ones(1, cfg.dim);
        layer.ln2_bias = Eigen::MatrixXd::Zero(1, cfg.dim);
    }

    m.head_w1.resize(cfg.dim, cfg.head_hidden);
    fill_uniform(m.head_w1, d_range, rng);
    m.head_b1 = Eigen::MatrixXd::Zero(1, cfg.head_hidden);
    m.head_w2.resize(cfg.head_hidden, 2);
    fill_uniform(m.head_w2,
                 1.0 / std::sqrt(static_cast<double>(cfg.head_hidden)), rng);
    m.head_b2 = Eigen::MatrixXd::Zero(1, 2);
    return m;
}

TransformerClassifier zeros_like(const TransformerClassifier& model) {
    TransformerClassifier z = model;
    auto refs = tensor_registry(z);
    for (auto& [name, mat] : refs) {
        mat->setZero();
    }
    return z;
}

std::vector<std::pair<std::string, Eigen::MatrixXd*>> tensor_registry(
    TransformerClassifier& model) {
    std::vector<std::pair<std::string, Eigen::MatrixXd*>> refs;
    refs.emplace_back("token_embed", &model.token_embed);
    refs.emplace_back("pos_embed", &model.pos_embed);
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        EncoderLayer& layer = model.layers[l];
        const std::string p = "layer" + std::to_string(l) + ".";
        refs.emplace_back(p + "wq", &layer.wq);
        refs.emplace_back(p + "bq", &layer.bq);
        refs.emplace_back(p + "wk", &layer.wk);
        refs.emplace_back(p + "bk", &layer.bk);
        refs.emplace_back(p + "wv", &layer.wv);
        refs.emplace_back(p + "bv", &layer.bv);
        refs.emplace_back(p + "wo", &layer.wo);
        refs.emplace_back(p + "bo", &layer.bo);
        refs.emplace_back(p + "ln1_gain", &layer.ln1_gain);
        refs.emplace_back(p + "ln1_bias", &layer.ln1_bias);
        refs.emplace_back(p + "w1", &layer.w1);
        refs.emplace_back(p + "b1", &layer.b1);
        refs.emplace_back(p + "w2", &layer.w2);
        refs.emplace_back(p + "b2", &layer.b2);
        refs.emplace_back(p + "ln2_gain", &layer.ln2_gain);
        refs.emplace_back(p + "ln2_bias", &layer.ln2_bias);
    }
    refs.emplace_back("head.w1", &model.head_w1);
    refs.emplace_back("head.b1", &model.head_b1);
    refs.emplace_back("head.w2", &model.head_w2);
    refs.emplace_back("head.b2", &model.head_b2);
    return refs;
}

Eigen::Vector2d transformer_logits(const TransformerClassifier& model,
                                   const std::vector<int>& ids,
                                   int true_length, PadHandling pad,
                                   ForwardTrace* trace, Rng* dropout_rng) {
    if (true_length < 1) {
        throw FormatError("instance true_length must be at least 1");
    }
    const int available = static_cast<int>(ids.size());
    const int t_count = pad == PadHandling::SliceToLength
                            ? std::min(true_length, available)
                            : std::min(model.max_len, available);
    const int d = model.dim;
    const int n_heads = model.heads;
    const int d_head = d / n_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_head));
    const bool training = dropout_rng != nullptr && model.dropout > 0.0;

    Eigen::MatrixXd x(t_count, d);
    for (int t = 0; t < t_count; ++t) {
        const int id = ids[static_cast<std::size_t>(t)];
        if (id < 0 || id >= model.vocab_size) {
            throw FormatError("token id " + std::to_string(id) +
                              " outside the embedding table");
        }
        x.row(t) = model.token_embed.row(id) + model.pos_embed.row(t);
    }
    if (trace) {
        trace->ids.assign(ids.begin(), ids.begin() + t_count);
        trace->true_length = true_length;
    }
    if (training) {
        Eigen::MatrixXd mask =
            dropout_mask(t_count, d, model.dropout, *dropout_rng);
        x = x.cwiseProduct(mask);
        if (trace) trace->emb_mask = std::move(mask);
    }
    if (trace) trace->x0 = x;

    const double neg_inf = -std::numeric_limits<double>::infinity();
    for (const EncoderLayer& layer : model.layers) {
        LayerTrace lt;
        if (trace) lt.x_in = x;
        Eigen::MatrixXd q = x * layer.wq;
        q.rowwise() += layer.bq.row(0);
        Eigen::MatrixXd k = x * layer.wk;
        k.rowwise() += layer.bk.row(0);
        Eigen::MatrixXd v = x * layer.wv;
        v.rowwise() += layer.bv.row(0);

        Eigen::MatrixXd concat(t_count, d);
        for (int h = 0; h < n_heads; ++h) {
            const auto qh = q.middleCols(h * d_head, d_head);
            const auto kh = k.middleCols(h * d_head, d_head);
            const auto vh = v.middleCols(h * d_head, d_head);
            Eigen::MatrixXd s = qh * kh.transpose() * scale;
            if (pad == PadHandling::MaskFullLength) {
                for (int j = true_length; j < t_count; ++j) {
                    s.col(j).setConstant(neg_inf);
                }
            }
            softmax_rows_in_place(s);
            Eigen::MatrixXd used = s;
            if (training) {
                Eigen::MatrixXd mask =
                    dropout_mask(t_count, t_count, model.dropout, *dropout_rng);
                used = used.cwiseProduct(mask);
                if (trace) lt.attn_mask.push_back(std::move(mask));
            }
            concat.middleCols(h * d_head, d_head) = used * vh;
            if (trace) {
                lt.attn.push_back(std::move(s));
                lt.attn_dropped.push_back(std::move(used));
            }
        }
        Eigen::MatrixXd attn_out = concat * layer.wo;
        attn_out.rowwise() += layer.bo.row(0);

        Eigen::MatrixXd add1 = x + attn_out;
        Eigen::MatrixXd xhat1;
        Eigen::VectorXd inv_std1;
        Eigen::MatrixXd x_mid =
            layer_norm(add1, layer.ln1_gain, layer.ln1_bias, xhat1, inv_std1);

        Eigen::MatrixXd z1 = x_mid * layer.w1;
        z1.rowwise() += layer.b1.row(0);
        Eigen::MatrixXd h1 = z1.cwiseMax(0.0);
        Eigen::MatrixXd ffn_out = h1 * layer.w2;
        ffn_out.rowwise() += layer.b2.row(0);

        Eigen::MatrixXd add2 = x_mid + ffn_out;
        Eigen::MatrixXd xhat2;
        Eigen::VectorXd inv_std2;
        x = layer_norm(add2, layer.ln2_gain, layer.ln2_bias, xhat2, inv_std2);

        if (trace) {
            lt.q = std::move(q);
            lt.k = std::move(k);
            lt.v = std::move(v);
            lt.concat = std::move(concat);
            lt.add1 = std::move(add1);
            lt.xhat1 = std::move(xhat1);
            lt.inv_std1 = std::move(inv_std1);
            lt.x_mid = std::move(x_mid);
            lt.z1 = std::move(z1);
            lt.h1 = std::move(h1);
            lt.add2 = std::move(add2);
            lt.xhat2 = std::move(xhat2);
            lt.inv_std2 = std::move(inv_std2);
            trace->layers.push_back(std::move(lt));
        }
    }

    Eigen::RowVectorXd cls = x.row(0);
    Eigen::RowVectorXd cls_used = cls;
    if (training) {
        Eigen::MatrixXd mask = dropout_mask(1, d, model.dropout, *dropout_rng);
        cls_used = cls.cwiseProduct(mask.row(0));
        if (trace) trace->head_mask = mask.row(0);
    }
    Eigen::RowVectorXd hz = cls_used * model.head_w1 + model.head_b1.row(0);
    Eigen::RowVectorXd hh = hz.cwiseMax(0.0);
    Eigen::RowVectorXd out = hh * model.head_w2 + model.head_b2.row(0);

    if (trace) {
        trace->cls_in = std::move(cls);
        trace->cls_dropped = std::move(cls_used);
        trace->hz = std::move(hz);
        trace->hh = std::move(hh);
    }
    return Eigen::Vector2d(out(0), out(1));
}

double softmax_positive(const Eigen::Vector2d& logits) {
    const double m = std::max(logits(0), logits(1));
    const double e0 = std::exp(logits(0) - m);
    const double e1 = std::exp(logits(1) - m);
    return e1 / (e0 + e1);
}

double transformer_probability(const TransformerClassifier& model,
                               const std::vector<int>& ids, int true_length) {
    return softmax_positive(
        transformer_logits(model, ids, true_length));
}

Eigen::Vector2d bce_logit_gradient(const Eigen::Vector2d& logits, int label) {
    const double p = softmax_positive(logits);
    if (p != clamp_probability(p)) {
        return Eigen::Vector2d::Zero();  // flat inside the clamp region
    }
    const double g = p - static_cast<double>(label);
    return Eigen::Vector2d(-g, g);
}

void transformer_backward(const TransformerClassifier& model,
                          const ForwardTrace& trace,
                          const Eigen::Vector2d& dlogits,
                          TransformerClassifier& grads) {
    const int t_count = static_cast<int>(trace.ids.size());
    const int d = model.dim;
    const int n_heads = model.heads;
    const int d_head = d / n_heads;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d_head));
    const bool training = trace.emb_mask.size() > 0;

    // Classification head.
    const Eigen::RowVector2d dl = dlogits.transpose();
    grads.head_b2.row(0) += dl;
    grads.head_w2 += trace.hh.transpose() * dl;
    Eigen::RowVectorXd dhh = dl * model.head_w2.transpose();
    Eigen::RowVectorXd dhz =
        dhh.cwiseProduct((trace.hz.array() > 0.0).cast<double>().matrix());
    grads.head_b1.row(0) += dhz;
    grads.head_w1 += trace.cls_dropped.transpose() * dhz;
    Eigen::RowVectorXd dcls = dhz * model.head_w1.transpose();
    if (training) dcls = dcls.cwiseProduct(trace.head_mask);

    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(t_count, d);
    dx.row(0) = dcls;

    for (int l = static_cast<int>(model.layers.size()) - 1; l >= 0; --l) {
        const EncoderLayer& layer = model.layers[static_cast<std::size_t>(l)];
        EncoderLayer& glayer = grads.layers[static_cast<std::size_t>(l)];
        const LayerTrace& lt = trace.layers[static_cast<std::size_t>(l)];

        // LN after the feed-forward.
        Eigen::MatrixXd d_add2 =
            layer_norm_backward(dx, lt.xhat2, lt.inv_std2, layer.ln2_gain,
                                glayer.ln2_gain, glayer.ln2_bias);
        Eigen::MatrixXd dx_mid = d_add2;

        // Feed-forward.
        glayer.b2.row(0) += d_add2.colwise().sum();
        glayer.w2 += lt.h1.transpose() * d_add2;
        Eigen::MatrixXd dh1 = d_add2 * layer.w2.transpose();
        Eigen::MatrixXd dz1 =
            dh1.cwiseProduct((lt.z1.array() > 0.0).cast<double>().matrix());
        glayer.b1.row(0) += dz1.colwise().sum();
        glayer.w1 += lt.x_mid.transpose() * dz1;
        dx_mid += dz1 * layer.w1.transpose();

        // LN after the attention block.
        Eigen::MatrixXd d_add1 =
            layer_norm_backward(dx_mid, lt.xhat1, lt.inv_std1, layer.ln1_gain,
                                glayer.ln1_gain, glayer.ln1_bias);
        Eigen::MatrixXd dx_in = d_add1;
        const Eigen::MatrixXd& d_attn_out = d_add1;

        // Output projection.
        glayer.bo.row(0) += d_attn_out.colwise().sum();
        glayer.wo += lt.concat.transpose() * d_attn_out;
        Eigen::MatrixXd dconcat = d_attn_out * layer.wo.transpose();

        Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(t_count, d);
        Eigen::MatrixXd dk = Eigen::MatrixXd::Zero(t_count, d);
        Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(t_count, d);
        for (int h = 0; h < n_heads; ++h) {
            const auto qh = lt.q.middleCols(h * d_head, d_head);
            const auto kh = lt.k.middleCols(h * d_head, d_head);
            const auto vh = lt.v.middleCols(h * d_head, d_head);
            const Eigen::MatrixXd& attn = lt.attn[static_cast<std::size_t>(h)];
            const Eigen::MatrixXd& attn_used =
                lt.attn_dropped[static_cast<std::size_t>(h)];

            const auto doh = dconcat.middleCols(h * d_head, d_head);
            Eigen::MatrixXd da_used = doh * vh.transpose();
            dv.middleCols(h * d_head, d_head) = attn_used.transpose() * doh;
            if (training) {
                da_used = da_used.cwiseProduct(
                    lt.attn_mask[static_cast<std::size_t>(h)]);
            }
            // Softmax backward, row-wise.
            Eigen::MatrixXd ds(t_count, t_count);
            for (int r = 0; r < t_count; ++r) {
                const double dot = da_used.row(r).dot(attn.row(r));
                ds.row(r) = attn.row(r).cwiseProduct(
                    (da_used.row(r).array() - dot).matrix());
            }
            dq.middleCols(h * d_head, d_head) = scale * ds * kh;
            dk.middleCols(h * d_head, d_head) = scale * ds.transpose() * qh;
        }

        glayer.bq.row(0) += dq.colwise().sum();
        glayer.wq += lt.x_in.transpose() * dq;
        dx_in += dq * layer.wq.transpose();
        glayer.bk.row(0) += dk.colwise().sum();
        glayer.wk += lt.x_in.transpose() * dk;
        dx_in += dk * layer.wk.transpose();
        glayer.bv.row(0) += dv.colwise().sum();
        glayer.wv += lt.x_in.transpose() * dv;
        dx_in += dv * layer.wv.transpose();

        dx = std::move(dx_in);
    }

    Eigen::MatrixXd dx0 = training ? dx.cwiseProduct(trace.emb_mask) : dx;
    for (int t = 0; t < t_count; ++t) {
        grads.token_embed.row(trace.ids[static_cast<std::size_t>(t)]) +=
            dx0.row(t);
        grads.pos_embed.row(t) += dx0.row(t);
    }
}

namespace {

// Decoupled-weight-decay Adam over the registry tensors.
class AdamW {
public:
    explicit AdamW(const std::vector<std::pair<std::string, Eigen::MatrixXd*>>&
                       params) {
        for (const auto& [name, mat] : params) {
            m_.push_back(Eigen::MatrixXd::Zero(mat->rows(), mat->cols()));
            v_.push_back(Eigen::MatrixXd::Zero(mat->rows(), mat->cols()));
        }
    }

    void step(std::vector<std::pair<std::string, Eigen::MatrixXd*>>& params,
              std::vector<std::pair<std::string, Eigen::MatrixXd*>>& grads,
              const TrainConfig& cfg) {
        ++t_;
        const double bc1 = 1.0 - std::pow(cfg.beta1, t_);
        const double bc2 = 1.0 - std::pow(cfg.beta2, t_);
        for (std::size_t i = 0; i < params.size(); ++i) {
            Eigen::MatrixXd& p = *params[i].second;
            const Eigen::MatrixXd& g = *grads[i].second;
            m_[i] = cfg.beta1 * m_[i] + (1.0 - cfg.beta1) * g;
            v_[i] = cfg.beta2 * v_[i] + (1.0 - cfg.beta2) * g.cwiseProduct(g);
            const Eigen::ArrayXXd m_hat = m_[i].array() / bc1;
            const Eigen::ArrayXXd v_hat = v_[i].array() / bc2;
            p.array() -= cfg.learning_rate *
                         (m_hat / (v_hat.sqrt() + cfg.adam_eps) +
                          cfg.weight_decay * p.array());
        }
    }

private:
    std::vector<Eigen::MatrixXd> m_, v_;
    int t_ = 0;
};

void zero_tensors(TransformerClassifier& grads) {
    for (auto& [name, mat] : tensor_registry(grads)) {
        mat->setZero();
    }
}

double evaluate_split(const TransformerClassifier& model,
                      const std::vector<EncodedInstance>& data, double tau,
                      double* accuracy) {
    double loss = 0.0;
    long correct = 0;
    for (const auto& inst : data) {
        const double p =
            transformer_probability(model, inst.ids, inst.true_length);
        loss += bce_loss(p, inst.label);
        if ((p > tau ? 1 : 0) == inst.label) ++correct;
    }
    const auto n = static_cast<double>(data.size());
    if (accuracy) *accuracy = n > 0 ? static_cast<double>(correct) / n : 0.0;
    return n > 0 ? loss / n : 0.0;
}

}  // namespace

void TrainConfig::validate() const {
    if (dim <= 0 || heads <= 0 || layers <= 0 || ffn_dim <= 0 ||
        head_hidden <= 0 || max_len < 2) {
        throw FormatError("model dimensions must be positive (max_len >= 2)");
    }
    if (dim % heads != 0) {
        throw FormatError("embedding dim must be divisible by head count");
    }
    if (dropout < 0.0 || dropout >= 1.0) {
        throw FormatError("dropout must be in [0, 1)");
    }
    if (threshold <= 0.0 || threshold >= 1.0) {
        throw FormatError("decision threshold must be in (0, 1)");
    }
    if (learning_rate <= 0.0 || batch_size <= 0 || epochs < 0) {
        throw FormatError("learning rate, batch size, epochs must be positive");
    }
}

TransformerTrainResult train_transformer(
    const std::vector<EncodedInstance>& train,
    const std::vector<EncodedInstance>& valid, const TrainConfig& config) {
    config.validate();
    if (train.empty() || valid.empty()) {
        throw FormatError("transformer training requires non-empty train and "
                          "validation sets");
    }
    int max_id = 0;
    for (const auto& inst : train) {
        for (int id : inst.ids) max_id = std::max(max_id, id);
    }
    for (const auto& inst : valid) {
        for (int id : inst.ids) max_id = std::max(max_id, id);
    }

    TransformerTrainResult result;
    result.model = init_transformer(std::max(max_id + 1, 3), config);
    result.best_model = result.model;
    result.best_epoch = 0;

    TransformerClassifier grads = zeros_like(result.model);
    auto params = tensor_registry(result.model);
    auto grad_refs = tensor_registry(grads);
    AdamW optimizer(params);

    Rng rng(config.seed + 1);
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto batch_size =
        static_cast<std::size_t>(std::max(1, config.batch_size));

    double best_valid = std::numeric_limits<double>::infinity();
    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += batch_size) {
            const std::size_t stop =
                std::min(order.size(), start + batch_size);
            zero_tensors(grads);
            for (std::size_t k = start; k < stop; ++k) {
                const EncodedInstance& inst = train[order[k]];
                ForwardTrace trace;
                const Eigen::Vector2d logits = transformer_logits(
                    result.model, inst.ids, inst.true_length,
                    PadHandling::SliceToLength, &trace, &rng);
                loss_sum += bce_loss(softmax_positive(logits), inst.label);
                transformer_backward(result.model, trace,
                                     bce_logit_gradient(logits, inst.label),
                                     grads);
            }
            const double inv_n = 1.0 / static_cast<double>(stop - start);
            for (auto& [name, mat] : grad_refs) {
                *mat *= inv_n;
            }
            optimizer.step(params, grad_refs, config);
        }
        const double train_loss =
            loss_sum / static_cast<double>(train.size());
        if (!std::isfinite(train_loss)) {
            throw NumericError(
                "transformer training loss became non-finite at epoch " +
                std::to_string(epoch));
        }
        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = train_loss;
        stats.valid_loss = evaluate_split(result.model, valid,
                                          config.threshold,
                                          &stats.valid_accuracy);
        result.curves.push_back(stats);
        if (stats.valid_loss < best_valid) {
            best_valid = stats.valid_loss;
            result.best_model = result.model;
            result.best_epoch = epoch;
        }
    }
    return result;
}

GradCheckResult transformer_grad_check(const TransformerClassifier& model,
                                       const EncodedInstance& instance,
                                       int min_samples, std::uint64_t seed,
                                       double corruption) {
    TransformerClassifier probe = model;
    TransformerClassifier grads = zeros_like(probe);
    {
        ForwardTrace trace;
        const Eigen::Vector2d logits =
            transformer_logits(probe, instance.ids, instance.true_length,
                               PadHandling::SliceToLength, &trace);
        transformer_backward(probe, trace,
                             bce_logit_gradient(logits, instance.label),
                             grads);
    }

    auto params = tensor_registry(probe);
    auto grad_refs = tensor_registry(grads);

    Rng rng(seed);
    const int t_count =
        std::min<int>(instance.true_length,
                      static_cast<int>(instance.ids.size()));

    // Sampling plan: bias embedding picks toward rows this instance touches,
    // spread the rest across every tensor family round-robin.
    std::vector<std::pair<std::size_t, std::pair<Eigen::Index, Eigen::Index>>>
        picks;
    auto pick = [&](std::size_t tensor_idx, Eigen::Index r, Eigen::Index c) {
        picks.push_back({tensor_idx, {r, c}});
    };
    for (std::size_t i = 0; i < params.size(); ++i) {
        const auto& [name, mat] = params[i];
        const int quota = name == "token_embed" || name == "pos_embed" ? 12 : 4;
        for (int s = 0; s < quota; ++s) {
            Eigen::Index r;
            if (name == "token_embed") {
                r = instance.ids[static_cast<std::size_t>(
                    rng.below(static_cast<std::uint64_t>(t_count)))];
            } else if (name == "pos_embed") {
                r = static_cast<Eigen::Index>(
                    rng.below(static_cast<std::uint64_t>(t_count)));
            } else {
                r = static_cast<Eigen::Index>(
                    rng.below(static_cast<std::uint64_t>(mat->rows())));
            }
            const auto c = static_cast<Eigen::Index>(
                rng.below(static_cast<std::uint64_t>(mat->cols())));
            pick(i, r, c);
        }
    }
    for (std::size_t i = 0; picks.size() < static_cast<std::size_t>(min_samples);
         i = (i + 1) % params.size()) {
        const auto& mat = params[i].second;
        pick(i,
             static_cast<Eigen::Index>(
                 rng.below(static_cast<std::uint64_t>(mat->rows()))),
             static_cast<Eigen::Index>(
                 rng.below(static_cast<std::uint64_t>(mat->cols()))));
    }

    const double h = 1e-5;
    auto loss_now = [&]() {
        const double p = softmax_positive(
            transformer_logits(probe, instance.ids, instance.true_length));
        return bce_loss(p, instance.label);
    };

    GradCheckResult result;
    for (const auto& [tensor_idx, rc] : picks) {
        Eigen::MatrixXd& mat = *params[tensor_idx].second;
        const double saved = mat(rc.first, rc.second);
        mat(rc.first, rc.second) = saved + h;
        const double up = loss_now();
        mat(rc.first, rc.second) = saved - h;
        const double down = loss_now();
        mat(rc.first, rc.second) = saved;

        const double numeric = (up - down) / (2.0 * h);
        double analytic = (*grad_refs[tensor_idx].second)(rc.first, rc.second);
        analytic += corruption * (std::abs(analytic) + 1.0);
        const double denom =
            std::max({1e-6, std::abs(analytic), std::abs(numeric)});
        result.max_rel_error = std::max(
            result.max_rel_error, std::abs(analytic - numeric) / denom);
        ++result.parameters_checked;
    }
    return result;
}

}  // namespace ompadvisor
