#include "ompadvisor/checkpoint.hpp"

#include <algorithm>
#include <fstream>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ompadvisor/error.hpp"

namespace ompadvisor {

namespace {

constexpr char kMagic[8] = {'O', 'M', 'P', 'A', 'C', 'K', 'P', 'T'};
constexpr int kFormatVersion = 1;

using json = nlohmann::json;
using TensorRefs = std::vector<std::pair<std::string, Eigen::MatrixXd*>>;

json config_to_json(const TrainConfig& c) {
    json j;
    j["learning_rate"] = c.learning_rate;
    j["epochs"] = c.epochs;
    j["batch_size"] = c.batch_size;
    j["seed"] = c.seed;
    j["dropout"] = c.dropout;
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
    j["adam_eps"] = c.adam_eps;
    j["weight_decay"] = c.weight_decay;
    j["dim"] = c.dim;
    j["heads"] = c.heads;
    j["layers"] = c.layers;
    j["ffn_dim"] = c.ffn_dim;
    j["head_hidden"] = c.head_hidden;
    j["max_len"] = c.max_len;
    j["threshold"] = c.threshold;
    return j;
}

TrainConfig config_from_json(const json& j) {
    TrainConfig c;
    c.learning_rate = j.at("learning_rate").get<double>();
    c.epochs = j.at("epochs").get<int>();
    c.batch_size = j.at("batch_size").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.dropout = j.at("dropout").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.adam_eps = j.at("adam_eps").get<double>();
    c.weight_decay = j.at("weight_decay").get<double>();
    c.dim = j.at("dim").get<int>();
    c.heads = j.at("heads").get<int>();
    c.layers = j.at("layers").get<int>();
    c.ffn_dim = j.at("ffn_dim").get<int>();
    c.head_hidden = j.at("head_hidden").get<int>();
    c.max_len = j.at("max_len").get<int>();
    c.threshold = j.at("threshold").get<double>();
    return c;
}

void write_file(const std::string& path, const CheckpointMeta& meta,
                const TensorRefs& tensors) {
    json header;
    header["format_version"] = kFormatVersion;
    header["kind"] = meta.kind;
    header["task"] = task_name(meta.task);
    header["repr"] = repr_kind_name(meta.repr);
    header["vocab_fingerprint"] = meta.vocab_fingerprint;
    header["vocab_size"] = meta.vocab_size;
    header["config"] = config_to_json(meta.config);
    json shapes = json::array();
    for (const auto& [name, mat] : tensors) {
        shapes.push_back({{"name", name},
                          {"rows", mat->rows()},
                          {"cols", mat->cols()}});
    }
    header["tensors"] = shapes;
    const std::string head = header.dump();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw FormatError("cannot write checkpoint file: " + path);
    }
    out.write(kMagic, sizeof(kMagic));
    const auto head_len = static_cast<std::uint64_t>(head.size());
    char len_bytes[8];
    for (int i = 0; i < 8; ++i) {
        len_bytes[i] = static_cast<char>((head_len >> (8 * i)) & 0xff);
    }
    out.write(len_bytes, 8);
    out.write(head.data(), static_cast<std::streamsize>(head.size()));

    std::vector<double> buffer;
    for (const auto& [name, mat] : tensors) {
        buffer.clear();
        buffer.reserve(static_cast<std::size_t>(mat->size()));
        for (Eigen::Index r = 0; r < mat->rows(); ++r) {
            for (Eigen::Index c = 0; c < mat->cols(); ++c) {
                buffer.push_back((*mat)(r, c));
            }
        }
        out.write(reinterpret_cast<const char*>(buffer.data()),
                  static_cast<std::streamsize>(buffer.size() * sizeof(double)));
    }
    if (!out) {
        throw FormatError("failed while writing checkpoint: " + path);
    }
}

json read_header(std::ifstream& in, const std::string& path) {
    char magic[8];
    in.read(magic, 8);
    if (!in || !std::equal(magic, magic + 8, kMagic)) {
        throw FormatError("not a checkpoint file: " + path);
    }
    char len_bytes[8];
    in.read(len_bytes, 8);
    if (!in) {
        throw FormatError("truncated checkpoint header: " + path);
    }
    std::uint64_t head_len = 0;
    for (int i = 0; i < 8; ++i) {
        head_len |= static_cast<std::uint64_t>(
                        static_cast<unsigned char>(len_bytes[i]))
                    << (8 * i);
    }
    if (head_len > (1u << 20)) {
        throw FormatError("implausible checkpoint header size in " + path);
    }
    std::string head(head_len, '\0');
    in.read(head.data(), static_cast<std::streamsize>(head_len));
    if (!in) {
        throw FormatError("truncated checkpoint header: " + path);
    }
    json parsed = json::parse(head, nullptr, false);
    if (parsed.is_discarded()) {
        throw FormatError("corrupt checkpoint header in " + path);
    }
    if (parsed.value("format_version", -1) != kFormatVersion) {
        throw FormatError("unsupported checkpoint version in " + path);
    }
    return parsed;
}

CheckpointMeta meta_from_header(const json& header) {
    CheckpointMeta meta;
    meta.kind = header.at("kind").get<std::string>();
    const auto task = task_from_name(header.at("task").get<std::string>());
    const auto repr =
        repr_kind_from_name(header.at("repr").get<std::string>());
    if (!task || !repr) {
        throw FormatError("checkpoint names an unknown task or representation");
    }
    meta.task = *task;
    meta.repr = *repr;
    meta.vocab_fingerprint =
        header.at("vocab_fingerprint").get<std::string>();
    meta.vocab_size = header.at("vocab_size").get<int>();
    meta.config = config_from_json(header.at("config"));
    return meta;
}

void read_tensors(std::ifstream& in, const json& header,
                  const TensorRefs& tensors, const std::string& path) {
    const json& shapes = header.at("tensors");
    if (shapes.size() != tensors.size()) {
        throw FormatError("checkpoint tensor count mismatch in " + path);
    }
    std::vector<double> buffer;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        const auto& [name, mat] = tensors[i];
        const json& shape = shapes[i];
        if (shape.at("name").get<std::string>() != name ||
            shape.at("rows").get<Eigen::Index>() != mat->rows() ||
            shape.at("cols").get<Eigen::Index>() != mat->cols()) {
            throw FormatError("checkpoint tensor '" + name +
                              "' does not match the expected shape in " + path);
        }
        buffer.resize(static_cast<std::size_t>(mat->size()));
        in.read(reinterpret_cast<char*>(buffer.data()),
                static_cast<std::streamsize>(buffer.size() * sizeof(double)));
        if (!in) {
            throw FormatError("truncated checkpoint tensors in " + path);
        }
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < mat->rows(); ++r) {
            for (Eigen::Index c = 0; c < mat->cols(); ++c) {
                (*mat)(r, c) = buffer[k++];
            }
        }
    }
}

TensorRefs logistic_registry(const LogisticModel& model,
                             Eigen::MatrixXd& weights, Eigen::MatrixXd& bias) {
    weights = model.weights;
    bias.resize(1, 1);
    bias(0, 0) = model.bias;
    return {{"weights", &weights}, {"bias", &bias}};
}

}  // namespace

void save_transformer_checkpoint(const std::string& path,
                                 const TransformerClassifier& model,
                                 const CheckpointMeta& meta) {
    auto& mutable_model = const_cast<TransformerClassifier&>(model);
    write_file(path, meta, tensor_registry(mutable_model));
}

TransformerClassifier load_transformer_checkpoint(const std::string& path,
                                                  CheckpointMeta& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open checkpoint file: " + path);
    }
    const json header = read_header(in, path);
    meta = meta_from_header(header);
    if (meta.kind != "transformer") {
        throw FormatError("checkpoint " + path + " holds a '" + meta.kind +
                          "' model, not a transformer");
    }
    TransformerClassifier model =
        init_transformer(meta.vocab_size, meta.config);
    read_tensors(in, header, tensor_registry(model), path);
    return model;
}

void save_logistic_checkpoint(const std::string& path,
                              const LogisticModel& model,
                              const CheckpointMeta& meta) {
    Eigen::MatrixXd weights, bias;
    write_file(path, meta, logistic_registry(model, weights, bias));
}

LogisticModel load_logistic_checkpoint(const std::string& path,
                                       CheckpointMeta& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open checkpoint file: " + path);
    }
    const json header = read_header(in, path);
    meta = meta_from_header(header);
    if (meta.kind != "logistic") {
        throw FormatError("checkpoint " + path + " holds a '" + meta.kind +
                          "' model, not a logistic model");
    }
    LogisticModel model;
    model.weights = Eigen::VectorXd::Zero(meta.vocab_size);
    Eigen::MatrixXd weights(meta.vocab_size, 1);
    Eigen::MatrixXd bias(1, 1);
    TensorRefs refs = {{"weights", &weights}, {"bias", &bias}};
    read_tensors(in, header, refs, path);
    model.weights = weights.col(0);
    model.bias = bias(0, 0);
    return model;
}

CheckpointMeta peek_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open checkpoint file: " + path);
    }
    return meta_from_header(read_header(in, path));
}

}  // namespace ompadvisor
