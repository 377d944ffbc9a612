#pragma once

#include <cstdint>
#include <string>

#include "ompadvisor/dataset.hpp"
#include "ompadvisor/logistic.hpp"
#include "ompadvisor/repr.hpp"
#include "ompadvisor/train_config.hpp"
#include "ompadvisor/transformer.hpp"

namespace ompadvisor {

// Everything needed to reuse a trained model besides the tensors themselves.
// The vocabulary fingerprint ties a checkpoint to the exact vocabulary file
// it was trained with; loading against a different vocabulary is an error.
struct CheckpointMeta {
    std::string kind;  // "logistic" or "transformer"
    Task task = Task::Directive;
    ReprKind repr = ReprKind::Text;
    std::string vocab_fingerprint;
    int vocab_size = 0;
    TrainConfig config;
};

// File layout: 8-byte magic, 8-byte little-endian header length, JSON header
// (kind, task, repr, fingerprint, config, tensor shapes), then raw row-major
// doubles for each tensor in registry order. Identical models produce
// byte-identical files.
void save_transformer_checkpoint(const std::string& path,
                                 const TransformerClassifier& model,
                                 const CheckpointMeta& meta);

TransformerClassifier load_transformer_checkpoint(const std::string& path,
                                                  CheckpointMeta& meta);

void save_logistic_checkpoint(const std::string& path,
                              const LogisticModel& model,
                              const CheckpointMeta& meta);

LogisticModel load_logistic_checkpoint(const std::string& path,
                                       CheckpointMeta& meta);

// Reads only the header; used to dispatch on `kind` before loading tensors.
CheckpointMeta peek_checkpoint(const std::string& path);

}  // namespace ompadvisor
