#include "ompadvisor/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "ompadvisor/checkpoint.hpp"
#include "ompadvisor/corpus.hpp"
#include "ompadvisor/dataset.hpp"
#include "ompadvisor/error.hpp"
#include "ompadvisor/eval.hpp"
#include "ompadvisor/explain.hpp"
#include "ompadvisor/lexer.hpp"
#include "ompadvisor/logistic.hpp"
#include "ompadvisor/loops.hpp"
#include "ompadvisor/parser.hpp"
#include "ompadvisor/repr.hpp"
#include "ompadvisor/synth.hpp"
#include "ompadvisor/train_config.hpp"
#include "ompadvisor/transformer.hpp"
#include "ompadvisor/vocab.hpp"

namespace ompadvisor {

namespace {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

Task parse_task(const std::string& name) {
    const auto task = task_from_name(name);
    if (!task) {
        throw FormatError("unknown task: " + name +
                          " (expected directive, private, or reduction)");
    }
    return *task;
}

ReprKind parse_repr(const std::string& name) {
    const auto kind = repr_kind_from_name(name);
    if (!kind) {
        throw FormatError("unknown representation: " + name +
                          " (expected text, r_text, ast, or r_ast)");
    }
    return *kind;
}

std::string fixed(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
    return buf;
}

std::unordered_map<std::string, const SourceRecord*> index_by_id(
    const std::vector<SourceRecord>& records) {
    std::unordered_map<std::string, const SourceRecord*> map;
    map.reserve(records.size());
    for (const SourceRecord& record : records) {
        map.emplace(record.id, &record);
    }
    return map;
}

struct SplitColumns {
    std::vector<std::vector<std::string>> tokens;
    std::vector<int> labels;
    std::vector<std::string> ids;
    std::vector<int> line_counts;
};

SplitColumns collect_columns(
    const LabeledSet& set,
    const std::unordered_map<std::string, const SourceRecord*>& by_id,
    ReprKind repr) {
    SplitColumns columns;
    columns.tokens.reserve(set.items.size());
    for (const LabeledItem& item : set.items) {
        auto it = by_id.find(item.record_id);
        if (it == by_id.end()) {
            throw FormatError("manifest names record " + item.record_id +
                              " which is not in the corpus");
        }
        columns.tokens.push_back(represent_code(it->second->code_text, repr));
        columns.labels.push_back(item.label);
        columns.ids.push_back(item.record_id);
        columns.line_counts.push_back(it->second->loop_line_count);
    }
    return columns;
}

EncodedInstance make_instance(const std::vector<std::string>& tokens,
                              int label, const Vocabulary& vocab,
                              int max_len) {
    EncodedInstance inst;
    inst.ids = encode(tokens, vocab, max_len);
    inst.true_length =
        std::min(static_cast<int>(tokens.size()) + 1, max_len);
    inst.label = label;
    return inst;
}

std::vector<EncodedInstance> encode_columns(const SplitColumns& columns,
                                            const Vocabulary& vocab,
                                            int max_len) {
    std::vector<EncodedInstance> instances;
    instances.reserve(columns.tokens.size());
    for (std::size_t i = 0; i < columns.tokens.size(); ++i) {
        instances.push_back(make_instance(columns.tokens[i],
                                          columns.labels[i], vocab, max_len));
    }
    return instances;
}

BowDataset featurize_columns(const SplitColumns& columns,
                             const Vocabulary& vocab) {
    BowDataset data;
    data.features.reserve(columns.tokens.size());
    data.labels = columns.labels;
    for (const auto& tokens : columns.tokens) {
        data.features.push_back(bow_featurize(tokens, vocab));
    }
    return data;
}

const LabeledSet& pick_split(const SplitResult& split,
                             const std::string& name) {
    if (name == "train") return split.train;
    if (name == "validation" || name == "valid") return split.validation;
    if (name == "test") return split.test;
    throw FormatError("unknown split: " + name +
                      " (expected train, validation, or test)");
}

void write_curves(const fs::path& path,
                  const std::vector<EpochStats>& curves) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw FormatError("cannot write curves file: " + path.string());
    }
    out << "epoch\ttrain_loss\tvalid_loss\tvalid_accuracy\n";
    for (const EpochStats& row : curves) {
        out << row.epoch << "\t" << fixed(row.train_loss, 6) << "\t"
            << fixed(row.valid_loss, 6) << "\t"
            << fixed(row.valid_accuracy, 6) << "\n";
    }
}

void print_curves(std::ostream& out, const std::vector<EpochStats>& curves) {
    out << "epoch  train_loss  valid_loss  valid_acc\n";
    for (const EpochStats& row : curves) {
        char line[128];
        std::snprintf(line, sizeof(line), "%5d  %10.4f  %10.4f  %9.4f\n",
                      row.epoch, row.train_loss, row.valid_loss,
                      row.valid_accuracy);
        out << line;
    }
}

// Loaded model pair: exactly one of the two is populated, per meta.kind.
struct LoadedModel {
    CheckpointMeta meta;
    Vocabulary vocab;
    int vocab_max_len = 0;
    LogisticModel logistic;
    TransformerClassifier transformer;

    double probability(const std::vector<std::string>& tokens) const {
        if (meta.kind == "logistic") {
            return logistic.positive_probability(
                bow_featurize(tokens, vocab));
        }
        const EncodedInstance inst =
            make_instance(tokens, 0, vocab, meta.config.max_len);
        return transformer_probability(transformer, inst.ids,
                                       inst.true_length);
    }
};

LoadedModel load_model(const std::string& checkpoint_path) {
    LoadedModel loaded;
    loaded.meta = peek_checkpoint(checkpoint_path);
    const fs::path vocab_path = checkpoint_path + ".vocab";
    loaded.vocab = load_vocab(vocab_path, &loaded.vocab_max_len);
    if (vocab_fingerprint(loaded.vocab) != loaded.meta.vocab_fingerprint) {
        throw FormatError("vocabulary file " + vocab_path.string() +
                          " does not match the checkpoint");
    }
    if (loaded.meta.kind == "logistic") {
        loaded.logistic =
            load_logistic_checkpoint(checkpoint_path, loaded.meta);
    } else if (loaded.meta.kind == "transformer") {
        loaded.transformer =
            load_transformer_checkpoint(checkpoint_path, loaded.meta);
    } else {
        throw FormatError("unknown checkpoint kind: " + loaded.meta.kind);
    }
    return loaded;
}

void print_corpus_stats(std::ostream& out, const CorpusStats& stats,
                        const BuildReport& report) {
    out << "records: " << stats.total_snippets << "\n";
    out << "  with directive: " << stats.with_directive << "\n";
    out << "  private clauses: " << stats.private_count
        << ", reductions: " << stats.reduction_count << "\n";
    out << "  schedule static: " << stats.schedule_static
        << ", dynamic: " << stats.schedule_dynamic << "\n";
    out << "loop length (lines): <=10: " << stats.length_histogram[0]
        << ", 11-50: " << stats.length_histogram[1]
        << ", 51-100: " << stats.length_histogram[2]
        << ", >100: " << stats.length_histogram[3] << "\n";
    out << "files scanned: " << report.files_scanned
        << ", with OpenMP: " << report.files_with_omp << "\n";
    out << "skipped: " << report.constructs_skipped << " constructs, "
        << report.loops_dropped_empty_body << " empty-body loops, "
        << report.loops_dropped_other_pragma
        << " loops with other OpenMP pragmas\n";
}

int run_build_corpus(const std::vector<std::string>& dirs,
                     const std::string& out_path, std::ostream& out,
                     std::ostream& err) {
    std::vector<fs::path> roots(dirs.begin(), dirs.end());
    BuildReport report;
    std::vector<SourceRecord> records = build_corpus(roots, report);
    for (const SkipEntry& skip : report.skipped_files) {
        err << "warning: skipped " << skip.path << ": " << skip.reason
            << "\n";
    }
    records = deduplicate(records);
    if (records.empty()) {
        err << "error: no records\n";
        return 1;
    }
    save_corpus(out_path, records, dirs);
    print_corpus_stats(out, corpus_stats(records), report);
    out << "corpus: " << out_path << "\n";
    return 0;
}

int run_split(const std::string& corpus_path, const std::string& task_name_in,
              std::uint64_t seed, std::array<double, 3> ratios,
              const std::string& out_path, std::ostream& out) {
    const Task task = parse_task(task_name_in);
    const std::vector<SourceRecord> records = load_corpus(corpus_path);
    const std::vector<LabeledItem> items =
        task == Task::Directive ? make_directive_dataset(records)
                                : make_clause_dataset(records, task);
    const SplitResult split = split_and_balance(task, items, ratios, seed);
    if (const fs::path parent = fs::path(out_path).parent_path();
        !parent.empty()) {
        fs::create_directories(parent);
    }
    save_manifest(out_path, split);

    auto count_pos = [](const LabeledSet& set) {
        long pos = 0;
        for (const LabeledItem& item : set.items) pos += item.label;
        return pos;
    };
    out << "task: " << task_name(task) << "\n";
    for (const LabeledSet* set :
         {&split.train, &split.validation, &split.test}) {
        out << "  " << set->split << ": " << set->items.size() << " ("
            << count_pos(*set) << " positive)\n";
    }
    out << "manifest: " << out_path << "\n";
    return 0;
}

int run_train(const std::string& corpus_path, const std::string& splits_path,
              const std::string& task_name_in, const std::string& model_name,
              const std::string& repr_name_in, const std::string& out_path,
              TrainConfig config, int min_freq, std::ostream& out) {
    const Task task = parse_task(task_name_in);
    const ReprKind repr = parse_repr(repr_name_in);
    if (model_name != "bow" && model_name != "transformer") {
        throw FormatError("unknown model: " + model_name +
                          " (expected bow or transformer)");
    }
    config.validate();

    const std::vector<SourceRecord> records = load_corpus(corpus_path);
    const auto by_id = index_by_id(records);
    const SplitResult split = load_manifest(splits_path, task);
    const SplitColumns train_cols = collect_columns(split.train, by_id, repr);
    const SplitColumns valid_cols =
        collect_columns(split.validation, by_id, repr);

    Vocabulary vocab = build_vocab(train_cols.tokens, min_freq);
    const OovReport oov = oov_report(vocab, valid_cols.tokens);
    out << "vocabulary: " << vocab.size() << " types (min_freq " << min_freq
        << "); validation OOV types: " << oov.oov_types
        << ", mean sequence length: " << fixed(oov.avg_length, 1) << "\n";

    if (const fs::path parent = fs::path(out_path).parent_path();
        !parent.empty()) {
        fs::create_directories(parent);
    }

    CheckpointMeta meta;
    meta.task = task;
    meta.repr = repr;
    meta.vocab_fingerprint = vocab_fingerprint(vocab);
    meta.vocab_size = vocab.size();
    meta.config = config;

    std::vector<EpochStats> curves;
    if (model_name == "bow") {
        meta.kind = "logistic";
        const LogisticTrainResult result =
            train_logistic(featurize_columns(train_cols, vocab),
                           featurize_columns(valid_cols, vocab), config);
        save_logistic_checkpoint(out_path, result.model, meta);
        curves = result.curves;
    } else {
        meta.kind = "transformer";
        const TransformerTrainResult result = train_transformer(
            encode_columns(train_cols, vocab, config.max_len),
            encode_columns(valid_cols, vocab, config.max_len), config);
        save_transformer_checkpoint(out_path, result.best_model, meta);
        if (!result.curves.empty()) {
            out << "best epoch by validation loss: " << result.best_epoch
                << "\n";
        }
        curves = result.curves;
    }

    save_vocab(out_path + ".vocab", vocab, config.max_len);
    write_curves(out_path + ".curves.tsv", curves);
    print_curves(out, curves);
    out << "checkpoint: " << out_path << "\n";
    return 0;
}

int run_evaluate(const std::string& corpus_path,
                 const std::string& splits_path,
                 const std::string& checkpoint_path,
                 const std::string& split_name,
                 const std::string& external_path,
                 const std::string& report_path, std::ostream& out,
                 std::ostream& err) {
    const LoadedModel model = load_model(checkpoint_path);
    const std::vector<SourceRecord> records = load_corpus(corpus_path);
    const auto by_id = index_by_id(records);
    const SplitResult split = load_manifest(splits_path, model.meta.task);
    const LabeledSet& chosen = pick_split(split, split_name);
    const SplitColumns columns =
        collect_columns(chosen, by_id, model.meta.repr);

    std::vector<int> predictions;
    predictions.reserve(columns.tokens.size());
    for (const auto& tokens : columns.tokens) {
        predictions.push_back(
            threshold_prediction(model.probability(tokens),
                                 model.meta.config.threshold)
                .label);
    }
    const EvalReport report = evaluate_predictions(
        predictions, columns.labels, columns.line_counts);
    const std::string title = model.meta.kind + " / " +
                              task_name(model.meta.task) + " / " +
                              repr_kind_name(model.meta.repr) + " on " +
                              chosen.split;
    out << render_eval_report(report, title);

    std::string machine = eval_report_json_line(report) + "\n";
    if (!external_path.empty()) {
        const ExternalPredictions external =
            import_external_predictions(external_path, columns.ids);
        for (const std::string& warning : external.warnings) {
            err << "warning: " << warning << "\n";
        }
        const EvalReport ext_report = evaluate_predictions(
            external.predictions, columns.labels, columns.line_counts);
        out << render_eval_report(
            ext_report, "external predictions (" +
                            std::to_string(external.missing) +
                            " missing ids scored negative)");
        machine += eval_report_json_line(ext_report) + "\n";
    }
    if (!report_path.empty()) {
        if (const fs::path parent = fs::path(report_path).parent_path();
            !parent.empty()) {
            fs::create_directories(parent);
        }
        std::ofstream report_file(report_path, std::ios::trunc);
        if (!report_file) {
            throw FormatError("cannot write report file: " + report_path);
        }
        report_file << machine;
    }
    return 0;
}

// Loops of a standalone file, paired with ready-to-score records.
std::vector<SourceRecord> file_loop_records(const std::string& path) {
    const std::string content = read_text_file(path);
    const ParseResult parsed = parse_source(content);
    std::vector<SourceRecord> records;
    for (const LoopEntry& entry :
         extract_loops(*parsed.root, parsed.attachments)) {
        records.push_back(record_from_entry(content, entry, path));
    }
    return records;
}

int run_predict(const std::string& checkpoint_path, const std::string& file,
                std::ostream& out) {
    const LoadedModel model = load_model(checkpoint_path);
    const std::vector<SourceRecord> records = file_loop_records(file);
    if (records.empty()) {
        out << "no for-loops found in " << file << "\n";
        return 0;
    }
    for (const SourceRecord& record : records) {
        const std::vector<std::string> tokens =
            represent_code(record.code_text, model.meta.repr);
        const PredictionResult prediction = threshold_prediction(
            model.probability(tokens), model.meta.config.threshold);
        out << "loop line " << record.origin_line
            << ": label=" << prediction.label
            << " p=" << fixed(prediction.probability, 6) << "\n";
    }
    return 0;
}

int run_explain(const std::string& checkpoint_path, const std::string& file,
                int samples, int top_k, int loop_index, std::uint64_t seed,
                std::ostream& out) {
    const LoadedModel model = load_model(checkpoint_path);
    const std::vector<SourceRecord> records = file_loop_records(file);
    if (loop_index < 0 ||
        static_cast<std::size_t>(loop_index) >= records.size()) {
        throw FormatError("file has " + std::to_string(records.size()) +
                          " loops; --loop " + std::to_string(loop_index) +
                          " is out of range");
    }
    const SourceRecord& record =
        records[static_cast<std::size_t>(loop_index)];
    const std::vector<std::string> tokens =
        represent_code(record.code_text, model.meta.repr);

    const Explanation explanation = explain_tokens(
        tokens,
        [&](const std::vector<std::string>& perturbed) {
            return model.probability(perturbed);
        },
        samples, seed);

    std::vector<std::pair<std::size_t, std::size_t>> spans;
    if (model.meta.repr == ReprKind::Text ||
        model.meta.repr == ReprKind::RText) {
        spans = text_token_spans(record.code_text);
    }
    out << "loop line " << record.origin_line << " ("
        << repr_kind_name(model.meta.repr) << ")\n";
    out << render_explanation(explanation, top_k, spans);
    return 0;
}

int run_represent(const std::string& file, const std::string& repr_name_in,
                  bool tree, std::ostream& out) {
    const ReprKind repr = parse_repr(repr_name_in);
    const std::string content = read_text_file(file);
    if (tree) {
        const ParseResult parsed = parse_source(content);
        const AstNode* root = parsed.root.get();
        for (const auto& child : root->children) {
            out << render_ast_tree(*child);
        }
        return 0;
    }
    out << join_tokens(represent_code(content, repr)) << "\n";
    return 0;
}

int run_gen_synth(const std::string& out_dir, const SynthOptions& options,
                  std::ostream& out) {
    const SynthSummary summary = generate_synthetic_tree(out_dir, options);
    out << "generated " << summary.files << " files / " << summary.loops
        << " loops (" << summary.positives << " positive, "
        << summary.negatives << " negative) in " << out_dir << "\n";
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"advises which C for-loops need an OpenMP parallel-for "
                 "directive"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "flat key=value config file; flags take precedence");
    int rc = 0;

    // build-corpus
    auto* build = app.add_subcommand(
        "build-corpus", "scan source trees into a labeled loop corpus");
    std::vector<std::string> build_dirs;
    std::string build_out;
    build->add_option("dirs", build_dirs, "source directories")->required();
    build->add_option("--out", build_out, "corpus output file")->required();
    build->callback(
        [&] { rc = run_build_corpus(build_dirs, build_out, out, err); });

    // split
    auto* split = app.add_subcommand(
        "split", "balance labels and write train/validation/test manifests");
    std::string split_corpus, split_task = "directive", split_out;
    std::uint64_t split_seed = 0;
    std::array<double, 3> ratios = {0.8, 0.1, 0.1};
    split->add_option("--corpus", split_corpus, "corpus file")->required();
    split->add_option("--task", split_task,
                      "directive | private | reduction");
    split->add_option("--seed", split_seed, "shuffle seed");
    split->add_option("--train-frac", ratios[0], "train fraction");
    split->add_option("--valid-frac", ratios[1], "validation fraction");
    split->add_option("--test-frac", ratios[2], "test fraction");
    split->add_option("--out", split_out, "manifest output file")->required();
    split->callback([&] {
        rc = run_split(split_corpus, split_task, split_seed, ratios,
                       split_out, out);
    });

    // train
    auto* train = app.add_subcommand("train", "train a model on one split");
    std::string train_corpus, train_splits, train_task = "directive";
    std::string train_model = "transformer", train_repr = "text", train_out;
    TrainConfig config;
    int min_freq = 1;
    train->add_option("--corpus", train_corpus, "corpus file")->required();
    train->add_option("--splits", train_splits, "split manifest")->required();
    train->add_option("--task", train_task, "directive | private | reduction");
    train->add_option("--model", train_model, "bow | transformer");
    train->add_option("--repr", train_repr, "text | r_text | ast | r_ast");
    train->add_option("--out", train_out, "checkpoint output path")
        ->required();
    train->add_option("--lr", config.learning_rate, "learning rate");
    train->add_option("--epochs", config.epochs, "training epochs");
    train->add_option("--batch-size", config.batch_size, "mini-batch size");
    train->add_option("--seed", config.seed, "training seed");
    train->add_option("--dropout", config.dropout, "dropout rate");
    train->add_option("--weight-decay", config.weight_decay, "weight decay");
    train->add_option("--dim", config.dim, "embedding width");
    train->add_option("--heads", config.heads, "attention heads");
    train->add_option("--layers", config.layers, "encoder layers");
    train->add_option("--ffn-dim", config.ffn_dim, "feed-forward width");
    train->add_option("--head-hidden", config.head_hidden,
                      "classifier hidden width");
    train->add_option("--max-len", config.max_len, "maximum sequence length");
    train->add_option("--threshold", config.threshold, "decision threshold");
    train->add_option("--min-freq", min_freq, "vocabulary frequency floor");
    train->callback([&] {
        rc = run_train(train_corpus, train_splits, train_task, train_model,
                       train_repr, train_out, config, min_freq, out);
    });

    // evaluate
    auto* evaluate = app.add_subcommand(
        "evaluate", "score a checkpoint on a split, optionally against "
                    "imported external predictions");
    std::string eval_corpus, eval_splits, eval_ckpt, eval_split = "test";
    std::string eval_external, eval_report;
    evaluate->add_option("--corpus", eval_corpus, "corpus file")->required();
    evaluate->add_option("--splits", eval_splits, "split manifest")
        ->required();
    evaluate->add_option("--checkpoint", eval_ckpt, "checkpoint path")
        ->required();
    evaluate->add_option("--split", eval_split,
                         "train | validation | test");
    evaluate->add_option("--external", eval_external,
                         "record_id,label CSV of external predictions");
    evaluate->add_option("--report", eval_report,
                         "machine-readable report output path");
    evaluate->callback([&] {
        rc = run_evaluate(eval_corpus, eval_splits, eval_ckpt, eval_split,
                          eval_external, eval_report, out, err);
    });

    // predict
    auto* predict = app.add_subcommand(
        "predict", "advise on every loop of a C file");
    std::string predict_ckpt, predict_file;
    predict->add_option("--checkpoint", predict_ckpt, "checkpoint path")
        ->required();
    predict->add_option("file", predict_file, "C source file")->required();
    predict->callback([&] { rc = run_predict(predict_ckpt, predict_file, out); });

    // explain
    auto* explain = app.add_subcommand(
        "explain", "token-level influence report for one loop");
    std::string explain_ckpt, explain_file;
    int explain_samples = 200, explain_top = 10, explain_loop = 0;
    std::uint64_t explain_seed = 0;
    explain->add_option("--checkpoint", explain_ckpt, "checkpoint path")
        ->required();
    explain->add_option("file", explain_file, "C source file")->required();
    explain->add_option("--samples", explain_samples,
                        "perturbation sample count (>= 50)");
    explain->add_option("--top", explain_top, "rows to print");
    explain->add_option("--loop", explain_loop, "loop index within the file");
    explain->add_option("--seed", explain_seed, "sampling seed");
    explain->callback([&] {
        rc = run_explain(explain_ckpt, explain_file, explain_samples,
                         explain_top, explain_loop, explain_seed, out);
    });

    // represent
    auto* represent = app.add_subcommand(
        "represent", "print a file's model-input token stream");
    std::string represent_file, represent_repr = "text";
    bool represent_tree = false;
    represent->add_option("file", represent_file, "C source file")
        ->required();
    represent->add_option("--repr", represent_repr,
                          "text | r_text | ast | r_ast");
    represent->add_flag("--tree", represent_tree,
                        "render the syntax tree instead");
    represent->callback([&] {
        rc = run_represent(represent_file, represent_repr, represent_tree,
                           out);
    });

    // gen-synth
    auto* synth = app.add_subcommand(
        "gen-synth", "write the synthetic labeled source tree");
    std::string synth_out;
    SynthOptions synth_options;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--loops", synth_options.loops, "total loop count");
    synth->add_option("--seed", synth_options.seed, "generator seed");
    synth->add_option("--loops-per-file", synth_options.loops_per_file,
                      "loops per generated file");
    synth->add_flag("--naming-signal", synth_options.naming_signal,
                    "label classes by identifier-name pools");
    synth->callback([&] { rc = run_gen_synth(synth_out, synth_options, out); });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("ompadvisor");
    for (const std::string& arg : args) {
        argv.push_back(arg.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        // CLI11 uses its own exit-code table; fold every command-line
        // problem into the documented input-error code.
        return app.exit(e, out, err) == 0 ? 0 : 1;
    } catch (const NumericError& e) {
        err << "numeric error: " << e.what() << "\n";
        return 2;
    } catch (const SourceError& e) {
        err << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const DirectiveError& e) {
        err << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

}  // namespace ompadvisor
