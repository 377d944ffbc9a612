#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ompadvisor/cli.hpp"

using namespace ompadvisor;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ompadvisor_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int counter;
};
int TempDir::counter = 0;

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

// Small end-to-end tree: generate, build, split.
struct Pipeline {
    TempDir dir;
    fs::path tree, corpus, splits;

    Pipeline() {
        tree = dir.path / "tree";
        corpus = dir.path / "corpus.jsonl";
        splits = dir.path / "splits.tsv";
        REQUIRE(run({"gen-synth", "--out", tree.string(), "--loops", "64",
                     "--seed", "5"})
                    .code == 0);
        REQUIRE(run({"build-corpus", tree.string(), "--out", corpus.string()})
                    .code == 0);
        REQUIRE(run({"split", "--corpus", corpus.string(), "--task",
                     "directive", "--seed", "17", "--out", splits.string()})
                    .code == 0);
    }

    fs::path train_bow(const std::string& name) const {
        const fs::path ckpt = dir.path / name;
        REQUIRE(run({"train", "--corpus", corpus.string(), "--splits",
                     splits.string(), "--model", "bow", "--repr", "text",
                     "--epochs", "6", "--lr", "0.1", "--seed", "3", "--out",
                     ckpt.string()})
                    .code == 0);
        return ckpt;
    }
};

}  // namespace

TEST_CASE("missing subcommand and unknown flags are input errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"represent", "--bogus"}).code == 1);
    CHECK(run({"train", "--corpus", "x"}).code == 1);  // missing required
}

TEST_CASE("help exits cleanly") {
    CliResult r = run({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("build-corpus") != std::string::npos);
    CHECK(r.out.find("gen-synth") != std::string::npos);
}

TEST_CASE("represent prints the requested encoding") {
    TempDir dir;
    const fs::path src = dir.path / "loop.c";
    std::ofstream(src) << "for (i = 0; i < len; i++)  a[i] = i;\n";

    CliResult text = run({"represent", src.string(), "--repr", "text"});
    CHECK(text.code == 0);
    CHECK(text.out == "for ( i = 0 ; i < len ; i ++ ) a [ i ] = i ;\n");

    CliResult rtext = run({"represent", src.string(), "--repr", "r_text"});
    CHECK(rtext.code == 0);
    CHECK(rtext.out ==
          "for ( var0 = 0 ; var0 < var1 ; var0 ++ ) arr0 [ var0 ] = var0 ;\n");

    CliResult ast = run({"represent", src.string(), "--repr", "ast"});
    CHECK(ast.code == 0);
    CHECK(ast.out ==
          "For: Assignment: = ID: i Constant: int, 0 BinaryOp: < ID: i ID: "
          "len UnaryOp: p++ ID: i Assignment: = ArrayRef: ID: a ID: i ID: i\n");

    CliResult tree = run({"represent", src.string(), "--tree"});
    CHECK(tree.code == 0);
    CHECK(tree.out.rfind("For:\n", 0) == 0);
    CHECK(tree.out.find("  BinaryOp: <\n") != std::string::npos);
    CHECK(tree.out.find("    ArrayRef:\n") != std::string::npos);
}

TEST_CASE("represent rejects unknown representations and bad files") {
    TempDir dir;
    const fs::path src = dir.path / "loop.c";
    std::ofstream(src) << "for (;;) ;\n";
    CHECK(run({"represent", src.string(), "--repr", "bogus"}).code == 1);
    CHECK(run({"represent", (dir.path / "missing.c").string(), "--repr",
               "text"})
              .code == 1);

    const fs::path broken = dir.path / "broken.c";
    std::ofstream(broken) << "char c = '\n";
    CHECK(run({"represent", broken.string(), "--repr", "text"}).code == 3);
}

TEST_CASE("full pipeline: corpus, split, train, evaluate, predict, explain") {
    Pipeline p;
    CHECK(fs::exists(p.corpus));
    CHECK(fs::exists(p.splits));

    const fs::path bow = p.train_bow("bow.ckpt");
    CHECK(fs::exists(bow));
    CHECK(fs::exists(bow.string() + ".vocab"));
    CHECK(fs::exists(bow.string() + ".curves.tsv"));

    CliResult eval_bow =
        run({"evaluate", "--corpus", p.corpus.string(), "--splits",
             p.splits.string(), "--checkpoint", bow.string(), "--split",
             "test"});
    CHECK(eval_bow.code == 0);
    CHECK(eval_bow.out.find("logistic / directive / text on test") !=
          std::string::npos);
    CHECK(eval_bow.out.find("accuracy") != std::string::npos);

    // A small transformer on the same splits.
    const fs::path tf = p.dir.path / "tf.ckpt";
    CliResult train_tf =
        run({"train", "--corpus", p.corpus.string(), "--splits",
             p.splits.string(), "--model", "transformer", "--repr", "text",
             "--dim", "16", "--heads", "2", "--layers", "1", "--ffn-dim",
             "24", "--head-hidden", "12", "--epochs", "2", "--max-len", "48",
             "--seed", "3", "--out", tf.string()});
    CHECK(train_tf.code == 0);
    CHECK(train_tf.out.find("epoch") != std::string::npos);
    CHECK(train_tf.out.find("best epoch by validation loss:") !=
          std::string::npos);

    CliResult eval_tf =
        run({"evaluate", "--corpus", p.corpus.string(), "--splits",
             p.splits.string(), "--checkpoint", tf.string(), "--split",
             "validation"});
    CHECK(eval_tf.code == 0);
    CHECK(eval_tf.out.find("transformer / directive / text on validation") !=
          std::string::npos);

    // Machine-readable report file.
    const fs::path report = p.dir.path / "report.jsonl";
    CHECK(run({"evaluate", "--corpus", p.corpus.string(), "--splits",
               p.splits.string(), "--checkpoint", bow.string(), "--split",
               "test", "--report", report.string()})
              .code == 0);
    const std::string report_text = read_bytes(report);
    CHECK(report_text.find("\"accuracy\":") != std::string::npos);
    CHECK(report_text.find("\"f1_defined\":") != std::string::npos);

    // Predict reports every loop of a fresh file.
    const fs::path snippet = p.dir.path / "snippet.c";
    std::ofstream(snippet) << "void f(int n, int *v) {\n"
                           << "  int i;\n"
                           << "  for (i = 0; i < n; i++) v[i] = i;\n"
                           << "  for (i = 0; i < n; i++) printf(\"%d\", i);\n"
                           << "}\n";
    CliResult pred =
        run({"predict", "--checkpoint", bow.string(), snippet.string()});
    CHECK(pred.code == 0);
    CHECK(pred.out.find("loop line 3: label=") != std::string::npos);
    CHECK(pred.out.find("loop line 4: label=") != std::string::npos);
    CHECK(pred.out.find(" p=0.") != std::string::npos);

    // Explain the first loop of the snippet.
    CliResult expl = run({"explain", "--checkpoint", bow.string(),
                          snippet.string(), "--loop", "0", "--samples", "80",
                          "--seed", "4", "--top", "5"});
    CHECK(expl.code == 0);
    CHECK(expl.out.find("loop line 3 (text)") != std::string::npos);

    // Out-of-range loop index.
    CHECK(run({"explain", "--checkpoint", bow.string(), snippet.string(),
               "--loop", "7", "--samples", "80"})
              .code == 1);

    // Source that fails to lex is a parse failure even with a good model.
    const fs::path broken = p.dir.path / "broken.c";
    std::ofstream(broken) << "int x = \"unterminated;\n";
    CHECK(run({"predict", "--checkpoint", bow.string(), broken.string()})
              .code == 3);

    // A file without loops is not an error.
    const fs::path flat = p.dir.path / "flat.c";
    std::ofstream(flat) << "int add(int a, int b) { return a + b; }\n";
    CliResult none =
        run({"predict", "--checkpoint", bow.string(), flat.string()});
    CHECK(none.code == 0);
    CHECK(none.out.find("no for-loops found") != std::string::npos);
}

TEST_CASE("pipeline artifacts are byte-identical across reruns") {
    // The corpus records where each snippet came from, so a faithful rerun
    // repeats the exact same commands and overwrites the same paths.
    TempDir dir;
    const fs::path tree = dir.path / "tree";
    const fs::path corpus = dir.path / "corpus.jsonl";
    const fs::path splits = dir.path / "splits.tsv";
    const fs::path ckpt = dir.path / "bow.ckpt";
    auto stage = [&]() {
        REQUIRE(run({"gen-synth", "--out", tree.string(), "--loops", "32",
                     "--seed", "11"})
                    .code == 0);
        REQUIRE(run({"build-corpus", tree.string(), "--out", corpus.string()})
                    .code == 0);
        REQUIRE(run({"split", "--corpus", corpus.string(), "--task",
                     "directive", "--seed", "17", "--out", splits.string()})
                    .code == 0);
        REQUIRE(run({"train", "--corpus", corpus.string(), "--splits",
                     splits.string(), "--model", "bow", "--repr", "text",
                     "--lr", "0.1", "--epochs", "4", "--seed", "9", "--out",
                     ckpt.string()})
                    .code == 0);
        return read_bytes(corpus) + "\x1e" + read_bytes(splits) + "\x1e" +
               read_bytes(ckpt) + "\x1e" +
               read_bytes(ckpt.string() + ".curves.tsv");
    };
    const std::string first = stage();
    CHECK(first == stage());
}

TEST_CASE("evaluate merges external predictions with the fallback rule") {
    Pipeline p;
    const fs::path bow = p.train_bow("bow.ckpt");

    // Collect the test-split ids from the manifest (id \t label \t split).
    std::vector<std::string> test_ids;
    {
        std::ifstream in(p.splits);
        std::string line;
        while (std::getline(in, line)) {
            const auto t1 = line.find('\t');
            const auto t2 = line.rfind('\t');
            REQUIRE(t1 != std::string::npos);
            if (line.substr(t2 + 1) == "test") {
                test_ids.push_back(line.substr(0, t1));
            }
        }
    }
    REQUIRE(test_ids.size() >= 4);

    const fs::path csv = p.dir.path / "external.csv";
    {
        std::ofstream out(csv);
        out << "record_id,label\n";
        // Cover all but the last two ids.
        for (std::size_t i = 0; i + 2 < test_ids.size(); ++i) {
            out << test_ids[i] << "," << (i % 2) << "\n";
        }
    }
    CliResult ext = run({"evaluate", "--corpus", p.corpus.string(),
                         "--splits", p.splits.string(), "--checkpoint",
                         bow.string(), "--split", "test", "--external",
                         csv.string()});
    CHECK(ext.code == 0);
    CHECK(ext.out.find("external predictions") != std::string::npos);
    CHECK(ext.out.find("2 missing ids scored negative") != std::string::npos);
}

TEST_CASE("exit code 1 for config and lookup problems") {
    Pipeline p;
    CHECK(run({"split", "--corpus", p.corpus.string(), "--task", "bogus",
               "--seed", "1", "--out", (p.dir.path / "x.tsv").string()})
              .code == 1);
    CHECK(run({"split", "--corpus", (p.dir.path / "none.jsonl").string(),
               "--task", "directive", "--seed", "1", "--out",
               (p.dir.path / "y.tsv").string()})
              .code == 1);
    CHECK(run({"evaluate", "--corpus", p.corpus.string(), "--splits",
               p.splits.string(), "--checkpoint",
               (p.dir.path / "none.ckpt").string(), "--split", "test"})
              .code == 1);
    CHECK(run({"train", "--corpus", p.corpus.string(), "--splits",
               p.splits.string(), "--model", "transformer", "--dim", "15",
               "--heads", "4", "--out", (p.dir.path / "z.ckpt").string()})
              .code == 1);
}

TEST_CASE("exit code 2 for numeric failures") {
    Pipeline p;
    // Decoupled weight decay with an absurd learning rate multiplies every
    // parameter by (1 - lr) per step, which overflows within one epoch.
    CliResult r = run({"train", "--corpus", p.corpus.string(), "--splits",
                       p.splits.string(), "--model", "transformer", "--dim",
                       "16", "--heads", "2", "--layers", "1", "--ffn-dim",
                       "24", "--head-hidden", "12", "--max-len", "48",
                       "--batch-size", "4", "--epochs", "3", "--lr", "1e150",
                       "--weight-decay", "1.0", "--out",
                       (p.dir.path / "boom.ckpt").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("non-finite") != std::string::npos);
}

TEST_CASE("config file fills defaults and flags take precedence") {
    TempDir dir;
    const fs::path src = dir.path / "loop.c";
    std::ofstream(src) << "for (i = 0; i < len; i++)  a[i] = i;\n";
    const fs::path cfg = dir.path / "cli.toml";
    std::ofstream(cfg) << "[represent]\nrepr=\"r_text\"\n";

    CliResult from_config =
        run({"--config", cfg.string(), "represent", src.string()});
    CHECK(from_config.code == 0);
    CHECK(from_config.out.find("var0") != std::string::npos);

    CliResult overridden = run({"--config", cfg.string(), "represent",
                                src.string(), "--repr", "text"});
    CHECK(overridden.code == 0);
    CHECK(overridden.out.find("var0") == std::string::npos);
    CHECK(overridden.out.find("for ( i = 0") == 0);
}
