// End-to-end checks of the command-line binary: every subcommand, the
// documented exit codes, and cross-command reproducibility.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "advfeat/csv.hpp"
#include "test_helpers.hpp"

#ifndef ADVFEAT_CLI_PATH
#error "ADVFEAT_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;

namespace {

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

int run(const std::string& args) {
    const std::string cmd =
        std::string(ADVFEAT_CLI_PATH) + " " + args + " >/dev/null 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

// One shared workspace for the whole file: benchmark synthesis and feature
// extraction are the slow parts, so later sections reuse the artifacts.
struct CliWorkspace {
    fs::path dir = testutil::scratch_dir("cli");
    fs::path bench = dir / "bench";
    fs::path raw = dir / "raw.csv";
    fs::path train = dir / "train.csv";
    fs::path test = dir / "test.csv";
    fs::path model = dir / "model.json";

    CliWorkspace() {
        REQUIRE(run("synth --out " + q(bench) + " --n 24 --attack sign --seed 3") == 0);
        REQUIRE(run("extract --manifest " + q(bench / "manifest.csv") + " --out " + q(raw) +
                    " --seed 5") == 0);
        REQUIRE(run("extract --manifest " + q(bench / "manifest.csv") + " --out " + q(train) +
                    " --scaler " + q(dir / "scaler.json") + " --ref " + q(dir / "ref.json") +
                    " --split train --from-raw " + q(raw)) == 0);
        REQUIRE(run("extract --manifest " + q(bench / "manifest.csv") + " --out " + q(test) +
                    " --scaler " + q(dir / "scaler.json") + " --ref " + q(dir / "ref.json") +
                    " --split test --from-raw " + q(raw)) == 0);
        REQUIRE(run("fit --features " + q(train) + " --model gbt --out " + q(model) +
                    " --seed 1") == 0);
    }
    ~CliWorkspace() { fs::remove_all(dir); }
};

}  // namespace

TEST_CASE("cli pipeline runs end to end") {
    CliWorkspace ws;

    SECTION("synth wrote a complete benchmark") {
        REQUIRE(fs::exists(ws.bench / "manifest.csv"));
        REQUIRE(fs::exists(ws.bench / "meta.json"));
        const auto rows = advfeat::read_manifest((ws.bench / "manifest.csv").string());
        REQUIRE(rows.size() == 24);
    }

    SECTION("train-mode extraction leaves the mmd column empty") {
        std::ifstream f(ws.raw);
        std::string header, first;
        REQUIRE(std::getline(f, header));
        REQUIRE(header == advfeat::feature_csv_header());
        REQUIRE(std::getline(f, first));
        REQUIRE(first.back() == ',');  // 51st feature intentionally blank
        REQUIRE(fs::exists(ws.dir / "scaler.json"));
        REQUIRE(fs::exists(ws.dir / "ref.json"));
    }

    SECTION("eval-mode extraction emits full standardized rows") {
        const advfeat::FeatureTable t = advfeat::read_feature_csv(ws.test.string());
        REQUIRE(t.has_mmd);
        REQUIRE(t.x.cols() == 51);
        REQUIRE(t.x.rows() == 6);  // 3 test images per class
        std::size_t clean = 0;
        for (int l : t.labels) clean += l == 0 ? 1 : 0;
        REQUIRE(clean == 3);
    }

    SECTION("from-raw extraction matches direct extraction byte for byte") {
        const fs::path again = ws.dir / "test_again.csv";
        REQUIRE(run("extract --manifest " + q(ws.bench / "manifest.csv") + " --out " + q(again) +
                    " --scaler " + q(ws.dir / "scaler.json") + " --ref " + q(ws.dir / "ref.json") +
                    " --split test") == 0);
        REQUIRE(testutil::slurp(again) == testutil::slurp(ws.test));
    }

    SECTION("eval writes a report and a roc curve") {
        const fs::path report = ws.dir / "report.json";
        const fs::path roc = ws.dir / "roc.csv";
        REQUIRE(run("eval --features " + q(ws.test) + " --model " + q(ws.model) + " --report " +
                    q(report) + " --roc " + q(roc)) == 0);
        const std::string rep = testutil::slurp(report);
        REQUIRE(rep.find("\"accuracy\":") != std::string::npos);
        REQUIRE(rep.find("\"auc\":") != std::string::npos);
        REQUIRE(rep.find("\"confusion\":") != std::string::npos);
        REQUIRE(rep.find("\"roc\":") != std::string::npos);
        std::ifstream f(roc);
        std::string header;
        REQUIRE(std::getline(f, header));
        REQUIRE(header == "threshold,fpr,tpr");
    }

    SECTION("explain ranks features and emits a mask that fit accepts") {
        const fs::path imp = ws.dir / "importance.csv";
        const fs::path mask = ws.dir / "mask.csv";
        REQUIRE(run("explain --model " + q(ws.model) + " --features " + q(ws.test) + " --out " +
                    q(imp) + " --repeats 2 --seed 9 --emit-mask " + q(mask) + " --mask-k 37") == 0);
        std::ifstream f(imp);
        std::string header;
        REQUIRE(std::getline(f, header));
        REQUIRE(header == "feature,gain,gain_avg,cover,weight,perm_auc_drop");
        std::size_t rows = 0;
        std::string line;
        while (std::getline(f, line))
            if (!line.empty()) ++rows;
        REQUIRE(rows == 51);

        std::ifstream mf(mask);
        REQUIRE(std::getline(mf, header));
        REQUIRE(header == "feature,selected");
        std::size_t selected = 0;
        while (std::getline(mf, line))
            if (line.size() > 2 && line.back() == '1') ++selected;
        REQUIRE(selected == 37);

        const fs::path masked_model = ws.dir / "masked.json";
        REQUIRE(run("fit --features " + q(ws.train) + " --model gbt --out " + q(masked_model) +
                    " --seed 1 --mask " + q(mask)) == 0);
        REQUIRE(run("eval --features " + q(ws.test) + " --model " + q(masked_model)) == 0);
    }

    SECTION("separability emits one row per pair") {
        const fs::path pairs = ws.dir / "pairs.csv";
        REQUIRE(run("separability --features " + q(ws.test) + " --out " + q(pairs)) == 0);
        std::ifstream f(pairs);
        std::string header;
        REQUIRE(std::getline(f, header));
        REQUIRE(header == "l2,delta1,delta2,f_clean,f_adv");
        std::size_t rows = 0;
        std::string line;
        while (std::getline(f, line))
            if (!line.empty()) ++rows;
        REQUIRE(rows == 3);  // min(3 clean, 3 adv) test rows
    }

    SECTION("fit embeds pipeline artifacts when asked") {
        const fs::path with_artifacts = ws.dir / "bundled.json";
        REQUIRE(run("fit --features " + q(ws.train) + " --model svm --out " + q(with_artifacts) +
                    " --seed 2 --scaler " + q(ws.dir / "scaler.json") + " --ref " +
                    q(ws.dir / "ref.json")) == 0);
        const std::string text = testutil::slurp(with_artifacts);
        REQUIRE(text.find("\"scaler\":{") != std::string::npos);
        REQUIRE(text.find("\"mmd_reference\":{") != std::string::npos);
    }

    SECTION("all three model kinds train through the cli") {
        for (const char* kind : {"svm", "mlp", "gbt"}) {
            const fs::path out = ws.dir / (std::string(kind) + "_model.json");
            REQUIRE(run(std::string("fit --features ") + q(ws.train) + " --model " + kind +
                        " --out " + q(out) + " --seed 4") == 0);
            REQUIRE(run("eval --features " + q(ws.test) + " --model " + q(out)) == 0);
        }
    }
}

TEST_CASE("cli reproducibility across invocations") {
    CliWorkspace ws;
    const fs::path bench2 = ws.dir / "bench2";
    REQUIRE(run("synth --out " + q(bench2) + " --n 24 --attack sign --seed 3") == 0);
    REQUIRE(testutil::slurp(bench2 / "manifest.csv") == testutil::slurp(ws.bench / "manifest.csv"));
    REQUIRE(testutil::slurp(bench2 / "clean_00000.flgray") ==
            testutil::slurp(ws.bench / "clean_00000.flgray"));

    const fs::path raw2 = ws.dir / "raw2.csv";
    REQUIRE(run("extract --manifest " + q(bench2 / "manifest.csv") + " --out " + q(raw2) +
                " --seed 5") == 0);
    REQUIRE(testutil::slurp(raw2) == testutil::slurp(ws.raw));

    const fs::path model2 = ws.dir / "model2.json";
    REQUIRE(run("fit --features " + q(ws.train) + " --model gbt --out " + q(model2) +
                " --seed 1") == 0);
    REQUIRE(testutil::slurp(model2) == testutil::slurp(ws.model));
}

TEST_CASE("cli exit codes follow the contract") {
    const auto dir = testutil::scratch_dir("cli_codes");
    REQUIRE(run("--version") == 0);
    REQUIRE(run("--help") == 0);
    REQUIRE(run("") == 2);                       // missing subcommand
    REQUIRE(run("synth") == 2);                  // missing required options
    REQUIRE(run("frobnicate --x 1") == 2);       // unknown subcommand
    REQUIRE(run("synth --out " + q(dir / "b") + " --n 10 --attack unknown --seed 1") == 1);
    REQUIRE(run("eval --features " + q(dir / "nope.csv") + " --model " + q(dir / "no.json")) == 1);
    REQUIRE(run("extract --manifest " + q(dir / "missing.csv") + " --out " + q(dir / "o.csv")) ==
            1);
    fs::remove_all(dir);
}

TEST_CASE("cross-eval produces the transfer matrix") {
    const auto dir = testutil::scratch_dir("cli_cross");
    const fs::path a = dir / "alpha";
    const fs::path b = dir / "beta";
    REQUIRE(run("synth --out " + q(a) + " --n 20 --attack sign --seed 11") == 0);
    REQUIRE(run("synth --out " + q(b) + " --n 20 --attack bandpass --eps 0.1254901960784314 --seed 12") == 0);
    const fs::path matrix = dir / "matrix.csv";
    REQUIRE(run("cross-eval --benchmarks " + a.string() + "," + b.string() +
                " --model-kind gbt --out " + q(matrix) + " --seed 7") == 0);
    std::ifstream f(matrix);
    std::string header;
    REQUIRE(std::getline(f, header));
    REQUIRE(header == "metric,train,alpha,beta,mean,std");
    std::size_t rows = 0;
    std::string line;
    std::size_t excluded = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        ++rows;
        const auto cells = advfeat::split_csv_line(line);
        REQUIRE(cells.size() == 6);
        for (const auto& c : cells) excluded += c == "excluded" ? 1 : 0;
    }
    REQUIRE(rows == 4);      // accuracy x2 trains, auc x2 trains
    REQUIRE(excluded == 4);  // one diagonal cell per row
    fs::remove_all(dir);
}
