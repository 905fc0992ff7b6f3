// Command-line front end: synthesize benchmarks, extract features, fit the
// three detector kinds, evaluate, cross-evaluate between attack families,
// and explain trained models.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "advfeat/attribution.hpp"
#include "advfeat/csv.hpp"
#include "advfeat/error.hpp"
#include "advfeat/image_io.hpp"
#include "advfeat/json_writer.hpp"
#include "advfeat/metrics.hpp"
#include "advfeat/model.hpp"
#include "advfeat/pipeline.hpp"
#include "advfeat/separability.hpp"
#include "advfeat/synth.hpp"
#include "advfeat/threads.hpp"

namespace fs = std::filesystem;
using namespace advfeat;

namespace {

AttackKind parse_attack(const std::string& s) {
    if (s == "sign") return AttackKind::sign;
    if (s == "iterative") return AttackKind::iterative;
    if (s == "bandpass") return AttackKind::bandpass;
    throw OutOfRange("unknown attack: " + s);
}

ModelKind parse_kind(const std::string& s) { return kind_from_name(s); }

/// Extracts the 50 structural features for every manifest row, reading images
/// relative to the manifest's directory.
Matrix extract_raw_features(const std::vector<ManifestRow>& rows, const fs::path& base,
                            std::size_t jobs) {
    Matrix raw(rows.size(), 50);
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        const GrayImage img = load_image((base / rows[i].path).string());
        const auto f = extract_raw50(img);
        std::copy(f.begin(), f.end(), raw.row(i));
    });
    return raw;
}

std::vector<char> train_flags(const std::vector<ManifestRow>& rows) {
    std::vector<char> t(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) t[i] = rows[i].split == "train" ? 1 : 0;
    return t;
}

struct MaskFile {
    std::vector<int> mask;
};

void write_mask_csv(const std::string& path, const std::vector<int>& mask) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    f << "feature,selected\n";
    for (std::size_t i = 0; i < mask.size(); ++i)
        f << feature_column_name(i) << "," << (mask[i] ? 1 : 0) << "\n";
}

std::vector<int> read_mask_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line) || split_csv_line(line) != std::vector<std::string>{"feature", "selected"})
        throw CorruptModel("unexpected mask header in " + path);
    std::vector<int> mask(kFeatureCount, 0);
    std::size_t seen = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 2) throw CorruptModel("bad mask row in " + path);
        bool matched = false;
        for (std::size_t i = 0; i < kFeatureCount; ++i)
            if (cells[0] == feature_column_name(i)) {
                mask[i] = cells[1] == "1" ? 1 : 0;
                matched = true;
                ++seen;
                break;
            }
        if (!matched) throw CorruptModel("unknown feature in mask: " + cells[0]);
    }
    if (seen != kFeatureCount) throw CorruptModel("mask file must list all features");
    return mask;
}

void require_full_features(const FeatureTable& t, const std::string& path) {
    if (!t.has_mmd)
        throw NonFiniteInput("feature file " + path +
                             " has an empty MMD column (raw extraction output); "
                             "re-run extract with --scaler/--ref");
    for (double v : t.x.data())
        if (!std::isfinite(v)) throw NonFiniteInput("non-finite feature value in " + path);
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string out;
    std::size_t n = 0;
    std::string kind = "mix";
    std::string attack = "sign";
    double eps = 8.0 / 255.0;
    std::uint64_t seed = 0;
    std::size_t jobs = std::thread::hardware_concurrency();
};

int run_synth(const SynthArgs& a) {
    BenchmarkSpec spec;
    spec.n = a.n;
    spec.kind = a.kind;
    spec.attack = parse_attack(a.attack);
    spec.epsilon = a.eps;
    spec.seed = a.seed;
    make_benchmark(spec, a.out, a.jobs);
    std::cout << "wrote " << a.n << " images + manifest to " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

struct ExtractArgs {
    std::string manifest;
    std::string out;
    std::string scaler_path;
    std::string ref_path;
    std::string from_raw;
    std::string split = "all";
    std::size_t ref_cap = kDefaultReferenceCap;
    std::uint64_t seed = 0;
    std::size_t jobs = std::thread::hardware_concurrency();
};

int run_extract(const ExtractArgs& a) {
    const auto rows = read_manifest(a.manifest);
    if (rows.empty()) throw TooFewSamples("manifest has no rows: " + a.manifest);
    const fs::path base = fs::path(a.manifest).parent_path();

    const bool eval_mode = !a.scaler_path.empty() || !a.ref_path.empty();
    auto keep_row = [&](std::size_t i) { return a.split == "all" || rows[i].split == a.split; };
    // Rows the command actually consumes: the emitted split, plus the training
    // split when the scaler and reference are refit here (training mode).
    auto need_row = [&](std::size_t i) {
        return keep_row(i) || (!eval_mode && rows[i].split == "train");
    };

    Matrix raw(rows.size(), 50);
    if (!a.from_raw.empty()) {
        const FeatureTable t = read_feature_csv(a.from_raw);
        std::map<std::string, std::size_t> by_path;
        for (std::size_t i = 0; i < t.paths.size(); ++i) by_path[t.paths[i]] = i;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!need_row(i)) continue;
            const auto it = by_path.find(rows[i].path);
            if (it == by_path.end())
                throw CorruptModel("manifest path missing from raw csv: " + rows[i].path);
            for (std::size_t j = 0; j < 50; ++j) raw(i, j) = t.x(it->second, j);
        }
    } else {
        raw = extract_raw_features(rows, base, a.jobs);
    }

    if (eval_mode) {
        if (a.scaler_path.empty() || a.ref_path.empty())
            throw OutOfRange("evaluation mode needs both --scaler and --ref");
        const ScalerState scaler = load_scaler(a.scaler_path);
        const MmdReference ref = load_reference(a.ref_path);

        std::vector<std::size_t> selected;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (keep_row(i)) selected.push_back(i);
        Matrix subset(selected.size(), 50);
        for (std::size_t k = 0; k < selected.size(); ++k)
            std::copy(raw.row(selected[k]), raw.row(selected[k]) + 50, subset.row(k));

        FeatureTable out;
        out.x = apply_pipeline(subset, scaler, ref);
        for (std::size_t k = 0; k < selected.size(); ++k) {
            out.paths.push_back(rows[selected[k]].path);
            out.labels.push_back(rows[selected[k]].label);
        }
        write_feature_csv(a.out, out, false);
        std::cout << "wrote " << selected.size() << " standardized rows to " << a.out << "\n";
        return 0;
    }

    // Training mode: fit scaler + reference on the training split, emit raw
    // features (MMD column empty) plus the two artifacts next to --out.
    std::vector<int> labels(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) labels[i] = rows[i].label;
    const DatasetFeatures ds = build_dataset(raw, labels, train_flags(rows), a.seed, a.ref_cap);

    FeatureTable out;
    std::vector<std::size_t> selected;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (keep_row(i)) selected.push_back(i);
    out.x = Matrix(selected.size(), kFeatureCount);
    for (std::size_t k = 0; k < selected.size(); ++k) {
        std::copy(raw.row(selected[k]), raw.row(selected[k]) + 50, out.x.row(k));
        out.paths.push_back(rows[selected[k]].path);
        out.labels.push_back(rows[selected[k]].label);
    }
    write_feature_csv(a.out, out, true);
    const fs::path dir = fs::path(a.out).parent_path();
    save_scaler(ds.scaler, (dir / "scaler.json").string());
    save_reference(ds.reference, (dir / "ref.json").string());
    if (!ds.scaler.constant_columns.empty()) {
        std::cerr << "warning: constant training columns (std forced to 1):";
        for (std::size_t c : ds.scaler.constant_columns) std::cerr << " " << feature_column_name(c);
        std::cerr << "\n";
    }
    if (ds.reference.degenerate)
        std::cerr << "warning: degenerate reference (all points coincide), bandwidth forced to 1\n";
    std::cout << "wrote " << selected.size() << " raw rows to " << a.out << "; scaler.json and ref.json in "
              << (dir.empty() ? fs::path(".") : dir).string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

struct FitArgs {
    std::string features;
    std::string valid;
    std::string model;
    std::string out;
    std::string mask_path;
    std::string scaler_path;
    std::string ref_path;
    std::uint64_t seed = 0;
    double svm_c = 1.0;
    double svm_gamma = 0.0;
};

int run_fit(const FitArgs& a) {
    const FeatureTable train = read_feature_csv(a.features);
    require_full_features(train, a.features);

    std::optional<FeatureTable> valid;
    if (!a.valid.empty()) {
        valid = read_feature_csv(a.valid);
        require_full_features(*valid, a.valid);
    }
    std::optional<std::vector<int>> mask;
    if (!a.mask_path.empty()) mask = read_mask_csv(a.mask_path);

    DetectorModel m = train_detector(parse_kind(a.model), train.x, train.labels,
                                     valid ? &valid->x : nullptr,
                                     valid ? &valid->labels : nullptr, a.seed, mask, a.svm_c,
                                     a.svm_gamma);
    if (!a.scaler_path.empty()) m.scaler = load_scaler(a.scaler_path);
    if (!a.ref_path.empty()) m.reference = load_reference(a.ref_path);
    save_model(m, a.out);
    std::cout << "trained " << a.model << " on " << train.x.rows() << " rows -> " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string features;
    std::string model;
    std::string report;
    std::string roc;
    double threshold = 0.5;
};

int run_eval(const EvalArgs& a) {
    const FeatureTable t = read_feature_csv(a.features);
    require_full_features(t, a.features);
    const DetectorModel m = load_model(a.model);
    const std::vector<double> scores = predict_scores(m, t.x);
    const EvalReport r = evaluate(scores, t.labels, a.threshold);

    if (!a.report.empty()) {
        JsonWriter j;
        j.begin_object();
        j.key("accuracy").value(r.accuracy);
        j.key("precision").value(r.precision);
        j.key("recall").value(r.recall);
        j.key("f1").value(r.f1);
        j.key("auc").value(r.auc);
        j.key("confusion").begin_object();
        j.key("tp").value(r.confusion.tp);
        j.key("fp").value(r.confusion.fp);
        j.key("tn").value(r.confusion.tn);
        j.key("fn").value(r.confusion.fn);
        j.end_object();
        j.key("threshold").value(a.threshold);
        j.key("n").value(t.x.rows());
        j.key("roc").begin_array();
        for (const RocPoint& p : r.roc) {
            j.begin_array();
            j.value(p.threshold);
            j.value(p.fpr);
            j.value(p.tpr);
            j.end_array();
        }
        j.end_array();
        j.end_object();
        std::ofstream f(a.report, std::ios::binary);
        if (!f) throw UnreadableFile("cannot open for writing: " + a.report);
        f << j.str() << "\n";
    }
    if (!a.roc.empty()) {
        std::ofstream f(a.roc, std::ios::binary);
        if (!f) throw UnreadableFile("cannot open for writing: " + a.roc);
        f << "threshold,fpr,tpr\n";
        for (const RocPoint& p : r.roc)
            f << format_double(p.threshold) << "," << format_double(p.fpr) << ","
              << format_double(p.tpr) << "\n";
    }
    std::printf("accuracy=%.4f precision=%.4f recall=%.4f f1=%.4f auc=%.4f\n", r.accuracy,
                r.precision, r.recall, r.f1, r.auc);
    return 0;
}

// ---------------------------------------------------------------------------
// cross-eval
// ---------------------------------------------------------------------------

struct CrossArgs {
    std::string benchmarks;  // comma separated directories with manifest.csv
    std::string model_kind = "gbt";
    std::string out;
    std::uint64_t seed = 0;
    std::size_t jobs = std::thread::hardware_concurrency();
};

int run_cross_eval(const CrossArgs& a) {
    std::vector<std::string> dirs;
    {
        std::string cur;
        for (char c : a.benchmarks) {
            if (c == ',') {
                if (!cur.empty()) dirs.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) dirs.push_back(cur);
    }
    if (dirs.size() < 2) throw OutOfRange("cross-eval needs at least 2 benchmarks");
    const ModelKind kind = parse_kind(a.model_kind);

    struct Bench {
        std::string name;
        std::vector<ManifestRow> rows;
        Matrix raw;
        ScalerState scaler;
        MmdReference ref;
        DetectorModel model;
    };
    std::vector<Bench> benches;
    for (std::size_t b = 0; b < dirs.size(); ++b) {
        Bench bench;
        fs::path dir(dirs[b]);
        bench.name = dir.filename().string().empty() ? dir.parent_path().filename().string()
                                                     : dir.filename().string();
        bench.rows = read_manifest((dir / "manifest.csv").string());
        bench.raw = extract_raw_features(bench.rows, dir, a.jobs);
        std::vector<int> labels(bench.rows.size());
        for (std::size_t i = 0; i < bench.rows.size(); ++i) labels[i] = bench.rows[i].label;
        DatasetFeatures ds =
            build_dataset(bench.raw, labels, train_flags(bench.rows), derive_seed(a.seed, 100, b));
        bench.scaler = ds.scaler;
        bench.ref = ds.reference;

        // Train on the training split with the validation split as holdout.
        std::vector<std::size_t> tr, va;
        for (std::size_t i = 0; i < bench.rows.size(); ++i) {
            if (bench.rows[i].split == "train") tr.push_back(i);
            else if (bench.rows[i].split == "valid") va.push_back(i);
        }
        Matrix xt(tr.size(), kFeatureCount), xv(va.size(), kFeatureCount);
        std::vector<int> yt(tr.size()), yv(va.size());
        for (std::size_t i = 0; i < tr.size(); ++i) {
            std::copy(ds.features.row(tr[i]), ds.features.row(tr[i]) + kFeatureCount, xt.row(i));
            yt[i] = labels[tr[i]];
        }
        for (std::size_t i = 0; i < va.size(); ++i) {
            std::copy(ds.features.row(va[i]), ds.features.row(va[i]) + kFeatureCount, xv.row(i));
            yv[i] = labels[va[i]];
        }
        bench.model = train_detector(kind, xt, yt, va.empty() ? nullptr : &xv,
                                     va.empty() ? nullptr : &yv, derive_seed(a.seed, 200, b));
        benches.push_back(std::move(bench));
    }

    const std::size_t nb = benches.size();
    Matrix acc(nb, nb, -1.0), auc(nb, nb, -1.0);
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            if (i == j) continue;
            std::vector<std::size_t> te;
            for (std::size_t r = 0; r < benches[j].rows.size(); ++r)
                if (benches[j].rows[r].split == "test") te.push_back(r);
            Matrix raw_test(te.size(), 50);
            std::vector<int> y_test(te.size());
            for (std::size_t r = 0; r < te.size(); ++r) {
                std::copy(benches[j].raw.row(te[r]), benches[j].raw.row(te[r]) + 50,
                          raw_test.row(r));
                y_test[r] = benches[j].rows[te[r]].label;
            }
            const Matrix x = apply_pipeline(raw_test, benches[i].scaler, benches[i].ref);
            const EvalReport rep = evaluate(predict_scores(benches[i].model, x), y_test);
            acc(i, j) = rep.accuracy;
            auc(i, j) = rep.auc;
        }
    }

    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + a.out);
    f << "metric,train";
    for (const Bench& b : benches) f << "," << b.name;
    f << ",mean,std\n";
    auto emit = [&](const char* metric, const Matrix& m) {
        for (std::size_t i = 0; i < nb; ++i) {
            f << metric << "," << benches[i].name;
            double sum = 0.0, sum2 = 0.0;
            std::size_t cnt = 0;
            for (std::size_t j = 0; j < nb; ++j) {
                if (i == j) {
                    f << ",excluded";
                } else {
                    f << "," << format_double(m(i, j));
                    sum += m(i, j);
                    sum2 += m(i, j) * m(i, j);
                    ++cnt;
                }
            }
            const double mean = sum / static_cast<double>(cnt);
            const double var = sum2 / static_cast<double>(cnt) - mean * mean;
            f << "," << format_double(mean) << "," << format_double(std::sqrt(std::max(0.0, var)))
              << "\n";
        }
    };
    emit("accuracy", acc);
    emit("auc", auc);

    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            if (i != j)
                std::printf("train=%s test=%s accuracy=%.4f auc=%.4f\n", benches[i].name.c_str(),
                            benches[j].name.c_str(), acc(i, j), auc(i, j));
    return 0;
}

// ---------------------------------------------------------------------------
// explain
// ---------------------------------------------------------------------------

struct ExplainArgs {
    std::string model;
    std::string features;
    std::string out;
    std::string emit_mask;
    std::size_t mask_k = 37;
    std::size_t repeats = 5;
    std::uint64_t seed = 0;
};

int run_explain(const ExplainArgs& a) {
    const DetectorModel m = load_model(a.model);
    const FeatureTable t = read_feature_csv(a.features);
    require_full_features(t, a.features);

    const std::vector<double> perm = permutation_importance(m, t.x, t.labels, a.repeats, a.seed);
    const bool is_gbt = m.kind == ModelKind::gbt;
    GbtImportance gi;
    if (is_gbt) gi = gbt_importance(m, kFeatureCount);

    std::vector<std::size_t> order(kFeatureCount);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const double ax = is_gbt ? gi.gain[x] : perm[x];
        const double ay = is_gbt ? gi.gain[y] : perm[y];
        if (ax != ay) return ax > ay;
        return x < y;
    });

    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + a.out);
    f << "feature,gain,gain_avg,cover,weight,perm_auc_drop\n";
    for (std::size_t i : order) {
        f << feature_column_name(i) << ",";
        if (is_gbt)
            f << format_double(gi.gain[i]) << "," << format_double(gi.gain_avg[i]) << ","
              << format_double(gi.cover[i]) << "," << format_double(gi.weight[i]);
        else
            f << ",,,";
        f << "," << format_double(perm[i]) << "\n";
    }

    if (!a.emit_mask.empty()) {
        const std::vector<int> mask = reduce_features(is_gbt ? gi.gain : perm, a.mask_k);
        write_mask_csv(a.emit_mask, mask);
        std::cout << "wrote top-" << a.mask_k << " mask to " << a.emit_mask << "\n";
    }
    std::cout << "wrote importances to " << a.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// separability
// ---------------------------------------------------------------------------

struct SepArgs {
    std::string features;
    std::string out;
};

int run_separability(const SepArgs& a) {
    const FeatureTable t = read_feature_csv(a.features);
    require_full_features(t, a.features);
    std::vector<std::size_t> clean, adv;
    for (std::size_t i = 0; i < t.labels.size(); ++i)
        (t.labels[i] ? adv : clean).push_back(i);
    if (clean.empty() || adv.empty()) throw SingleClass("separability needs both classes");

    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + a.out);
    f << "l2,delta1,delta2,f_clean,f_adv\n";
    const std::size_t pairs = std::min(clean.size(), adv.size());
    std::size_t skipped = 0;
    for (std::size_t p = 0; p < pairs; ++p) {
        std::vector<double> a_vec(t.x.row(clean[p]), t.x.row(clean[p]) + kFeatureCount);
        std::vector<double> b_vec(t.x.row(adv[p]), t.x.row(adv[p]) + kFeatureCount);
        const Displacement d = displacement(a_vec, b_vec);
        if (d.l2 <= 0.0) {
            ++skipped;
            continue;
        }
        const Separator s = construct_separator(a_vec, b_vec);
        f << format_double(d.l2) << "," << format_double(d.delta1) << ","
          << format_double(d.delta2) << "," << format_double(separator_decision(s, a_vec)) << ","
          << format_double(separator_decision(s, b_vec)) << "\n";
    }
    const double ratio = displacement_ratio(t.x, t.labels);
    std::printf("pairs=%zu skipped_zero_displacement=%zu inter_intra_ratio=%.4f\n",
                pairs - skipped, skipped, ratio);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interpretable image-feature pipeline for adversarial-example detection"};
    app.set_version_flag("--version", "advfeat 1.0.0 (model format 1)");
    app.require_subcommand(1);

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic benchmark");
    synth->add_option("--out", synth_args.out, "Output directory")->required();
    synth->add_option("--n", synth_args.n, "Total image count (even)")->required()
        ->check(CLI::PositiveNumber);
    synth->add_option("--kind", synth_args.kind, "Clean family: smooth|blobs|sinusoid|blurred_noise|mix");
    synth->add_option("--attack", synth_args.attack, "Perturbation: sign|iterative|bandpass");
    synth->add_option("--eps", synth_args.eps, "Perturbation budget in (0,0.5]")
        ->check(CLI::Range(1e-9, 0.5));
    synth->add_option("--seed", synth_args.seed, "Root seed");
    synth->add_option("--jobs", synth_args.jobs, "Worker threads");

    ExtractArgs extract_args;
    auto* extract = app.add_subcommand("extract", "Extract the 51 features for a manifest");
    extract->add_option("--manifest", extract_args.manifest, "Benchmark manifest CSV")->required();
    extract->add_option("--out", extract_args.out, "Output feature CSV")->required();
    extract->add_option("--scaler", extract_args.scaler_path, "Scaler JSON (evaluation mode)");
    extract->add_option("--ref", extract_args.ref_path, "Reference JSON (evaluation mode)");
    extract->add_option("--split", extract_args.split, "Row filter: train|valid|test|all")
        ->check(CLI::IsMember({"train", "valid", "test", "all"}));
    extract->add_option("--from-raw", extract_args.from_raw,
                        "Reuse raw features from a previous training-mode CSV");
    extract->add_option("--ref-size", extract_args.ref_cap, "Reference subsample cap");
    extract->add_option("--seed", extract_args.seed, "Seed for the reference subsample");
    extract->add_option("--jobs", extract_args.jobs, "Worker threads");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "Train a detector on extracted features");
    fit->add_option("--features", fit_args.features, "Training feature CSV")->required();
    fit->add_option("--valid", fit_args.valid, "Validation feature CSV");
    fit->add_option("--model", fit_args.model, "svm|mlp|gbt")->required()
        ->check(CLI::IsMember({"svm", "mlp", "gbt"}));
    fit->add_option("--out", fit_args.out, "Output model JSON")->required();
    fit->add_option("--seed", fit_args.seed, "Training seed");
    fit->add_option("--mask", fit_args.mask_path, "Feature mask CSV (from explain --emit-mask)");
    fit->add_option("--scaler", fit_args.scaler_path, "Embed this scaler in the model file");
    fit->add_option("--ref", fit_args.ref_path, "Embed this reference in the model file");
    fit->add_option("--svm-c", fit_args.svm_c, "SVM regularization C");
    fit->add_option("--svm-gamma", fit_args.svm_gamma, "SVM kernel width (default 1/d)");

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "Evaluate a model on a feature CSV");
    eval->add_option("--features", eval_args.features, "Feature CSV")->required();
    eval->add_option("--model", eval_args.model, "Model JSON")->required();
    eval->add_option("--report", eval_args.report, "Report JSON output");
    eval->add_option("--roc", eval_args.roc, "ROC CSV output");
    eval->add_option("--threshold", eval_args.threshold, "Decision threshold");

    CrossArgs cross_args;
    auto* cross = app.add_subcommand("cross-eval", "Train per benchmark, test across benchmarks");
    cross->add_option("--benchmarks", cross_args.benchmarks, "Comma-separated benchmark dirs")
        ->required();
    cross->add_option("--model-kind", cross_args.model_kind, "svm|mlp|gbt")
        ->check(CLI::IsMember({"svm", "mlp", "gbt"}));
    cross->add_option("--out", cross_args.out, "Matrix CSV output")->required();
    cross->add_option("--seed", cross_args.seed, "Root seed");
    cross->add_option("--jobs", cross_args.jobs, "Worker threads");

    ExplainArgs explain_args;
    auto* explain = app.add_subcommand("explain", "Feature importances for a trained model");
    explain->add_option("--model", explain_args.model, "Model JSON")->required();
    explain->add_option("--features", explain_args.features, "Feature CSV")->required();
    explain->add_option("--out", explain_args.out, "Importance CSV output")->required();
    explain->add_option("--repeats", explain_args.repeats, "Permutation repeats")
        ->check(CLI::PositiveNumber);
    explain->add_option("--seed", explain_args.seed, "Permutation seed");
    explain->add_option("--emit-mask", explain_args.emit_mask, "Write a top-k mask CSV here");
    explain->add_option("--mask-k", explain_args.mask_k, "Mask size for --emit-mask");

    SepArgs sep_args;
    auto* sep = app.add_subcommand("separability", "Pairwise displacement + separator diagnostic");
    sep->add_option("--features", sep_args.features, "Feature CSV")->required();
    sep->add_option("--out", sep_args.out, "Pairs CSV output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth->parsed()) return run_synth(synth_args);
        if (extract->parsed()) return run_extract(extract_args);
        if (fit->parsed()) return run_fit(fit_args);
        if (eval->parsed()) return run_eval(eval_args);
        if (cross->parsed()) return run_cross_eval(cross_args);
        if (explain->parsed()) return run_explain(explain_args);
        if (sep->parsed()) return run_separability(sep_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
