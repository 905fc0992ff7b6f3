#pragma once

// Uniform wrapper for the three detector kinds plus the artifacts they carry
// (scaler, MMD reference, optional feature mask), with versioned JSON
// persistence. Serialization is canonical: saving the same model twice, or
// saving a freshly loaded model, produces identical bytes.

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "advfeat/error.hpp"
#include "advfeat/feature_vector.hpp"
#include "advfeat/gbt.hpp"
#include "advfeat/json_writer.hpp"
#include "advfeat/matrix.hpp"
#include "advfeat/mlp.hpp"
#include "advfeat/mmd.hpp"
#include "advfeat/pipeline.hpp"
#include "advfeat/svm.hpp"

namespace advfeat {

inline constexpr std::int64_t kModelFormatVersion = 1;

enum class ModelKind { svm, mlp, gbt };

inline std::string kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::svm: return "svm";
        case ModelKind::mlp: return "mlp";
        default: return "gbt";
    }
}

inline ModelKind kind_from_name(const std::string& s) {
    if (s == "svm") return ModelKind::svm;
    if (s == "mlp") return ModelKind::mlp;
    if (s == "gbt") return ModelKind::gbt;
    throw CorruptModel("unknown model kind: " + s);
}

struct DetectorModel {
    ModelKind kind = ModelKind::gbt;
    std::uint64_t seed = 0;
    std::optional<ScalerState> scaler;
    std::optional<MmdReference> reference;
    std::optional<std::vector<int>> mask;  // one 0/1 entry per full feature
    SvmModel svm;
    MlpModel mlp;
    GbtModel gbt;
};

/// Selects the columns flagged in mask.
inline Matrix apply_mask(const Matrix& x, const std::vector<int>& mask) {
    if (x.cols() != mask.size()) throw DimensionMismatch("apply_mask: column count mismatch");
    std::size_t keep = 0;
    for (int m : mask) keep += m ? 1 : 0;
    Matrix out(x.rows(), keep);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < mask.size(); ++j)
            if (mask[j]) out(i, c++) = x(i, j);
    }
    return out;
}

inline DetectorModel train_detector(ModelKind kind, const Matrix& x, const std::vector<int>& y,
                                    const Matrix* valid_x, const std::vector<int>* valid_y,
                                    std::uint64_t seed,
                                    const std::optional<std::vector<int>>& mask = std::nullopt,
                                    double svm_c = 1.0, double svm_gamma = 0.0) {
    DetectorModel m;
    m.kind = kind;
    m.seed = seed;
    m.mask = mask;
    const Matrix* train = &x;
    Matrix masked_train, masked_valid;
    const Matrix* vx = valid_x;
    if (mask) {
        masked_train = apply_mask(x, *mask);
        train = &masked_train;
        if (valid_x) {
            masked_valid = apply_mask(*valid_x, *mask);
            vx = &masked_valid;
        }
    }
    switch (kind) {
        case ModelKind::svm:
            m.svm = train_svm(*train, y, svm_c, svm_gamma, 1e-3, 200, seed);
            break;
        case ModelKind::mlp:
            m.mlp = train_mlp(*train, y, vx, valid_y, seed);
            break;
        case ModelKind::gbt:
            m.gbt = train_gbt(*train, y);
            break;
    }
    return m;
}

/// Probability-of-adversarial scores. Input must carry the model's full
/// column count; masked models select their columns internally.
inline std::vector<double> predict_scores(const DetectorModel& m, const Matrix& x) {
    const Matrix* in = &x;
    Matrix masked;
    if (m.mask) {
        masked = apply_mask(x, *m.mask);
        in = &masked;
    }
    switch (m.kind) {
        case ModelKind::svm: return svm_scores(m.svm, *in);
        case ModelKind::mlp: return mlp_scores(m.mlp, *in);
        default: return gbt_scores(m.gbt, *in);
    }
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

namespace detail {

inline void write_double_array(JsonWriter& j, const std::vector<double>& v) {
    j.begin_array();
    for (double x : v) j.value(x);
    j.end_array();
}

inline void write_matrix(JsonWriter& j, const Matrix& m) {
    j.begin_array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        j.begin_array();
        for (std::size_t c = 0; c < m.cols(); ++c) j.value(m(r, c));
        j.end_array();
    }
    j.end_array();
}

}  // namespace detail

inline std::string model_to_json(const DetectorModel& m) {
    JsonWriter j;
    j.begin_object();
    j.key("format_version").value(kModelFormatVersion);
    j.key("kind").value(kind_name(m.kind));

    j.key("hyperparams").begin_object();
    switch (m.kind) {
        case ModelKind::svm:
            j.key("c").value(m.svm.c);
            j.key("gamma").value(m.svm.gamma);
            j.key("tol").value(m.svm.tol);
            j.key("max_passes").value(m.svm.max_passes);
            break;
        case ModelKind::mlp:
            j.key("lr").value(m.mlp.lr);
            j.key("batch").value(m.mlp.batch);
            j.key("max_epochs").value(m.mlp.max_epochs);
            j.key("patience").value(m.mlp.patience);
            j.key("epochs_used").value(m.mlp.epochs_used);
            break;
        case ModelKind::gbt:
            j.key("rounds").value(m.gbt.rounds);
            j.key("max_depth").value(m.gbt.max_depth);
            j.key("learning_rate").value(m.gbt.learning_rate);
            j.key("lambda").value(m.gbt.lambda);
            j.key("min_child_hessian").value(m.gbt.min_child_hessian);
            break;
    }
    j.key("seed").value(m.seed);
    j.end_object();

    if (m.scaler) {
        j.key("scaler").begin_object();
        j.key("mean");
        detail::write_double_array(j, m.scaler->mean);
        j.key("std");
        detail::write_double_array(j, m.scaler->std);
        j.key("constant_columns").begin_array();
        for (std::size_t c : m.scaler->constant_columns) j.value(static_cast<std::uint64_t>(c));
        j.end_array();
        j.end_object();
    } else {
        j.key("scaler").null();
    }

    if (m.reference) {
        j.key("mmd_reference").begin_object();
        j.key("vectors");
        detail::write_matrix(j, m.reference->vectors);
        j.key("bandwidth").value(m.reference->bandwidth);
        j.key("self_term").value(m.reference->self_term);
        j.key("degenerate").value(m.reference->degenerate);
        j.end_object();
    } else {
        j.key("mmd_reference").null();
    }

    if (m.mask) {
        j.key("feature_mask").begin_array();
        for (int v : *m.mask) j.value(v);
        j.end_array();
    } else {
        j.key("feature_mask").null();
    }

    j.key("params").begin_object();
    switch (m.kind) {
        case ModelKind::svm:
            j.key("support_vectors");
            detail::write_matrix(j, m.svm.support_vectors);
            j.key("dual_coef");
            detail::write_double_array(j, m.svm.dual_coef);
            j.key("bias").value(m.svm.bias);
            break;
        case ModelKind::mlp:
            j.key("layers").begin_array();
            for (std::size_t l : m.mlp.layers) j.value(l);
            j.end_array();
            j.key("weights").begin_array();
            for (const Matrix& w : m.mlp.weights) detail::write_matrix(j, w);
            j.end_array();
            j.key("biases").begin_array();
            for (const auto& b : m.mlp.biases) detail::write_double_array(j, b);
            j.end_array();
            break;
        case ModelKind::gbt:
            j.key("base_score").value(m.gbt.base_score);
            j.key("trees").begin_array();
            for (const GbtTree& t : m.gbt.trees) {
                j.begin_array();
                for (const GbtNode& nd : t.nodes) {
                    j.begin_object();
                    if (nd.is_leaf) {
                        j.key("leaf").value(nd.value);
                        j.key("cover").value(nd.cover);
                    } else {
                        j.key("feature").value(nd.feature);
                        j.key("threshold").value(nd.threshold);
                        j.key("left").value(nd.left);
                        j.key("right").value(nd.right);
                        j.key("gain").value(nd.gain);
                        j.key("cover").value(nd.cover);
                    }
                    j.end_object();
                }
                j.end_array();
            }
            j.end_array();
            break;
    }
    j.end_object();

    j.end_object();
    return j.str();
}

inline void save_model(const DetectorModel& m, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    const std::string json = model_to_json(m);
    f.write(json.data(), static_cast<std::streamsize>(json.size()));
    f.put('\n');
    if (!f) throw UnreadableFile("write failed: " + path);
}

namespace detail {

inline std::vector<double> read_double_array(const nlohmann::json& a) {
    std::vector<double> out;
    out.reserve(a.size());
    for (const auto& v : a) out.push_back(v.get<double>());
    return out;
}

inline Matrix read_matrix(const nlohmann::json& a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows > 0 ? a[0].size() : 0;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (a[r].size() != cols) throw CorruptModel("ragged matrix in model file");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = a[r][c].get<double>();
    }
    return m;
}

}  // namespace detail

inline DetectorModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("model parse failure: ") + e.what());
    }
    try {
        if (!doc.contains("format_version")) throw CorruptModel("missing format_version");
        if (doc["format_version"].get<std::int64_t>() != kModelFormatVersion)
            throw VersionMismatch("unsupported model format_version " +
                                  doc["format_version"].dump());
        DetectorModel m;
        m.kind = kind_from_name(doc.at("kind").get<std::string>());
        const auto& hp = doc.at("hyperparams");
        m.seed = hp.at("seed").get<std::uint64_t>();
        const auto& params = doc.at("params");
        switch (m.kind) {
            case ModelKind::svm:
                m.svm.c = hp.at("c").get<double>();
                m.svm.gamma = hp.at("gamma").get<double>();
                m.svm.tol = hp.at("tol").get<double>();
                m.svm.max_passes = hp.at("max_passes").get<std::size_t>();
                m.svm.support_vectors = detail::read_matrix(params.at("support_vectors"));
                m.svm.dual_coef = detail::read_double_array(params.at("dual_coef"));
                m.svm.bias = params.at("bias").get<double>();
                if (m.svm.dual_coef.size() != m.svm.support_vectors.rows())
                    throw CorruptModel("dual_coef/support_vectors size mismatch");
                break;
            case ModelKind::mlp: {
                m.mlp.lr = hp.at("lr").get<double>();
                m.mlp.batch = hp.at("batch").get<std::size_t>();
                m.mlp.max_epochs = hp.at("max_epochs").get<std::size_t>();
                m.mlp.patience = hp.at("patience").get<std::size_t>();
                m.mlp.epochs_used = hp.at("epochs_used").get<std::size_t>();
                for (const auto& l : params.at("layers")) m.mlp.layers.push_back(l.get<std::size_t>());
                for (const auto& w : params.at("weights")) m.mlp.weights.push_back(detail::read_matrix(w));
                for (const auto& b : params.at("biases")) m.mlp.biases.push_back(detail::read_double_array(b));
                if (m.mlp.weights.size() + 1 != m.mlp.layers.size() ||
                    m.mlp.biases.size() != m.mlp.weights.size())
                    throw CorruptModel("inconsistent layer shapes");
                for (std::size_t l = 0; l < m.mlp.weights.size(); ++l)
                    if (m.mlp.weights[l].rows() != m.mlp.layers[l + 1] ||
                        m.mlp.weights[l].cols() != m.mlp.layers[l] ||
                        m.mlp.biases[l].size() != m.mlp.layers[l + 1])
                        throw CorruptModel("weight shape does not match layer list");
                break;
            }
            case ModelKind::gbt: {
                m.gbt.rounds = hp.at("rounds").get<std::size_t>();
                m.gbt.max_depth = hp.at("max_depth").get<std::size_t>();
                m.gbt.learning_rate = hp.at("learning_rate").get<double>();
                m.gbt.lambda = hp.at("lambda").get<double>();
                m.gbt.min_child_hessian = hp.at("min_child_hessian").get<double>();
                m.gbt.base_score = params.at("base_score").get<double>();
                for (const auto& t : params.at("trees")) {
                    GbtTree tree;
                    for (const auto& n : t) {
                        GbtNode nd;
                        if (n.contains("leaf")) {
                            nd.is_leaf = true;
                            nd.value = n.at("leaf").get<double>();
                            nd.cover = n.at("cover").get<double>();
                        } else {
                            nd.is_leaf = false;
                            nd.feature = n.at("feature").get<std::size_t>();
                            nd.threshold = n.at("threshold").get<double>();
                            nd.left = n.at("left").get<std::size_t>();
                            nd.right = n.at("right").get<std::size_t>();
                            nd.gain = n.at("gain").get<double>();
                            nd.cover = n.at("cover").get<double>();
                        }
                        tree.nodes.push_back(nd);
                    }
                    for (const GbtNode& nd : tree.nodes)
                        if (!nd.is_leaf &&
                            (nd.left >= tree.nodes.size() || nd.right >= tree.nodes.size()))
                            throw CorruptModel("tree child index out of range");
                    m.gbt.trees.push_back(std::move(tree));
                }
                break;
            }
        }
        const auto& scaler = doc.at("scaler");
        if (!scaler.is_null()) {
            ScalerState s;
            s.mean = detail::read_double_array(scaler.at("mean"));
            s.std = detail::read_double_array(scaler.at("std"));
            if (s.mean.size() != s.std.size()) throw CorruptModel("scaler mean/std size mismatch");
            for (const auto& c : scaler.at("constant_columns"))
                s.constant_columns.push_back(c.get<std::size_t>());
            m.scaler = std::move(s);
        }
        const auto& ref = doc.at("mmd_reference");
        if (!ref.is_null()) {
            MmdReference r;
            r.vectors = detail::read_matrix(ref.at("vectors"));
            r.bandwidth = ref.at("bandwidth").get<double>();
            r.self_term = ref.at("self_term").get<double>();
            r.degenerate = ref.at("degenerate").get<bool>();
            m.reference = std::move(r);
        }
        const auto& mask = doc.at("feature_mask");
        if (!mask.is_null()) {
            std::vector<int> mv;
            for (const auto& v : mask) mv.push_back(v.get<int>());
            m.mask = std::move(mv);
        }
        return m;
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("malformed model file: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Standalone artifacts: scaler.json and ref.json, produced by train-mode
// extraction so one extractor can feed many models.
// ---------------------------------------------------------------------------

inline void save_scaler(const ScalerState& s, const std::string& path) {
    JsonWriter j;
    j.begin_object();
    j.key("format_version").value(kModelFormatVersion);
    j.key("mean");
    detail::write_double_array(j, s.mean);
    j.key("std");
    detail::write_double_array(j, s.std);
    j.key("constant_columns").begin_array();
    for (std::size_t c : s.constant_columns) j.value(c);
    j.end_array();
    j.end_object();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    f << j.str() << "\n";
    if (!f) throw UnreadableFile("write failed: " + path);
}

inline ScalerState load_scaler(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    try {
        const nlohmann::json doc = nlohmann::json::parse(f);
        if (doc.at("format_version").get<std::int64_t>() != kModelFormatVersion)
            throw VersionMismatch("unsupported scaler format_version");
        ScalerState s;
        s.mean = detail::read_double_array(doc.at("mean"));
        s.std = detail::read_double_array(doc.at("std"));
        for (const auto& c : doc.at("constant_columns"))
            s.constant_columns.push_back(c.get<std::size_t>());
        if (s.mean.size() != s.std.size()) throw CorruptModel("scaler mean/std size mismatch");
        return s;
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("malformed scaler file: ") + e.what());
    }
}

inline void save_reference(const MmdReference& r, const std::string& path) {
    JsonWriter j;
    j.begin_object();
    j.key("format_version").value(kModelFormatVersion);
    j.key("vectors");
    detail::write_matrix(j, r.vectors);
    j.key("bandwidth").value(r.bandwidth);
    j.key("self_term").value(r.self_term);
    j.key("degenerate").value(r.degenerate);
    j.end_object();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open for writing: " + path);
    f << j.str() << "\n";
    if (!f) throw UnreadableFile("write failed: " + path);
}

inline MmdReference load_reference(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw UnreadableFile("cannot open: " + path);
    try {
        const nlohmann::json doc = nlohmann::json::parse(f);
        if (doc.at("format_version").get<std::int64_t>() != kModelFormatVersion)
            throw VersionMismatch("unsupported reference format_version");
        MmdReference r;
        r.vectors = detail::read_matrix(doc.at("vectors"));
        r.bandwidth = doc.at("bandwidth").get<double>();
        r.self_term = doc.at("self_term").get<double>();
        r.degenerate = doc.at("degenerate").get<bool>();
        if (r.vectors.rows() < 2) throw CorruptModel("reference needs at least 2 vectors");
        return r;
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptModel(std::string("malformed reference file: ") + e.what());
    }
}

}  // namespace advfeat
