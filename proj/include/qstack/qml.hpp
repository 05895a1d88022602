// Copyright 2026 The qstack Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * One-hidden-layer classifier whose two matrix-vector products can run
 * through the overlap-estimation matmul.
 *
 *   hidden = sigmoid(W1 x),  logits = W2 hidden,  loss = softmax cross-entropy
 *
 * No biases. Gradients are computed classically from whatever activations
 * the forward pass produced, noisy or not.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qstack/error.hpp"
#include "qstack/matmul.hpp"
#include "qstack/matrix_io.hpp"
#include "qstack/rng.hpp"
#include "qstack/vectorspace.hpp"

namespace qstack::qml {

struct NetworkShape {
    std::size_t input = 4;
    std::size_t hidden = 4;
    std::size_t output = 3;

    bool operator==(const NetworkShape &) const = default;
};

enum class ForwardMode : std::uint8_t { Classical, Quantum };

constexpr std::string_view to_string(ForwardMode m) noexcept {
    return m == ForwardMode::Quantum ? "quantum" : "classical";
}

struct TrainConfig {
    NetworkShape shape;
    std::size_t batch_size = 10;
    double learning_rate = 0.01;
    std::size_t epochs = 250;
    std::int64_t shots = 16384;
    std::uint64_t seed = 0;
    ForwardMode mode = ForwardMode::Classical;
    bool exact = false; ///< quantum mode with analytic overlaps
    StackingPattern pattern = StackingPattern::Batch;
    std::size_t threads = 1;
};

inline void validate(const TrainConfig &cfg) {
    const auto &s = cfg.shape;
    if (s.input < 1 || s.hidden < 1 || s.output < 1) {
        throw Error(ErrorKind::InvalidArgument, "layer widths must be >= 1");
    }
    if (cfg.batch_size < 1 || !(cfg.learning_rate > 0.0) || cfg.epochs < 1 || cfg.shots < 1) {
        throw Error(ErrorKind::InvalidArgument,
                    "need batch >= 1, learning rate > 0, epochs >= 1, shots >= 1");
    }
}

struct Dataset {
    RealMatrix features; ///< samples x dims
    std::vector<std::size_t> labels;
    std::size_t classes = 0;
    std::vector<std::string> class_names;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t split_seed = 0;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
    [[nodiscard]] std::span<const double> sample(std::size_t i) const { return features.row(i); }
};

struct Model {
    RealMatrix w1; ///< hidden x input
    RealMatrix w2; ///< output x hidden

    [[nodiscard]] NetworkShape shape() const { return {w1.cols(), w1.rows(), w2.rows()}; }
};

/// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
inline Model init_model(const NetworkShape &s, std::uint64_t seed) {
    CounterRng rng(seed);
    Model m{RealMatrix(s.hidden, s.input), RealMatrix(s.output, s.hidden)};
    const double a1 = 1.0 / std::sqrt(static_cast<double>(s.input));
    const double a2 = 1.0 / std::sqrt(static_cast<double>(s.hidden));
    for (double &w : m.w1.values()) {
        w = a1 * (2.0 * rng.uniform() - 1.0);
    }
    for (double &w : m.w2.values()) {
        w = a2 * (2.0 * rng.uniform() - 1.0);
    }
    return m;
}

inline double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

struct ForwardOptions {
    ForwardMode mode = ForwardMode::Classical;
    std::int64_t shots = 16384;
    std::uint64_t seed = 0;
    bool exact = false;
    StackingPattern pattern = StackingPattern::Batch;
    std::size_t threads = 1;
};

struct ForwardResult {
    std::vector<double> pre_hidden;
    std::vector<double> hidden;
    std::vector<double> logits;
    std::size_t jobs = 0;
};

namespace detail {

inline std::vector<double> classical_matvec(const RealMatrix &w, std::span<const double> x) {
    std::vector<double> out(w.rows(), 0.0);
    for (std::size_t r = 0; r < w.rows(); ++r) {
        double acc = 0.0;
        const auto row = w.row(r);
        for (std::size_t c = 0; c < x.size(); ++c) {
            acc += row[c] * x[c];
        }
        out[r] = acc;
    }
    return out;
}

inline std::vector<double> layer_product(const RealMatrix &w, std::span<const double> x,
                                         const ForwardOptions &opt, std::uint64_t layer,
                                         std::size_t &jobs) {
    if (opt.mode == ForwardMode::Classical) {
        return classical_matvec(w, x);
    }
    MatMulConfig cfg;
    cfg.shots = opt.shots;
    cfg.seed = derive_seed(opt.seed, {layer});
    cfg.exact = opt.exact;
    cfg.pattern = opt.pattern;
    cfg.threads = opt.threads;
    const RealMatrix column(x.size(), 1, std::vector<double>(x.begin(), x.end()));
    const auto r = matmul(w, column, cfg);
    jobs += r.job_count;
    return {r.c.values().begin(), r.c.values().end()};
}

} // namespace detail

inline ForwardResult forward(const Model &m, std::span<const double> x, const ForwardOptions &opt) {
    if (m.w1.cols() != x.size() || m.w2.cols() != m.w1.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "forward: layer shapes do not chain");
    }
    ForwardResult f;
    f.pre_hidden = detail::layer_product(m.w1, x, opt, 0, f.jobs);
    f.hidden.resize(f.pre_hidden.size());
    for (std::size_t i = 0; i < f.hidden.size(); ++i) {
        f.hidden[i] = sigmoid(f.pre_hidden[i]);
    }
    f.logits = detail::layer_product(m.w2, f.hidden, opt, 1, f.jobs);
    return f;
}

inline std::vector<double> softmax(std::span<const double> logits) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (double &v : p) {
        v /= sum;
    }
    return p;
}

/// -log softmax(logits)[label], via log-sum-exp.
inline double cross_entropy(std::span<const double> logits, std::size_t label) {
    const double mx = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) {
        sum += std::exp(z - mx);
    }
    return mx + std::log(sum) - logits[label];
}

/// Lowest index wins ties.
inline std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

struct Gradients {
    RealMatrix w1;
    RealMatrix w2;
    double loss = 0.0;
};

/// Backpropagate the loss of one sample from its forward activations.
inline Gradients gradients(const Model &m, std::span<const double> x, std::size_t label,
                           const ForwardResult &f) {
    if (label >= m.w2.rows()) {
        throw Error(ErrorKind::ShapeMismatch, "label out of range");
    }
    Gradients g{RealMatrix(m.w1.rows(), m.w1.cols()), RealMatrix(m.w2.rows(), m.w2.cols()),
                cross_entropy(f.logits, label)};
    auto d2 = softmax(f.logits);
    d2[label] -= 1.0;
    for (std::size_t o = 0; o < d2.size(); ++o) {
        for (std::size_t h = 0; h < f.hidden.size(); ++h) {
            g.w2(o, h) = d2[o] * f.hidden[h];
        }
    }
    for (std::size_t h = 0; h < f.hidden.size(); ++h) {
        double back = 0.0;
        for (std::size_t o = 0; o < d2.size(); ++o) {
            back += m.w2(o, h) * d2[o];
        }
        const double d1 = back * f.hidden[h] * (1.0 - f.hidden[h]);
        for (std::size_t i = 0; i < x.size(); ++i) {
            g.w1(h, i) = d1 * x[i];
        }
    }
    return g;
}

inline double loss(const Model &m, std::span<const double> x, std::size_t label) {
    return cross_entropy(forward(m, x, {}).logits, label);
}

struct EvalResult {
    double accuracy = 0.0;
    std::vector<std::size_t> predictions;
    std::size_t jobs = 0;
};

inline EvalResult evaluate(const Model &m, const Dataset &data, std::span<const std::size_t> idx,
                           const ForwardOptions &opt = {}) {
    if (data.features.cols() != m.w1.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "evaluate: feature width differs from model input");
    }
    EvalResult r;
    if (idx.empty()) {
        return r;
    }
    std::size_t correct = 0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        auto o = opt;
        o.seed = derive_seed(opt.seed, {idx[k]});
        const auto f = forward(m, data.sample(idx[k]), o);
        r.jobs += f.jobs;
        const auto pred = argmax(f.logits);
        r.predictions.push_back(pred);
        correct += pred == data.labels[idx[k]] ? 1 : 0;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(idx.size());
    return r;
}

inline EvalResult evaluate(const Model &m, const Dataset &data, const ForwardOptions &opt = {}) {
    return evaluate(m, data, data.test, opt);
}

struct TrainReport {
    std::vector<double> epoch_loss;          ///< mean training loss per epoch
    std::vector<double> epoch_test_accuracy;
    double final_accuracy = 0.0;
    double final_train_accuracy = 0.0;
    std::size_t quantum_jobs = 0;
    double wall_seconds = 0.0;
    Model model;
};

namespace detail {

inline constexpr std::uint64_t kInitStream = 1;
inline constexpr std::uint64_t kShuffleStream = 2;
inline constexpr std::uint64_t kForwardStream = 3;
inline constexpr std::uint64_t kEvalStream = 4;

inline void require_consistent(const Dataset &data, const NetworkShape &s) {
    if (data.size() == 0 || data.train.empty()) {
        throw Error(ErrorKind::EmptyDataset, "no training samples");
    }
    if (data.features.cols() != s.input || data.features.rows() != data.size()) {
        throw Error(ErrorKind::ShapeMismatch, "features do not match the input width");
    }
    if (data.classes > s.output) {
        throw Error(ErrorKind::ShapeMismatch, "more classes than output units");
    }
    for (auto l : data.labels) {
        if (l >= s.output) {
            throw Error(ErrorKind::ShapeMismatch, "label out of range");
        }
    }
}

} // namespace detail

inline ForwardOptions forward_options(const TrainConfig &cfg, std::uint64_t seed) {
    return {cfg.mode, cfg.shots, seed, cfg.exact, cfg.pattern, cfg.threads};
}

/// Mini-batch SGD. The batch gradient is the sum of per-sample gradients.
inline TrainReport train(const Dataset &data, const TrainConfig &cfg) {
    validate(cfg);
    detail::require_consistent(data, cfg.shape);
    const auto t0 = std::chrono::steady_clock::now();

    TrainReport rep;
    rep.model = init_model(cfg.shape, derive_seed(cfg.seed, {detail::kInitStream}));
    auto &m = rep.model;
    std::vector<std::size_t> order(data.train.begin(), data.train.end());

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        CounterRng shuffle(derive_seed(cfg.seed, {detail::kShuffleStream, epoch}));
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle.below(i)]);
        }
        double loss_sum = 0.0;
        for (std::size_t b = 0; b < order.size(); b += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), b + cfg.batch_size);
            RealMatrix g1(m.w1.rows(), m.w1.cols());
            RealMatrix g2(m.w2.rows(), m.w2.cols());
            for (std::size_t k = b; k < end; ++k) {
                const auto idx = order[k];
                const auto x = data.sample(idx);
                const auto f = forward(
                    m, x,
                    forward_options(cfg, derive_seed(cfg.seed, {detail::kForwardStream, epoch, idx})));
                rep.quantum_jobs += f.jobs;
                const auto g = gradients(m, x, data.labels[idx], f);
                loss_sum += g.loss;
                for (std::size_t q = 0; q < g1.values().size(); ++q) {
                    g1.values()[q] += g.w1.values()[q];
                }
                for (std::size_t q = 0; q < g2.values().size(); ++q) {
                    g2.values()[q] += g.w2.values()[q];
                }
            }
            for (std::size_t q = 0; q < g1.values().size(); ++q) {
                m.w1.values()[q] -= cfg.learning_rate * g1.values()[q];
            }
            for (std::size_t q = 0; q < g2.values().size(); ++q) {
                m.w2.values()[q] -= cfg.learning_rate * g2.values()[q];
            }
        }
        rep.epoch_loss.push_back(loss_sum / static_cast<double>(order.size()));
        const auto ev = evaluate(
            m, data, data.test,
            forward_options(cfg, derive_seed(cfg.seed, {detail::kEvalStream, epoch})));
        rep.quantum_jobs += ev.jobs;
        rep.epoch_test_accuracy.push_back(ev.accuracy);
    }
    rep.final_accuracy = rep.epoch_test_accuracy.back();
    const auto tr = evaluate(
        m, data, data.train,
        forward_options(cfg, derive_seed(cfg.seed, {detail::kEvalStream, cfg.epochs})));
    rep.quantum_jobs += tr.jobs;
    rep.final_train_accuracy = tr.accuracy;
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

// ---------------------------------------------------------------- datasets

/// Per class: shuffle, put round(fraction * count) samples in test.
inline void stratified_split(Dataset &data, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "test fraction must lie in [0, 1)");
    }
    data.train.clear();
    data.test.clear();
    data.split_seed = seed;
    for (std::size_t c = 0; c < data.classes; ++c) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data.labels[i] == c) {
                idx.push_back(i);
            }
        }
        CounterRng rng(derive_seed(seed, {c}));
        for (std::size_t i = idx.size(); i > 1; --i) {
            std::swap(idx[i - 1], idx[rng.below(i)]);
        }
        const auto k = static_cast<std::size_t>(
            std::lround(test_fraction * static_cast<double>(idx.size())));
        data.test.insert(data.test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
        data.train.insert(data.train.end(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end());
    }
    std::sort(data.train.begin(), data.train.end());
    std::sort(data.test.begin(), data.test.end());
}

/// Zero mean, unit population variance per column; constant columns are only centred.
inline void standardize(RealMatrix &x) {
    const auto n = static_cast<double>(x.rows());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        long double s = 0.0L;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            s += x(r, c);
        }
        const double mu = static_cast<double>(s / n);
        long double v = 0.0L;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            v += static_cast<long double>(x(r, c) - mu) * (x(r, c) - mu);
        }
        const double sd = std::sqrt(static_cast<double>(v / n));
        for (std::size_t r = 0; r < x.rows(); ++r) {
            x(r, c) = sd > 0.0 ? (x(r, c) - mu) / sd : x(r, c) - mu;
        }
    }
}

/// Four numeric features and a string label per line; an optional header is skipped.
inline Dataset parse_iris(std::string_view text) {
    Dataset d;
    std::vector<double> values;
    std::map<std::string, std::size_t> ids;
    std::size_t line_no = 0;
    std::size_t start = 0;
    bool first_record = true;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const auto line = io::detail::trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto fields = io::detail::split(line, ',');
        if (fields.size() != 5) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) +
                                                   ": expected 4 features and a label");
        }
        if (first_record) {
            first_record = false;
            double probe = 0.0;
            const auto f0 = io::detail::trim(fields[0]);
            auto [ptr, ec] = std::from_chars(f0.data(), f0.data() + f0.size(), probe);
            if (ec != std::errc() || ptr != f0.data() + f0.size()) {
                continue;
            }
        }
        for (std::size_t k = 0; k < 4; ++k) {
            values.push_back(io::detail::parse_double(fields[k], line_no));
        }
        const std::string name(io::detail::trim(fields[4]));
        auto [it, inserted] = ids.try_emplace(name, d.class_names.size());
        if (inserted) {
            d.class_names.push_back(name);
        }
        d.labels.push_back(it->second);
    }
    if (d.labels.empty()) {
        throw Error(ErrorKind::EmptyDataset, "no IRIS records");
    }
    d.classes = d.class_names.size();
    d.features = RealMatrix(d.labels.size(), 4, std::move(values));
    require_finite(d.features.values(), "IRIS features");
    standardize(d.features);
    return d;
}

inline Dataset ingest_iris(const std::filesystem::path &path, double test_fraction = 0.2,
                           std::uint64_t split_seed = 0) {
    auto d = parse_iris(io::read_text(path));
    stratified_split(d, test_fraction, split_seed);
    return d;
}

struct IdxHeader {
    std::uint32_t magic = 0;
    std::uint32_t count = 0;
    std::uint32_t rows = 0; ///< images only
    std::uint32_t cols = 0;
};

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

namespace detail {

inline std::uint32_t get_be32(const unsigned char *p) {
    return (static_cast<std::uint32_t>(p[0]) << 24U) | (static_cast<std::uint32_t>(p[1]) << 16U) |
           (static_cast<std::uint32_t>(p[2]) << 8U) | static_cast<std::uint32_t>(p[3]);
}

} // namespace detail

inline IdxHeader decode_idx_header(std::span<const unsigned char> bytes) {
    if (bytes.size() < 8) {
        throw Error(ErrorKind::TruncatedFile, "IDX header needs at least 8 bytes");
    }
    IdxHeader h;
    h.magic = detail::get_be32(bytes.data());
    h.count = detail::get_be32(bytes.data() + 4);
    if (h.magic == kIdxImagesMagic) {
        if (bytes.size() < 16) {
            throw Error(ErrorKind::TruncatedFile, "IDX image header needs 16 bytes");
        }
        h.rows = detail::get_be32(bytes.data() + 8);
        h.cols = detail::get_be32(bytes.data() + 12);
    } else if (h.magic != kIdxLabelsMagic) {
        throw Error(ErrorKind::MagicMismatch, "unknown IDX magic");
    }
    return h;
}

inline IdxHeader read_idx_header(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open " + path.string());
    }
    std::vector<unsigned char> head(16, 0);
    in.read(reinterpret_cast<char *>(head.data()), 16);
    head.resize(static_cast<std::size_t>(in.gcount()));
    return decode_idx_header(head);
}

/// Images scaled to [0, 1], average-pooled by `downsample`, first `limit` samples (0 = all).
inline Dataset decode_mnist_idx(std::span<const unsigned char> images,
                                std::span<const unsigned char> labels, std::size_t downsample = 1,
                                std::size_t limit = 0) {
    const auto hi = decode_idx_header(images);
    const auto hl = decode_idx_header(labels);
    if (hi.magic != kIdxImagesMagic) {
        throw Error(ErrorKind::MagicMismatch, "images file magic is not 0x00000803");
    }
    if (hl.magic != kIdxLabelsMagic) {
        throw Error(ErrorKind::MagicMismatch, "labels file magic is not 0x00000801");
    }
    if (hi.count != hl.count) {
        throw Error(ErrorKind::ParseError, "image and label counts differ");
    }
    const std::size_t px = static_cast<std::size_t>(hi.rows) * hi.cols;
    if (images.size() < 16 + static_cast<std::size_t>(hi.count) * px) {
        throw Error(ErrorKind::TruncatedFile, "IDX image payload is short");
    }
    if (labels.size() < 8 + static_cast<std::size_t>(hl.count)) {
        throw Error(ErrorKind::TruncatedFile, "IDX label payload is short");
    }
    if (downsample < 1 || hi.rows % downsample != 0 || hi.cols % downsample != 0) {
        throw Error(ErrorKind::InvalidArgument, "downsample factor must divide the image size");
    }
    const std::size_t n = limit == 0 ? hi.count : std::min<std::size_t>(limit, hi.count);
    const std::size_t orows = hi.rows / downsample;
    const std::size_t ocols = hi.cols / downsample;
    const double scale = 1.0 / (255.0 * static_cast<double>(downsample * downsample));

    Dataset d;
    d.features = RealMatrix(n, orows * ocols);
    d.labels.resize(n);
    std::size_t max_label = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const unsigned char *img = images.data() + 16 + s * px;
        for (std::size_t r = 0; r < orows; ++r) {
            for (std::size_t c = 0; c < ocols; ++c) {
                unsigned acc = 0;
                for (std::size_t dr = 0; dr < downsample; ++dr) {
                    for (std::size_t dc = 0; dc < downsample; ++dc) {
                        acc += img[(r * downsample + dr) * hi.cols + c * downsample + dc];
                    }
                }
                d.features(s, r * ocols + c) = static_cast<double>(acc) * scale;
            }
        }
        d.labels[s] = labels[8 + s];
        max_label = std::max(max_label, d.labels[s]);
    }
    d.classes = n == 0 ? 0 : std::max<std::size_t>(10, max_label + 1);
    for (std::size_t c = 0; c < d.classes; ++c) {
        d.class_names.push_back(std::to_string(c));
    }
    return d;
}

inline Dataset ingest_mnist_idx(const std::filesystem::path &images,
                                const std::filesystem::path &labels, std::size_t downsample = 1,
                                std::size_t limit = 0) {
    return decode_mnist_idx(io::read_bytes(images), io::read_bytes(labels), downsample, limit);
}

/// Stack a training set and a test set; the first block becomes the train split.
inline Dataset concat_train_test(const Dataset &tr, const Dataset &te) {
    if (tr.features.cols() != te.features.cols()) {
        throw Error(ErrorKind::ShapeMismatch, "train and test feature widths differ");
    }
    Dataset d;
    std::vector<double> v(tr.features.values().begin(), tr.features.values().end());
    v.insert(v.end(), te.features.values().begin(), te.features.values().end());
    d.features = RealMatrix(tr.size() + te.size(), tr.features.cols(), std::move(v));
    d.labels = tr.labels;
    d.labels.insert(d.labels.end(), te.labels.begin(), te.labels.end());
    d.classes = std::max(tr.classes, te.classes);
    d.class_names = tr.classes >= te.classes ? tr.class_names : te.class_names;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        d.train.push_back(i);
    }
    for (std::size_t i = 0; i < te.size(); ++i) {
        d.test.push_back(tr.size() + i);
    }
    return d;
}

// ---------------------------------------------------------------- run config

struct RunConfig {
    TrainConfig train;
    std::string dataset = "iris"; ///< iris | mnist
    std::filesystem::path iris;
    std::filesystem::path train_images;
    std::filesystem::path train_labels;
    std::filesystem::path test_images;
    std::filesystem::path test_labels;
    std::size_t downsample = 1;
    std::size_t limit = 0;
    std::size_t test_limit = 0;
    double test_fraction = 0.2;
    std::optional<std::uint64_t> split_seed; ///< defaults to the training seed
};

namespace detail {

inline std::size_t parse_size(std::string_view v, std::string_view key) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
        throw Error(ErrorKind::ParseError, std::string(key) + ": expected an integer");
    }
    return out;
}

inline bool parse_bool(std::string_view v, std::string_view key) {
    if (v == "true" || v == "1" || v == "yes") {
        return true;
    }
    if (v == "false" || v == "0" || v == "no") {
        return false;
    }
    throw Error(ErrorKind::ParseError, std::string(key) + ": expected true or false");
}

} // namespace detail

/**
 * key = value lines, '#' starts a comment. Relative paths resolve against
 * `base`. Keys: shape, lr, batch, epochs, shots, mode, exact, seed, pattern,
 * dataset, iris, train_images, train_labels, test_images, test_labels,
 * downsample, limit, test_limit, test_fraction, split_seed.
 */
inline RunConfig parse_run_config(std::string_view text, const std::filesystem::path &base = {}) {
    RunConfig rc;
    auto path = [&](std::string_view v) {
        std::filesystem::path p{std::string(v)};
        return p.is_relative() && !base.empty() ? base / p : p;
    };
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        auto line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = io::detail::trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": missing '='");
        }
        const auto key = io::detail::trim(line.substr(0, eq));
        const auto val = io::detail::trim(line.substr(eq + 1));
        auto &t = rc.train;
        if (key == "shape") {
            const auto parts = io::detail::split(val, ',');
            if (parts.size() != 3) {
                throw Error(ErrorKind::ParseError, "shape: expected input,hidden,output");
            }
            t.shape = {detail::parse_size(io::detail::trim(parts[0]), key),
                       detail::parse_size(io::detail::trim(parts[1]), key),
                       detail::parse_size(io::detail::trim(parts[2]), key)};
        } else if (key == "lr") {
            t.learning_rate = io::detail::parse_double(val, line_no);
        } else if (key == "batch") {
            t.batch_size = detail::parse_size(val, key);
        } else if (key == "epochs") {
            t.epochs = detail::parse_size(val, key);
        } else if (key == "shots") {
            t.shots = static_cast<std::int64_t>(detail::parse_size(val, key));
        } else if (key == "mode") {
            if (val == "quantum") {
                t.mode = ForwardMode::Quantum;
            } else if (val == "classical") {
                t.mode = ForwardMode::Classical;
            } else {
                throw Error(ErrorKind::ParseError, "mode: expected quantum or classical");
            }
        } else if (key == "exact") {
            t.exact = detail::parse_bool(val, key);
        } else if (key == "seed") {
            t.seed = detail::parse_size(val, key);
        } else if (key == "pattern") {
            auto p = parse_pattern(val);
            if (!p) {
                throw Error(ErrorKind::ParseError, "pattern: unknown value");
            }
            t.pattern = *p;
        } else if (key == "dataset") {
            rc.dataset = std::string(val);
        } else if (key == "iris") {
            rc.iris = path(val);
        } else if (key == "train_images") {
            rc.train_images = path(val);
        } else if (key == "train_labels") {
            rc.train_labels = path(val);
        } else if (key == "test_images") {
            rc.test_images = path(val);
        } else if (key == "test_labels") {
            rc.test_labels = path(val);
        } else if (key == "downsample") {
            rc.downsample = detail::parse_size(val, key);
        } else if (key == "limit") {
            rc.limit = detail::parse_size(val, key);
        } else if (key == "test_limit") {
            rc.test_limit = detail::parse_size(val, key);
        } else if (key == "test_fraction") {
            rc.test_fraction = io::detail::parse_double(val, line_no);
        } else if (key == "split_seed") {
            rc.split_seed = detail::parse_size(val, key);
        } else {
            throw Error(ErrorKind::ParseError, "unknown key '" + std::string(key) + "'");
        }
    }
    if (rc.dataset != "iris" && rc.dataset != "mnist") {
        throw Error(ErrorKind::ParseError, "dataset: expected iris or mnist");
    }
    return rc;
}

inline RunConfig read_run_config(const std::filesystem::path &file) {
    return parse_run_config(io::read_text(file), file.parent_path());
}

/// MNIST without test files is split like IRIS.
inline Dataset load_dataset(const RunConfig &rc) {
    const auto split_seed = rc.split_seed.value_or(rc.train.seed);
    if (rc.dataset == "iris") {
        return ingest_iris(rc.iris, rc.test_fraction, split_seed);
    }
    auto tr = ingest_mnist_idx(rc.train_images, rc.train_labels, rc.downsample, rc.limit);
    if (rc.test_images.empty()) {
        stratified_split(tr, rc.test_fraction, split_seed);
        return tr;
    }
    const auto te = ingest_mnist_idx(rc.test_images, rc.test_labels, rc.downsample, rc.test_limit);
    return concat_train_test(tr, te);
}

} // namespace qstack::qml
