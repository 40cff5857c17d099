#include "fsp/pipeline.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <zlib.h>

namespace fsp {

const char* to_string(BinaryLabel label) {
    return label == BinaryLabel::Unstable ? "unstable" : "stable";
}

StabilityLabel flsc_label_window(const FeatureWindow& window,
                                 const FlscConfig& config,
                                 std::uint32_t window_len) {
    const std::size_t area = config.box.area();
    if (window.values.size() != area * window_len) {
        throw DimensionError("flsc_label_window: window length " +
                             std::to_string(window.values.size()) +
                             " != box area * window_len");
    }
    // Same arithmetic as classify_clip_flsc, on the already-cropped pixels.
    std::vector<double> frame_sums(window_len, 0.0);
    double total = 0.0;
    const double* v = window.values.data();
    for (std::uint32_t t = 0; t < window_len; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i < area; ++i) s += v[i];
        frame_sums[t] = s;
        total += s;
        v += area;
    }
    if (total == 0.0) return StabilityLabel::Unstable; // dark window
    const double clip_mean = total / (double(area) * double(window_len));
    double max_dev = 0.0;
    for (std::uint32_t t = 0; t < window_len; ++t) {
        const double fm = frame_sums[t] / double(area);
        max_dev = std::max(max_dev, std::fabs(fm - clip_mean) / clip_mean);
    }
    if (max_dev > config.unstable_threshold) return StabilityLabel::Unstable;
    if (max_dev > config.uncertain_threshold) return StabilityLabel::Uncertain;
    return StabilityLabel::Stable;
}

UnsupervisedModel train_unsupervised(std::span<const ClipRecord> clips,
                                     const FlscConfig& config,
                                     std::uint64_t seed,
                                     const TrainOptions& options) {
    config.validate();
    const std::uint32_t stride =
        options.stride == 0 ? options.window_len : options.stride;

    std::vector<FeatureWindow> windows;
    std::vector<StabilityLabel> labels;
    for (const auto& rec : clips) {
        auto built = build_windows(rec.clip, config.box, rec.id,
                                   options.window_len, stride);
        if (built.windows.empty()) continue;
        if (options.granularity == LabelGranularity::Clip) {
            const StabilityLabel clip_label = classify_clip_flsc(rec.clip, config);
            labels.insert(labels.end(), built.windows.size(), clip_label);
        } else {
            for (const auto& w : built.windows) {
                labels.push_back(flsc_label_window(w, config, options.window_len));
            }
        }
        for (auto& w : built.windows) windows.push_back(std::move(w));
    }

    if (windows.size() < options.k || windows.size() <= options.n_components) {
        throw DataError("train_unsupervised: corpus yields " +
                        std::to_string(windows.size()) +
                        " windows; need more than max(k, n_components)");
    }

    UnsupervisedModel model;
    model.box = config.box;
    model.window_len = options.window_len;

    const FeatureMatrix X = stack(windows);
    model.pca = fit_pca(X, options.n_components);
    const std::vector<double> projected =
        transform_rows(model.pca, X.data.data(), X.rows);

    model.kmeans = fit_kmeans(projected, options.n_components, options.k, seed,
                              options.kmeans);

    model.training_summary.assign(options.k, {0, 0, 0});
    std::vector<std::size_t> assignment(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const std::size_t c = assign(
            model.kmeans,
            std::span<const double>(projected.data() + i * options.n_components,
                                    options.n_components));
        assignment[i] = c;
        model.training_summary[c][static_cast<int>(labels[i])]++;
    }

    // Highest FLSC-Unstable fraction identifies the unstable cluster.
    double best_fraction = -1.0;
    std::uint32_t best_cluster = 0;
    bool any_unstable = false;
    bool all_same = true;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        if (labels[i] != labels[0]) {
            all_same = false;
            break;
        }
    }
    for (std::uint32_t c = 0; c < options.k; ++c) {
        const auto& counts = model.training_summary[c];
        const std::uint64_t size = counts[0] + counts[1] + counts[2];
        const double fraction = size > 0 ? double(counts[0]) / double(size) : 0.0;
        if (counts[0] > 0) any_unstable = true;
        if (fraction > best_fraction) {
            best_fraction = fraction;
            best_cluster = c;
        }
    }

    if (all_same || !any_unstable) {
        // No FLSC signal to identify the cluster; fall back to the lowest
        // PC1 centroid (extinction windows sit at low overall luminance).
        model.low_confidence = true;
        double lowest = std::numeric_limits<double>::infinity();
        for (std::uint32_t c = 0; c < options.k; ++c) {
            const double pc1 = model.kmeans.centroid(c)[0];
            if (pc1 < lowest) {
                lowest = pc1;
                best_cluster = c;
            }
        }
    }
    model.unstable_cluster = best_cluster;
    return model;
}

WindowDecision decide_point(const UnsupervisedModel& model,
                            std::span<const double> point) {
    const auto& km = model.kmeans;
    if (point.size() != km.dim) {
        throw DimensionError("decide_point: point dim " +
                             std::to_string(point.size()) + " != model dim " +
                             std::to_string(km.dim));
    }
    WindowDecision d{BinaryLabel::Stable, 0, 0.0,
                     std::numeric_limits<double>::infinity()};
    double d2_unstable = 0.0;
    double d2_other = std::numeric_limits<double>::infinity();
    std::size_t nearest_other = model.unstable_cluster;
    for (std::uint32_t j = 0; j < km.k; ++j) {
        double s = 0.0;
        const double* c = km.centroid(j);
        for (std::size_t m = 0; m < km.dim; ++m) {
            const double diff = point[m] - c[m];
            s += diff * diff;
        }
        if (j == model.unstable_cluster) {
            d2_unstable = s;
        } else if (s < d2_other) {
            d2_other = s;
            nearest_other = j;
        }
    }
    d.d_unstable = std::sqrt(d2_unstable);
    d.d_nearest_other = std::sqrt(d2_other);
    // Ties go to Unstable.
    if (d2_unstable <= d2_other) {
        d.label = BinaryLabel::Unstable;
        d.cluster = model.unstable_cluster;
    } else {
        d.label = BinaryLabel::Stable;
        d.cluster = nearest_other;
    }
    return d;
}

BinaryLabel classify_window(const UnsupervisedModel& model,
                            const FeatureWindow& window) {
    const std::vector<double> point = transform(model.pca, window.values);
    return decide_point(model, point).label;
}

BinaryLabel classify_clip(const UnsupervisedModel& model, const Clip& clip) {
    auto built = build_windows(clip, model.box, {}, model.window_len);
    if (built.windows.empty()) {
        throw DataError("classify_clip: clip shorter than one window (" +
                        std::to_string(clip.size()) + " < " +
                        std::to_string(model.window_len) + " frames)");
    }
    for (const auto& w : built.windows) {
        if (classify_window(model, w) == BinaryLabel::Unstable) {
            return BinaryLabel::Unstable;
        }
    }
    return BinaryLabel::Stable;
}

// ---------------------------------------------------------------------------
// Persistence. Layout (all little-endian, floats IEEE-754 binary64):
//   "FSPM" | u32 version
//   "BBOX" u32 left, bottom_offset, width, height
//   "WLEN" u32 window_len
//   "PCAD" u64 p, u32 n_components, f64 mean[p], f64 components[nc*p],
//          f64 explained_variance[nc], f64 explained_variance_ratio[nc]
//   "KMNS" u32 k, u32 dim, f64 centroids[k*dim], f64 inertia,
//          u32 iterations_run, u64 seed
//   "UCLS" u32 unstable_cluster, u8 low_confidence
//   "SUMM" u32 k, u64 counts[k*3]
//   u32 crc32 of all preceding bytes
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint32_t kModelVersion = 1;

struct Writer {
    std::vector<std::uint8_t> buf;

    void tag(const char (&t)[5]) { buf.insert(buf.end(), t, t + 4); }
    void u8(std::uint8_t v) { buf.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf.push_back(std::uint8_t(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf.push_back(std::uint8_t(v >> (8 * i)));
    }
    void f64(double v) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        u64(bits);
    }
    void f64s(const std::vector<double>& v) {
        for (double x : v) f64(x);
    }
};

struct Reader {
    const std::vector<std::uint8_t>& buf;
    std::size_t pos = 0;
    std::string section = "header";

    void need(std::size_t n) {
        if (buf.size() - pos < n) {
            throw FormatError("model file truncated in section " + section);
        }
    }
    void expect_tag(const char (&t)[5]) {
        need(4);
        if (std::memcmp(buf.data() + pos, t, 4) != 0) {
            throw FormatError("model file: expected section " + std::string(t) +
                              " at byte " + std::to_string(pos));
        }
        pos += 4;
        section = t;
    }
    std::uint8_t u8() {
        need(1);
        return buf[pos++];
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::vector<double> f64s(std::size_t n) {
        need(n * 8);
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = f64();
        return v;
    }
};

} // namespace

void save_model(const UnsupervisedModel& m, const std::filesystem::path& path) {
    Writer w;
    w.tag("FSPM");
    w.u32(kModelVersion);

    w.tag("BBOX");
    w.u32(m.box.left);
    w.u32(m.box.bottom_offset);
    w.u32(m.box.width);
    w.u32(m.box.height);

    w.tag("WLEN");
    w.u32(m.window_len);

    w.tag("PCAD");
    w.u64(m.pca.dim);
    w.u32(std::uint32_t(m.pca.n_components));
    w.f64s(m.pca.mean);
    w.f64s(m.pca.components);
    w.f64s(m.pca.explained_variance);
    w.f64s(m.pca.explained_variance_ratio);

    w.tag("KMNS");
    w.u32(m.kmeans.k);
    w.u32(std::uint32_t(m.kmeans.dim));
    w.f64s(m.kmeans.centroids);
    w.f64(m.kmeans.inertia);
    w.u32(m.kmeans.iterations_run);
    w.u64(m.kmeans.seed);

    w.tag("UCLS");
    w.u32(m.unstable_cluster);
    w.u8(m.low_confidence ? 1 : 0);

    w.tag("SUMM");
    w.u32(std::uint32_t(m.training_summary.size()));
    for (const auto& counts : m.training_summary) {
        for (std::uint64_t c : counts) w.u64(c);
    }

    const std::uint32_t crc = std::uint32_t(
        ::crc32(0L, w.buf.data(), uInt(w.buf.size())));
    w.u32(crc);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(w.buf.data()),
              std::streamsize(w.buf.size()));
    if (!out) throw IoError("short write to " + path.string());
}

UnsupervisedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());

    if (bytes.size() < 8 || std::memcmp(bytes.data(), "FSPM", 4) != 0) {
        throw FormatError("model file: bad magic (expected FSPM)");
    }
    Reader r{bytes};
    r.pos = 4;
    const std::uint32_t version = r.u32();
    if (version != kModelVersion) {
        throw FormatError("model file: unsupported version " +
                          std::to_string(version) + " (expected " +
                          std::to_string(kModelVersion) + ")");
    }
    if (bytes.size() < 12) {
        throw FormatError("model file truncated in section header");
    }
    const std::size_t body_end = bytes.size() - 4;
    std::uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i) {
        stored_crc |= std::uint32_t(bytes[body_end + i]) << (8 * i);
    }
    const std::uint32_t computed =
        std::uint32_t(::crc32(0L, bytes.data(), uInt(body_end)));
    if (stored_crc != computed) {
        throw FormatError("model file: checksum mismatch");
    }

    UnsupervisedModel m;
    r.expect_tag("BBOX");
    m.box.left = r.u32();
    m.box.bottom_offset = r.u32();
    m.box.width = r.u32();
    m.box.height = r.u32();

    r.expect_tag("WLEN");
    m.window_len = r.u32();

    r.expect_tag("PCAD");
    m.pca.dim = r.u64();
    m.pca.n_components = r.u32();
    m.pca.mean = r.f64s(m.pca.dim);
    m.pca.components = r.f64s(m.pca.n_components * m.pca.dim);
    m.pca.explained_variance = r.f64s(m.pca.n_components);
    m.pca.explained_variance_ratio = r.f64s(m.pca.n_components);

    r.expect_tag("KMNS");
    m.kmeans.k = r.u32();
    m.kmeans.dim = r.u32();
    m.kmeans.centroids = r.f64s(std::size_t(m.kmeans.k) * m.kmeans.dim);
    m.kmeans.inertia = r.f64();
    m.kmeans.iterations_run = r.u32();
    m.kmeans.seed = r.u64();

    r.expect_tag("UCLS");
    m.unstable_cluster = r.u32();
    m.low_confidence = r.u8() != 0;

    r.expect_tag("SUMM");
    const std::uint32_t k = r.u32();
    m.training_summary.resize(k);
    for (auto& counts : m.training_summary) {
        for (auto& c : counts) c = r.u64();
    }

    if (r.pos != body_end) {
        throw FormatError("model file: trailing bytes after section SUMM");
    }
    if (m.unstable_cluster >= m.kmeans.k ||
        m.pca.n_components != m.kmeans.dim) {
        throw FormatError("model file: inconsistent model dimensions");
    }
    return m;
}

std::vector<ProjectionRow> project_corpus(const UnsupervisedModel& model,
                                          std::span<const ClipRecord> clips,
                                          const FlscConfig& config) {
    std::vector<ProjectionRow> rows;
    for (const auto& rec : clips) {
        auto built = build_windows(rec.clip, model.box, rec.id, model.window_len);
        for (const auto& w : built.windows) {
            const std::vector<double> pc = transform(model.pca, w.values);
            const WindowDecision d = decide_point(model, pc);
            rows.push_back({rec.id, w.window_index, pc[0],
                            pc.size() > 1 ? pc[1] : 0.0, d.cluster,
                            int(flsc_label_window(w, config, model.window_len)),
                            false});
        }
    }
    for (std::uint32_t j = 0; j < model.kmeans.k; ++j) {
        const double* c = model.kmeans.centroid(j);
        rows.push_back({"centroid", j, c[0],
                        model.kmeans.dim > 1 ? c[1] : 0.0, j, -1, true});
    }
    return rows;
}

void write_projection_csv(const std::vector<ProjectionRow>& rows,
                          std::ostream& out) {
    out << "clip_id,window_index,pc1,pc2,cluster,flsc_label,is_centroid\n";
    char line[224];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%s,%u,%.12g,%.12g,%zu,%d,%d\n",
                      r.clip_id.c_str(), r.window_index, r.pc1, r.pc2,
                      r.cluster, r.flsc_label, r.is_centroid ? 1 : 0);
        out << line;
    }
}

} // namespace fsp
