#pragma once

#include <array>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fsp/features.hpp"
#include "fsp/flsc.hpp"
#include "fsp/kmeans.hpp"
#include "fsp/pca.hpp"

namespace fsp {

/// Online classification is binary: the unstable cluster vs everything else.
enum class BinaryLabel : int {
    Unstable = 0,
    Stable = 1,
};

const char* to_string(BinaryLabel label);

/// How training windows receive their FLSC label: each window's own frames
/// treated as a clip (default), or the whole source clip's label applied to
/// all of its windows.
enum class LabelGranularity {
    Window,
    Clip,
};

struct TrainOptions {
    std::uint32_t window_len = 30;
    std::uint32_t stride = 0; // 0 -> window_len
    std::size_t n_components = 2;
    std::uint32_t k = 3;
    KMeansParams kmeans;
    LabelGranularity granularity = LabelGranularity::Window;
};

struct ClipRecord {
    std::string id;
    Clip clip;
};

/// Trained unsupervised classifier: PCA projection, k-means centroids, and
/// the identity of the unstable cluster. training_summary[c][v] counts
/// training windows of FLSC label value v assigned to cluster c.
struct UnsupervisedModel {
    BoundingBox box;
    std::uint32_t window_len = 30;
    PcaModel pca;
    KMeansModel kmeans;
    std::uint32_t unstable_cluster = 0;
    bool low_confidence = false;
    std::vector<std::array<std::uint64_t, 3>> training_summary;
};

/// Windows -> PCA(2) -> k-means(3); the unstable cluster is the one with
/// the highest fraction of FLSC-Unstable windows. When FLSC gives no
/// signal (all labels identical, or no window labeled unstable) the
/// cluster with the lowest PC1 centroid is picked and the model is
/// flagged low-confidence.
UnsupervisedModel train_unsupervised(std::span<const ClipRecord> clips,
                                     const FlscConfig& config,
                                     std::uint64_t seed,
                                     const TrainOptions& options = {});

/// Nearest-centroid decision for one already-projected point. Distance
/// ties involving the unstable centroid resolve to Unstable.
struct WindowDecision {
    BinaryLabel label;
    std::size_t cluster;
    double d_unstable;      // Euclidean distance to the unstable centroid
    double d_nearest_other; // Euclidean distance to the nearest other
};

WindowDecision decide_point(const UnsupervisedModel& model,
                            std::span<const double> point);

BinaryLabel classify_window(const UnsupervisedModel& model,
                            const FeatureWindow& window);

/// Unstable iff any window of the clip classifies Unstable. Throws
/// DataError when the clip yields no window.
BinaryLabel classify_clip(const UnsupervisedModel& model, const Clip& clip);

/// FLSC label of a single window's own frames (the training-time labeler).
StabilityLabel flsc_label_window(const FeatureWindow& window,
                                 const FlscConfig& config,
                                 std::uint32_t window_len);

void save_model(const UnsupervisedModel& model,
                const std::filesystem::path& path);
UnsupervisedModel load_model(const std::filesystem::path& path);

/// One row per window of the corpus plus k trailing centroid rows.
struct ProjectionRow {
    std::string clip_id;
    std::uint32_t window_index;
    double pc1;
    double pc2;
    std::size_t cluster;
    int flsc_label; // 0/1/2, -1 for centroid rows
    bool is_centroid;
};

std::vector<ProjectionRow> project_corpus(const UnsupervisedModel& model,
                                          std::span<const ClipRecord> clips,
                                          const FlscConfig& config);

/// CSV: clip_id,window_index,pc1,pc2,cluster,flsc_label,is_centroid.
void write_projection_csv(const std::vector<ProjectionRow>& rows,
                          std::ostream& out);

} // namespace fsp
