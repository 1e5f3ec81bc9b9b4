#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "strocbench/errors.hpp"
#include "strocbench/geometry.hpp"

namespace strocbench {

// ---------------------------------------------------------------------------
// Anomaly taxonomy: 9 base categories, each split into ego-involved and
// non-ego ("*" suffix), 18 categories total.
// ---------------------------------------------------------------------------

struct AnomalyCategory {
    int base_id = 1;          // 1..9
    bool ego_involved = true; // non-ego carries a "*" suffix in labels

    bool operator==(const AnomalyCategory&) const = default;
    auto operator<=>(const AnomalyCategory&) const = default;

    bool is_unknown() const { return base_id == 9; }
};

inline constexpr int kNumBaseCategories = 9;
inline constexpr std::array<const char*, 9> kCategoryShortNames = {
    "ST", "AH", "LA", "OC", "TC", "VP", "VO", "OO", "UK"};

inline std::string category_label(const AnomalyCategory& c) {
    std::string s = kCategoryShortNames[c.base_id - 1];
    if (!c.ego_involved) s += "*";
    return s;
}

inline AnomalyCategory category_from_label(std::string_view label) {
    bool ego = true;
    if (!label.empty() && label.back() == '*') {
        ego = false;
        label.remove_suffix(1);
    }
    for (int i = 0; i < kNumBaseCategories; ++i) {
        if (label == kCategoryShortNames[i]) return {i + 1, ego};
    }
    throw SchemaViolation("unknown anomaly category label '" + std::string(label) + "'");
}

// The seven annotated traffic participant classes.
enum class ObjectClass { person, car, truck, bus, motorcycle, bicycle, rider };

inline constexpr std::array<const char*, 7> kObjectClassNames = {
    "person", "car", "truck", "bus", "motorcycle", "bicycle", "rider"};

inline std::string object_class_name(ObjectClass c) {
    return kObjectClassNames[static_cast<int>(c)];
}

inline ObjectClass object_class_from_name(std::string_view name) {
    for (int i = 0; i < 7; ++i) {
        if (name == kObjectClassNames[i]) return static_cast<ObjectClass>(i);
    }
    throw SchemaViolation("unknown object class '" + std::string(name) + "'");
}

// One anomalous object: a track id, its class, and per-frame boxes. Boxes may
// only exist inside the video's anomaly window.
struct Tracklet {
    int track_id = 0;
    ObjectClass object_class = ObjectClass::car;
    std::map<int, BoundingBox> boxes; // frame index -> box

    bool operator==(const Tracklet&) const;
};

inline bool operator==(const BoundingBox& a, const BoundingBox& b) {
    return a.x1 == b.x1 && a.y1 == b.y1 && a.x2 == b.x2 && a.y2 == b.y2;
}

inline bool Tracklet::operator==(const Tracklet& o) const {
    return track_id == o.track_id && object_class == o.object_class && boxes == o.boxes;
}

// One video's full annotation. Frames in [0, anomaly_start) are the normal
// precursor, [anomaly_start, anomaly_end) the anomaly window, and
// [anomaly_end, num_frames) normal post-anomaly footage.
struct VideoAnnotation {
    std::string video_id;
    int num_frames = 0;
    int width = 0;
    int height = 0;
    double fps = 10.0;
    int anomaly_start = 0;
    int anomaly_end = 0; // half-open window [anomaly_start, anomaly_end)
    AnomalyCategory category;
    std::vector<Tracklet> tracklets;

    bool operator==(const VideoAnnotation&) const = default;

    void validate() const {
        if (video_id.empty()) throw SchemaViolation("video_id: must be non-empty");
        if (num_frames <= 0) throw SchemaViolation("num_frames: must be positive");
        if (width <= 0 || height <= 0) throw SchemaViolation("width/height: must be positive");
        if (fps <= 0.0) throw SchemaViolation("fps: must be positive");
        if (category.base_id < 1 || category.base_id > kNumBaseCategories)
            throw SchemaViolation("category.base_id: must be in 1..9");
        if (anomaly_start < 0 || anomaly_start >= anomaly_end || anomaly_end > num_frames)
            throw SchemaViolation("anomaly window: need 0 <= anomaly_start < anomaly_end <= num_frames");
        std::vector<int> seen_ids;
        for (std::size_t t = 0; t < tracklets.size(); ++t) {
            const Tracklet& tr = tracklets[t];
            const std::string path = "tracklets[" + std::to_string(t) + "]";
            for (int id : seen_ids) {
                if (id == tr.track_id)
                    throw SchemaViolation(path + ".track_id: duplicate id " + std::to_string(tr.track_id));
            }
            seen_ids.push_back(tr.track_id);
            for (const auto& [frame, box] : tr.boxes) {
                const std::string bpath = path + ".boxes[" + std::to_string(frame) + "]";
                if (frame < anomaly_start || frame >= anomaly_end)
                    throw SchemaViolation(bpath + ": frame outside anomaly window");
                box.validate(width, height, bpath);
            }
        }
    }
};

// ---------------------------------------------------------------------------
// Annotation document (JSON, UTF-8)
// ---------------------------------------------------------------------------

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& obj, const char* key,
                                           const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaViolation(path + key + ": missing field");
    return *it;
}

template <typename T>
T field_as(const nlohmann::json& obj, const char* key, const std::string& path) {
    const nlohmann::json& v = require_field(obj, key, path);
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw SchemaViolation(path + key + ": wrong type");
    }
}

} // namespace detail

inline VideoAnnotation parse_annotation(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedDocument(std::string("annotation document: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaViolation("document root must be an object");

    using detail::field_as;
    using detail::require_field;

    VideoAnnotation a;
    a.video_id = field_as<std::string>(doc, "video_id", "");
    a.num_frames = field_as<int>(doc, "num_frames", "");
    a.width = field_as<int>(doc, "width", "");
    a.height = field_as<int>(doc, "height", "");
    a.fps = field_as<double>(doc, "fps", "");
    a.anomaly_start = field_as<int>(doc, "anomaly_start", "");
    a.anomaly_end = field_as<int>(doc, "anomaly_end", "");

    const nlohmann::json& cat = require_field(doc, "category", "");
    if (!cat.is_object()) throw SchemaViolation("category: must be an object");
    a.category.base_id = field_as<int>(cat, "base_id", "category.");
    a.category.ego_involved = field_as<bool>(cat, "ego_involved", "category.");

    const nlohmann::json& tracklets = require_field(doc, "tracklets", "");
    if (!tracklets.is_array()) throw SchemaViolation("tracklets: must be an array");
    for (std::size_t t = 0; t < tracklets.size(); ++t) {
        const std::string path = "tracklets[" + std::to_string(t) + "].";
        const nlohmann::json& jt = tracklets[t];
        if (!jt.is_object()) throw SchemaViolation(path + ": must be an object");
        Tracklet tr;
        tr.track_id = field_as<int>(jt, "track_id", path);
        tr.object_class = object_class_from_name(field_as<std::string>(jt, "object_class", path));
        const nlohmann::json& boxes = require_field(jt, "boxes", path);
        if (!boxes.is_object()) throw SchemaViolation(path + "boxes: must be an object");
        for (auto it = boxes.begin(); it != boxes.end(); ++it) {
            int frame = 0;
            try {
                std::size_t pos = 0;
                frame = std::stoi(it.key(), &pos);
                if (pos != it.key().size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw SchemaViolation(path + "boxes: key '" + it.key() + "' is not a frame index");
            }
            const nlohmann::json& jb = *it;
            if (!jb.is_array() || jb.size() != 4)
                throw SchemaViolation(path + "boxes[" + it.key() + "]: must be [x1,y1,x2,y2]");
            BoundingBox box;
            try {
                box.x1 = jb[0].get<double>();
                box.y1 = jb[1].get<double>();
                box.x2 = jb[2].get<double>();
                box.y2 = jb[3].get<double>();
            } catch (const nlohmann::json::exception&) {
                throw SchemaViolation(path + "boxes[" + it.key() + "]: coordinates must be numbers");
            }
            tr.boxes[frame] = box;
        }
        a.tracklets.push_back(std::move(tr));
    }

    a.validate();
    return a;
}

inline std::string serialize_annotation(const VideoAnnotation& a) {
    nlohmann::ordered_json doc;
    doc["video_id"] = a.video_id;
    doc["num_frames"] = a.num_frames;
    doc["width"] = a.width;
    doc["height"] = a.height;
    doc["fps"] = a.fps;
    doc["anomaly_start"] = a.anomaly_start;
    doc["anomaly_end"] = a.anomaly_end;
    doc["category"] = {{"base_id", a.category.base_id}, {"ego_involved", a.category.ego_involved}};
    doc["tracklets"] = nlohmann::ordered_json::array();
    for (const Tracklet& tr : a.tracklets) {
        nlohmann::ordered_json jt;
        jt["track_id"] = tr.track_id;
        jt["object_class"] = object_class_name(tr.object_class);
        nlohmann::ordered_json boxes = nlohmann::ordered_json::object();
        for (const auto& [frame, box] : tr.boxes) {
            boxes[std::to_string(frame)] = {box.x1, box.y1, box.x2, box.y2};
        }
        jt["boxes"] = std::move(boxes);
        doc["tracklets"].push_back(std::move(jt));
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// True iff the frame lies inside the anomaly window.
inline bool frame_label(const VideoAnnotation& a, int frame_index) {
    if (frame_index < 0 || frame_index >= a.num_frames)
        throw FrameOutOfRange(a.video_id + ": frame " + std::to_string(frame_index) +
                              " outside [0, " + std::to_string(a.num_frames) + ")");
    return frame_index >= a.anomaly_start && frame_index < a.anomaly_end;
}

// Rasterize the union of annotated boxes at the requested resolution. A pixel
// (ix, iy) is set iff its center (ix+0.5, iy+0.5) lies inside at least one
// box; boxes are scaled from annotation coordinates when the raster size
// differs from the annotated frame size.
inline PixelMask frame_region_mask(const VideoAnnotation& a, int frame_index, int width, int height) {
    if (frame_index < 0 || frame_index >= a.num_frames)
        throw FrameOutOfRange(a.video_id + ": frame " + std::to_string(frame_index) +
                              " outside [0, " + std::to_string(a.num_frames) + ")");
    PixelMask mask(width, height);
    const double sx = static_cast<double>(width) / a.width;
    const double sy = static_cast<double>(height) / a.height;
    for (const Tracklet& tr : a.tracklets) {
        auto it = tr.boxes.find(frame_index);
        if (it == tr.boxes.end()) continue;
        const BoundingBox b{it->second.x1 * sx, it->second.y1 * sy,
                            it->second.x2 * sx, it->second.y2 * sy};
        const int x_lo = std::max(0, static_cast<int>(std::floor(b.x1 - 0.5)));
        const int x_hi = std::min(width - 1, static_cast<int>(std::ceil(b.x2)));
        const int y_lo = std::max(0, static_cast<int>(std::floor(b.y1 - 0.5)));
        const int y_hi = std::min(height - 1, static_cast<int>(std::ceil(b.y2)));
        for (int iy = y_lo; iy <= y_hi; ++iy) {
            for (int ix = x_lo; ix <= x_hi; ++ix) {
                if (b.contains(ix + 0.5, iy + 0.5)) mask.set(ix, iy);
            }
        }
    }
    return mask;
}

namespace detail {

// Mean per-frame IoU over frames where both tracklets carry a box; 0 when
// they share no frames.
inline double tracklet_similarity(const Tracklet& a, const Tracklet& b) {
    double sum = 0.0;
    int common = 0;
    for (const auto& [frame, box] : a.boxes) {
        auto it = b.boxes.find(frame);
        if (it == b.boxes.end()) continue;
        sum += box_iou(box, it->second);
        ++common;
    }
    return common > 0 ? sum / common : 0.0;
}

inline int round_half_up(double x) {
    return static_cast<int>(std::floor(x + 0.5));
}

} // namespace detail

// Merge independent annotation drafts of the same video. The window is the
// arithmetic mean of the drafts' windows rounded half-up; the category is the
// mode (ties: lowest base_id, then ego-involved). Tracklets are grouped
// greedily across drafts by descending mean per-frame IoU (threshold 0.5, at
// most one tracklet per draft per group) and matched boxes are averaged per
// frame. Boxes falling outside the merged window are dropped so the result
// satisfies the tracklet invariants.
inline VideoAnnotation merge_annotations(const std::vector<VideoAnnotation>& drafts) {
    if (drafts.empty()) throw EmptyInput("merge_annotations: no drafts");
    const VideoAnnotation& first = drafts.front();
    for (const VideoAnnotation& d : drafts) {
        if (d.video_id != first.video_id || d.num_frames != first.num_frames ||
            d.width != first.width || d.height != first.height)
            throw MismatchedVideo("merge_annotations: drafts disagree on video id or dimensions");
    }

    VideoAnnotation out;
    out.video_id = first.video_id;
    out.num_frames = first.num_frames;
    out.width = first.width;
    out.height = first.height;
    out.fps = first.fps;

    double start_sum = 0.0, end_sum = 0.0;
    for (const VideoAnnotation& d : drafts) {
        start_sum += d.anomaly_start;
        end_sum += d.anomaly_end;
    }
    const double n = static_cast<double>(drafts.size());
    out.anomaly_start = detail::round_half_up(start_sum / n);
    out.anomaly_end = detail::round_half_up(end_sum / n);
    out.anomaly_end = std::min(out.anomaly_end, out.num_frames);
    if (out.anomaly_end <= out.anomaly_start) out.anomaly_end = out.anomaly_start + 1;

    // Category mode; ties resolved by lowest base_id, then ego over non-ego.
    std::map<AnomalyCategory, int> votes;
    for (const VideoAnnotation& d : drafts) votes[d.category]++;
    AnomalyCategory best = first.category;
    int best_votes = -1;
    for (const auto& [cat, v] : votes) {
        const bool better =
            v > best_votes ||
            (v == best_votes &&
             std::tuple(cat.base_id, !cat.ego_involved) < std::tuple(best.base_id, !best.ego_involved));
        if (better) {
            best = cat;
            best_votes = v;
        }
    }
    out.category = best;

    // Tracklet grouping: one group may hold at most one tracklet per draft.
    struct Item {
        std::size_t draft;
        const Tracklet* tracklet;
        int group;
    };
    std::vector<Item> items;
    for (std::size_t d = 0; d < drafts.size(); ++d) {
        for (const Tracklet& tr : drafts[d].tracklets)
            items.push_back({d, &tr, -1});
    }
    struct Pair {
        double sim;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            if (items[i].draft == items[j].draft) continue;
            const double sim = detail::tracklet_similarity(*items[i].tracklet, *items[j].tracklet);
            if (sim >= 0.5) pairs.push_back({sim, i, j});
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return a.sim > b.sim;
    });

    std::vector<std::vector<std::size_t>> groups;
    auto group_has_draft = [&](int g, std::size_t draft) {
        for (std::size_t m : groups[g])
            if (items[m].draft == draft) return true;
        return false;
    };
    for (const Pair& p : pairs) {
        Item& a = items[p.i];
        Item& b = items[p.j];
        if (a.group < 0 && b.group < 0) {
            a.group = b.group = static_cast<int>(groups.size());
            groups.push_back({p.i, p.j});
        } else if (a.group >= 0 && b.group < 0) {
            if (!group_has_draft(a.group, b.draft)) {
                b.group = a.group;
                groups[a.group].push_back(p.j);
            }
        } else if (a.group < 0 && b.group >= 0) {
            if (!group_has_draft(b.group, a.draft)) {
                a.group = b.group;
                groups[b.group].push_back(p.i);
            }
        }
        // Both already grouped: leave as is; merging whole groups could put
        // two tracklets of one draft into the same group.
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].group < 0) {
            items[i].group = static_cast<int>(groups.size());
            groups.push_back({i});
        }
    }

    // Canonical group order: by (draft, track_id) of the earliest member.
    std::vector<std::size_t> order(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) order[g] = g;
    auto group_key = [&](std::size_t g) {
        std::size_t best_draft = SIZE_MAX;
        int best_id = 0;
        for (std::size_t m : groups[g]) {
            if (items[m].draft < best_draft ||
                (items[m].draft == best_draft && items[m].tracklet->track_id < best_id)) {
                best_draft = items[m].draft;
                best_id = items[m].tracklet->track_id;
            }
        }
        return std::pair(best_draft, best_id);
    };
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return group_key(a) < group_key(b); });

    std::vector<int> used_ids;
    for (std::size_t g : order) {
        std::vector<const Tracklet*> members;
        for (std::size_t m : groups[g]) members.push_back(items[m].tracklet);
        std::sort(members.begin(), members.end());

        Tracklet merged;
        merged.track_id = group_key(g).second;
        merged.object_class = items[groups[g].front()].tracklet->object_class;
        // Class vote across the group.
        std::map<ObjectClass, int> class_votes;
        for (const Tracklet* m : members) class_votes[m->object_class]++;
        int cbest = -1;
        for (const auto& [cls, v] : class_votes) {
            if (v > cbest) {
                merged.object_class = cls;
                cbest = v;
            }
        }

        std::map<int, std::pair<BoundingBox, int>> acc; // frame -> (sum, count)
        for (const Tracklet* m : members) {
            for (const auto& [frame, box] : m->boxes) {
                auto& [sum, count] = acc[frame];
                sum.x1 += box.x1;
                sum.y1 += box.y1;
                sum.x2 += box.x2;
                sum.y2 += box.y2;
                ++count;
            }
        }
        for (const auto& [frame, sc] : acc) {
            if (frame < out.anomaly_start || frame >= out.anomaly_end) continue;
            const auto& [sum, count] = sc;
            merged.boxes[frame] = {sum.x1 / count, sum.y1 / count, sum.x2 / count, sum.y2 / count};
        }
        if (merged.boxes.empty()) continue;

        while (std::find(used_ids.begin(), used_ids.end(), merged.track_id) != used_ids.end())
            ++merged.track_id;
        used_ids.push_back(merged.track_id);
        out.tracklets.push_back(std::move(merged));
    }

    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Dataset statistics
// ---------------------------------------------------------------------------

struct StatsReport {
    std::map<int, int> precursor_duration_hist;      // frames -> videos
    std::map<int, int> anomaly_duration_hist;        // frames -> videos
    std::map<std::string, int> category_counts;      // short label -> videos
    std::map<int, int> object_count_hist;            // tracklets per video -> videos
    std::map<std::string, int> object_class_counts;  // class name -> tracklets
    int ego_involved_count = 0;
    int non_ego_count = 0;
    int num_videos = 0;
};

inline StatsReport dataset_stats(const std::vector<VideoAnnotation>& annotations) {
    if (annotations.empty()) throw EmptyInput("dataset_stats: no annotations");
    StatsReport r;
    r.num_videos = static_cast<int>(annotations.size());
    for (const VideoAnnotation& a : annotations) {
        r.precursor_duration_hist[a.anomaly_start]++;
        r.anomaly_duration_hist[a.anomaly_end - a.anomaly_start]++;
        r.category_counts[category_label(a.category)]++;
        r.object_count_hist[static_cast<int>(a.tracklets.size())]++;
        for (const Tracklet& tr : a.tracklets)
            r.object_class_counts[object_class_name(tr.object_class)]++;
        if (a.category.ego_involved)
            r.ego_involved_count++;
        else
            r.non_ego_count++;
    }
    return r;
}

} // namespace strocbench
