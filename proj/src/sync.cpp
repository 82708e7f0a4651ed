// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/sync.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace fusekit {

void TimedIndex::validate() const {
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].timestamp_us <= records[i - 1].timestamp_us) {
            throw ConfigError("stream '" + stream_id +
                              "': timestamps must be strictly increasing");
        }
    }
}

namespace {

// Nearest unused scan; ties (equidistant) resolve to the earlier scan.
std::ptrdiff_t nearest_unused(const std::vector<TimedRecord>& scans,
                              const std::vector<char>& used, std::int64_t t) {
    if (scans.empty()) return -1;
    auto it = std::lower_bound(scans.begin(), scans.end(), t,
                               [](const TimedRecord& r, std::int64_t ts) {
                                   return r.timestamp_us < ts;
                               });
    std::ptrdiff_t lo = std::distance(scans.begin(), it) - 1;
    std::ptrdiff_t hi = std::distance(scans.begin(), it);
    while (lo >= 0 && used[static_cast<std::size_t>(lo)]) --lo;
    while (hi < static_cast<std::ptrdiff_t>(scans.size()) &&
           used[static_cast<std::size_t>(hi)]) {
        ++hi;
    }
    const std::int64_t d_lo = lo >= 0 ? std::llabs(scans[lo].timestamp_us - t)
                                      : std::numeric_limits<std::int64_t>::max();
    const std::int64_t d_hi = hi < static_cast<std::ptrdiff_t>(scans.size())
                                  ? std::llabs(scans[hi].timestamp_us - t)
                                  : std::numeric_limits<std::int64_t>::max();
    if (d_lo == std::numeric_limits<std::int64_t>::max() &&
        d_hi == std::numeric_limits<std::int64_t>::max()) {
        return -1;
    }
    return d_lo <= d_hi ? lo : hi;
}

}  // namespace

std::vector<StreamPair> pair_streams(const TimedIndex& images, const TimedIndex& scans,
                                     std::int64_t max_offset_us) {
    images.validate();
    scans.validate();

    std::vector<char> used(scans.records.size(), 0);
    std::vector<StreamPair> pairs;
    pairs.reserve(images.records.size());
    for (const TimedRecord& image : images.records) {
        const std::ptrdiff_t j = nearest_unused(scans.records, used, image.timestamp_us);
        if (j < 0) continue;
        const TimedRecord& scan = scans.records[static_cast<std::size_t>(j)];
        if (std::llabs(image.timestamp_us - scan.timestamp_us) > max_offset_us) continue;
        used[static_cast<std::size_t>(j)] = 1;
        pairs.push_back({image, scan});
    }
    return pairs;
}

std::vector<StreamPair> subsample(std::span<const StreamPair> pairs, unsigned factor) {
    if (factor == 0) {
        throw ConfigError("subsample factor must be >= 1");
    }
    std::vector<StreamPair> out;
    out.reserve(pairs.size() / factor + 1);
    for (std::size_t i = 0; i < pairs.size(); i += factor) {
        out.push_back(pairs[i]);
    }
    return out;
}

EgoMotion nearest_ego(std::int64_t scan_timestamp_us, std::span<const EgoMotion> ego_track) {
    if (ego_track.empty()) {
        throw ConfigError("nearest_ego: ego track is empty");
    }
    const EgoMotion* best = &ego_track[0];
    std::int64_t best_dt = std::llabs(ego_track[0].timestamp_us - scan_timestamp_us);
    for (const EgoMotion& e : ego_track.subspan(1)) {
        const std::int64_t dt = std::llabs(e.timestamp_us - scan_timestamp_us);
        if (dt < best_dt || (dt == best_dt && e.timestamp_us < best->timestamp_us)) {
            best = &e;
            best_dt = dt;
        }
    }
    return *best;
}

}  // namespace fusekit
