// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fusekit/errors.hpp"
#include "fusekit/radar.hpp"

namespace fusekit {

/// One timestamped record of a sensor stream.
struct TimedRecord {
    std::int64_t timestamp_us = 0;
    std::string path;  // file path or logical record id
};

/// Sorted index of one stream; timestamps strictly increasing.
struct TimedIndex {
    std::string stream_id;
    std::vector<TimedRecord> records;

    /// Throws ConfigError when timestamps are not strictly increasing.
    void validate() const;
};

/// An image record matched with its radar scan.
struct StreamPair {
    TimedRecord image;
    TimedRecord scan;

    std::int64_t offset_us() const { return image.timestamp_us - scan.timestamp_us; }
};

/// Greedy per-image pairing in time order: each image takes the nearest
/// still-unused scan iff |dt| <= max_offset_us; unpairable images are
/// dropped. Each scan is used at most once.
std::vector<StreamPair> pair_streams(const TimedIndex& images, const TimedIndex& scans,
                                     std::int64_t max_offset_us);

/// Keeps pairs at indices congruent to 0 mod factor, preserving order.
/// factor 0 throws ConfigError.
std::vector<StreamPair> subsample(std::span<const StreamPair> pairs, unsigned factor);

/// Ego-motion entry minimizing |dt| to the scan; ties resolve to the
/// earlier entry. Throws ConfigError on an empty track.
EgoMotion nearest_ego(std::int64_t scan_timestamp_us, std::span<const EgoMotion> ego_track);

}  // namespace fusekit
