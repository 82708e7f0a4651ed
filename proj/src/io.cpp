// Copyright 2026 The fusekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "fusekit/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fusekit {

namespace {

using nlohmann::ordered_json;

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    return fields;
}

double parse_double(const std::string& s, const std::string& context) {
    double v = 0.0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw IoError(context + ": bad number '" + s + "'");
    }
    return v;
}

std::int64_t parse_int64(const std::string& s, const std::string& context) {
    std::int64_t v = 0;
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) {
        throw IoError(context + ": bad integer '" + s + "'");
    }
    return v;
}

// Iterates data lines of a CSV file, skipping comments and blanks, and
// hands each to `fn` with its 1-based line number for error messages.
template <typename Fn>
void for_each_data_line(const std::filesystem::path& path, Fn&& fn) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open file: " + path.string());
    }
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        fn(line, line_no);
    }
}

std::string location(const std::filesystem::path& path, std::size_t line_no) {
    return path.filename().string() + ":" + std::to_string(line_no);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) {
        throw IoError("failed to format number");
    }
    return std::string(buf, ptr);
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) {
            throw IoError("cannot write file: " + tmp.string());
        }
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw IoError("short write: " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        throw IoError("cannot rename " + tmp.string() + " -> " + path.string() + ": " +
                      ec.message());
    }
}

void write_detections(const std::filesystem::path& path,
                      std::span<const FrameDetection> detections) {
    std::ostringstream out;
    out << "# fusekit detections v1\n";
    out << "# frame_id,class,objectness,p_vehicle,p_pedestrian,x_min,y_min,x_max,y_max,source\n";
    for (const FrameDetection& fd : detections) {
        const Detection& d = fd.detection;
        out << fd.frame_id << ',' << to_string(d.class_id) << ',' << format_double(d.objectness)
            << ',' << format_double(d.class_probs[0]) << ',' << format_double(d.class_probs[1])
            << ',' << format_double(d.box.x_min) << ',' << format_double(d.box.y_min) << ','
            << format_double(d.box.x_max) << ',' << format_double(d.box.y_max) << ','
            << to_string(d.source) << '\n';
    }
    atomic_write(path, out.str());
}

std::vector<FrameDetection> read_detections(const std::filesystem::path& path) {
    std::vector<FrameDetection> out;
    for_each_data_line(path, [&](const std::string& line, std::size_t line_no) {
        const auto fields = split_csv(line);
        const std::string ctx = location(path, line_no);
        if (fields.size() != 10) {
            throw IoError(ctx + ": expected 10 fields, got " + std::to_string(fields.size()));
        }
        FrameDetection fd;
        fd.frame_id = fields[0];
        Detection& d = fd.detection;
        d.class_id = object_class_from_string(fields[1]);
        d.objectness = parse_double(fields[2], ctx);
        d.class_probs[0] = parse_double(fields[3], ctx);
        d.class_probs[1] = parse_double(fields[4], ctx);
        d.box.x_min = parse_double(fields[5], ctx);
        d.box.y_min = parse_double(fields[6], ctx);
        d.box.x_max = parse_double(fields[7], ctx);
        d.box.y_max = parse_double(fields[8], ctx);
        d.source = detection_source_from_string(fields[9]);
        try {
            d.validate();
        } catch (const ConfigError& e) {
            throw IoError(ctx + ": " + e.what());
        }
        out.push_back(std::move(fd));
    });
    return out;
}

void write_radar_scan(const std::filesystem::path& path, const RadarScan& scan) {
    std::ostringstream out;
    out << "# fusekit radar scan v1\n";
    out << "# timestamp_us,beam,range_m,bearing_rad,range_rate_mps,amplitude_db\n";
    for (const RadarTarget& t : scan.targets) {
        out << t.timestamp_us << ',' << to_string(t.beam) << ',' << format_double(t.range_m)
            << ',' << format_double(t.bearing_rad) << ',' << format_double(t.range_rate_mps)
            << ',' << format_double(t.amplitude_db) << '\n';
    }
    atomic_write(path, out.str());
}

RadarScan read_radar_scan(const std::filesystem::path& path) {
    RadarScan scan;
    bool have_timestamp = false;
    for_each_data_line(path, [&](const std::string& line, std::size_t line_no) {
        const auto fields = split_csv(line);
        const std::string ctx = location(path, line_no);
        if (fields.size() != 6) {
            throw IoError(ctx + ": expected 6 fields, got " + std::to_string(fields.size()));
        }
        RadarTarget t;
        t.timestamp_us = parse_int64(fields[0], ctx);
        try {
            t.beam = radar_beam_from_string(fields[1]);
        } catch (const ConfigError& e) {
            throw IoError(ctx + ": " + e.what());
        }
        t.range_m = parse_double(fields[2], ctx);
        t.bearing_rad = parse_double(fields[3], ctx);
        t.range_rate_mps = parse_double(fields[4], ctx);
        t.amplitude_db = parse_double(fields[5], ctx);
        if (!have_timestamp) {
            scan.timestamp_us = t.timestamp_us;
            have_timestamp = true;
        }
        scan.targets.push_back(t);
    });
    try {
        scan.validate();
    } catch (const ConfigError& e) {
        throw IoError(path.filename().string() + ": " + e.what());
    }
    return scan;
}

void write_index(const std::filesystem::path& path, const TimedIndex& index) {
    std::ostringstream out;
    out << "# fusekit index v1\n";
    out << "# timestamp_us,path\n";
    for (const TimedRecord& r : index.records) {
        out << r.timestamp_us << ',' << r.path << '\n';
    }
    atomic_write(path, out.str());
}

TimedIndex read_index(const std::filesystem::path& path, const std::string& stream_id) {
    TimedIndex index;
    index.stream_id = stream_id;
    for_each_data_line(path, [&](const std::string& line, std::size_t line_no) {
        const auto fields = split_csv(line);
        const std::string ctx = location(path, line_no);
        if (fields.size() != 2) {
            throw IoError(ctx + ": expected 2 fields, got " + std::to_string(fields.size()));
        }
        TimedRecord r;
        r.timestamp_us = parse_int64(fields[0], ctx);
        r.path = fields[1];
        index.records.push_back(std::move(r));
    });
    try {
        index.validate();
    } catch (const ConfigError& e) {
        throw IoError(path.filename().string() + ": " + e.what());
    }
    return index;
}

void write_ego_track(const std::filesystem::path& path, std::span<const EgoMotion> track) {
    std::ostringstream out;
    out << "# fusekit ego track v1\n";
    out << "# timestamp_us,vx_mps,vy_mps,vz_mps,yaw_rate_radps\n";
    for (const EgoMotion& e : track) {
        out << e.timestamp_us << ',' << format_double(e.linear_mps.x()) << ','
            << format_double(e.linear_mps.y()) << ',' << format_double(e.linear_mps.z()) << ','
            << format_double(e.yaw_rate_radps) << '\n';
    }
    atomic_write(path, out.str());
}

std::vector<EgoMotion> read_ego_track(const std::filesystem::path& path) {
    std::vector<EgoMotion> track;
    for_each_data_line(path, [&](const std::string& line, std::size_t line_no) {
        const auto fields = split_csv(line);
        const std::string ctx = location(path, line_no);
        if (fields.size() != 5) {
            throw IoError(ctx + ": expected 5 fields, got " + std::to_string(fields.size()));
        }
        EgoMotion e;
        e.timestamp_us = parse_int64(fields[0], ctx);
        e.linear_mps = {parse_double(fields[1], ctx), parse_double(fields[2], ctx),
                        parse_double(fields[3], ctx)};
        e.yaw_rate_radps = parse_double(fields[4], ctx);
        track.push_back(e);
    });
    return track;
}

void write_pgm(const std::filesystem::path& path, const Image8& image) {
    std::string contents = "P5\n" + std::to_string(image.width()) + " " +
                           std::to_string(image.height()) + "\n255\n";
    contents.append(reinterpret_cast<const char*>(image.pixels().data()), image.pixels().size());
    atomic_write(path, contents);
}

Image8 read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open PGM: " + path.string());
    }
    std::string magic;
    in >> magic;
    if (magic != "P5") {
        throw IoError(path.filename().string() + ": not a binary PGM (P5)");
    }
    int width = 0;
    int height = 0;
    int maxval = 0;
    in >> width >> height >> maxval;
    if (!in || width <= 0 || height <= 0 || maxval != 255) {
        throw IoError(path.filename().string() + ": bad PGM header");
    }
    in.get();  // single whitespace after the header
    Image8 image(width, height);
    std::vector<char> buf(static_cast<std::size_t>(width) * height);
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size())) {
        throw IoError(path.filename().string() + ": truncated PGM payload");
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            image.set(x, y, static_cast<std::uint8_t>(
                                buf[static_cast<std::size_t>(y) * width + x]));
        }
    }
    return image;
}

namespace {

ordered_json curve_json(const PRCurve& curve) {
    ordered_json j;
    j["tp"] = curve.tp;
    j["fp"] = curve.fp;
    j["fn"] = curve.fn;
    j["num_gt"] = curve.num_gt;
    ordered_json points = ordered_json::array();
    for (const PRPoint& p : curve.points) {
        points.push_back({p.confidence, p.precision, p.recall});
    }
    j["pr_points"] = points;
    return j;
}

}  // namespace

void write_report(const std::filesystem::path& path, const EvaluationReport& report) {
    ordered_json j;
    j["format"] = "fusekit-report-v1";
    j["iou_threshold"] = report.iou_threshold;
    ordered_json cats;
    for (const char* name : {"small", "medium", "large", "all"}) {
        const auto it = report.categories.find(name);
        if (it == report.categories.end()) continue;
        ordered_json c = curve_json(it->second.curve);
        if (it->second.ap) {
            c["ap"] = *it->second.ap;
        } else {
            c["ap"] = nullptr;
        }
        cats[name] = c;
    }
    j["categories"] = cats;
    atomic_write(path, j.dump(2) + "\n");
}

void write_pr_csv(const std::filesystem::path& path, const PRCurve& curve) {
    std::ostringstream out;
    out << "# fusekit pr curve v1\n";
    out << "# confidence,precision,recall\n";
    for (const PRPoint& p : curve.points) {
        out << format_double(p.confidence) << ',' << format_double(p.precision) << ','
            << format_double(p.recall) << '\n';
    }
    atomic_write(path, out.str());
}

}  // namespace fusekit
