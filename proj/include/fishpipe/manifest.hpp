#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fishpipe/geometry.hpp"

namespace fishpipe {

enum class Split { kUnassigned, kTrain, kVal, kTest };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

// The ten per-image covariates plus the scene-structure measures.
struct DiagnosticVector {
    double turbidity = 0.0;
    double rms_contrast = 0.0;
    double blur_var = 0.0;
    double ratio_r = 0.0;
    double ratio_g = 0.0;
    double ratio_b = 0.0;
    double uicm = 0.0;
    double uism = 0.0;
    double uiconm = 0.0;
    double uiqm = 0.0;
    double uciqe = 0.0;
    int fish_count = 0;
    double overlap_pairwise = 0.0;
    double overlap_maxmean = 0.0;

    bool operator==(const DiagnosticVector&) const = default;
};

// One manifest row: image identity, provenance, annotations, hashes,
// split assignment and (once computed) diagnostics.
struct ImageRecord {
    std::string image_id;   // source + "/" + relative path
    std::string source;
    std::string path;
    int width_px = 0;
    int height_px = 0;
    std::vector<Annotation> annotations;
    std::string content_digest;   // MD5 of image bytes, lowercase hex
    uint64_t perceptual_hash = 0; // 8x8 average hash
    Split split = Split::kUnassigned;
    std::optional<DiagnosticVector> diagnostics;

    bool operator==(const ImageRecord&) const = default;
};

struct SourceDescriptor {
    std::string name;
    std::string root;
    std::string adapter;  // "yolo" or "voc_xml"

    bool operator==(const SourceDescriptor&) const = default;
};

struct Manifest {
    int schema_version = 1;
    uint64_t split_seed = 0;
    std::vector<SourceDescriptor> registry;
    std::vector<ImageRecord> records;

    bool operator==(const Manifest&) const = default;
};

// Returns the list of invariant violations for a record; empty means valid.
// Each violation names the offending field and rule.
std::vector<std::string> validate_record(const ImageRecord& record);

// Single JSON document, stable key order; save/load round-trips exactly.
std::string save_manifest(const Manifest& m);
// Throws std::runtime_error naming the byte offset / field on bad input.
Manifest load_manifest(const std::string& bytes);

}  // namespace fishpipe
