#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace capsynth::data {

enum class Split { Train, Val };

struct ManifestEntry {
    std::string image_path;  // relative to the dataset root
    std::string label_path;
    Split split = Split::Train;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::uint64_t master_seed = 0;
    std::string config_digest;  // hex
};

/// Deterministic Fisher-Yates shuffle by seed, then contiguous assignment;
/// the train count is the rounded ratio share, so counts stay within one of
/// exact.
DatasetManifest split_manifest(const DatasetManifest& manifest, int ratio_train, int ratio_val,
                               std::uint64_t seed);

/// Line-oriented file: `# seed N`, `# digest HEX`, then one
/// `image_path label_path split` entry per line.
void write_manifest(const std::string& path, const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::string& path);

/// FNV-1a 64-bit, hex encoded. Used for config digests and artifact hashes.
std::string fnv1a_hex(const std::string& bytes);
std::string fnv1a_hex_file(const std::string& path);

}  // namespace capsynth::data
