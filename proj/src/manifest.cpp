#include "capsynth/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "capsynth/rng.hpp"

namespace capsynth::data {

DatasetManifest split_manifest(const DatasetManifest& manifest, int ratio_train, int ratio_val,
                               std::uint64_t seed) {
    if (ratio_train <= 0 || ratio_val <= 0)
        throw std::invalid_argument("split ratios must be positive integers");
    if (manifest.entries.empty()) throw std::invalid_argument("cannot split an empty manifest");

    const size_t n = manifest.entries.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    Rng rng(seed);
    for (size_t i = n - 1; i > 0; --i) {
        size_t j = rng.uniform_int(i + 1);
        std::swap(order[i], order[j]);
    }

    size_t n_train = static_cast<size_t>(
        std::llround(static_cast<double>(n) * ratio_train / (ratio_train + ratio_val)));

    DatasetManifest out = manifest;
    out.entries.clear();
    out.entries.reserve(n);
    for (size_t k = 0; k < n; ++k) {
        ManifestEntry e = manifest.entries[order[k]];
        e.split = k < n_train ? Split::Train : Split::Val;
        out.entries.push_back(std::move(e));
    }
    return out;
}

void write_manifest(const std::string& path, const DatasetManifest& manifest) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << "# seed " << manifest.master_seed << "\n";
    os << "# digest " << manifest.config_digest << "\n";
    for (const auto& e : manifest.entries)
        os << e.image_path << " " << e.label_path << " "
           << (e.split == Split::Train ? "train" : "val") << "\n";
}

DatasetManifest read_manifest(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read " + path);
    DatasetManifest m;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hs(line.substr(1));
            std::string key;
            hs >> key;
            if (key == "seed") hs >> m.master_seed;
            if (key == "digest") hs >> m.config_digest;
            continue;
        }
        std::istringstream ls(line);
        ManifestEntry e;
        std::string split;
        if (!(ls >> e.image_path >> e.label_path >> split))
            throw std::runtime_error(path + ": malformed manifest entry at line " +
                                     std::to_string(lineno));
        if (split == "train")
            e.split = Split::Train;
        else if (split == "val")
            e.split = Split::Val;
        else
            throw std::runtime_error(path + ": unknown split tag '" + split + "' at line " +
                                     std::to_string(lineno));
        m.entries.push_back(std::move(e));
    }
    return m;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string fnv1a_hex_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return fnv1a_hex(ss.str());
}

}  // namespace capsynth::data
