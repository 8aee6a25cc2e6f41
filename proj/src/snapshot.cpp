#include "dhne/snapshot.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dhne/errors.hpp"

namespace dhne {

namespace {

constexpr const char* kMagic = "DHNE-SNAPSHOT v1";

void write_values(std::string& out, const char* name, size_t rows, size_t cols,
                  const std::vector<double>& values) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "block %s %zu %zu\n", name, rows, cols);
    out += buf;
    for (size_t r = 0; r < rows; ++r) {
        for (size_t c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", values[r * cols + c]);
            out += buf;
            out += (c + 1 == cols) ? '\n' : ' ';
        }
    }
}

void read_values(std::istream& in, const std::string& name, size_t rows, size_t cols,
                 std::vector<double>& values) {
    std::string tag, got_name;
    size_t got_rows = 0, got_cols = 0;
    if (!(in >> tag >> got_name >> got_rows >> got_cols) || tag != "block") {
        throw FormatError("snapshot truncated before block " + name);
    }
    if (got_name != name || got_rows != rows || got_cols != cols) {
        throw FormatError("snapshot block mismatch: expected " + name + " " +
                          std::to_string(rows) + "x" + std::to_string(cols) + ", found " +
                          got_name + " " + std::to_string(got_rows) + "x" +
                          std::to_string(got_cols));
    }
    values.resize(rows * cols);
    for (double& v : values) {
        if (!(in >> v)) throw FormatError("snapshot truncated inside block " + name);
        if (!std::isfinite(v)) throw FormatError("snapshot holds a non-finite value in " + name);
    }
}

std::string block_name(const char* base, int type) {
    return std::string(base) + "_" + std::to_string(type);
}

}  // namespace

void atomic_write_text(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write file: " + tmp.string());
        out << content;
        if (!out.flush()) throw ConfigError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

void save_snapshot(const DhneParams& params, const std::array<std::string, 3>& type_names,
                   const std::string& path) {
    std::string out;
    out += kMagic;
    out += '\n';
    char buf[128];
    std::snprintf(buf, sizeof(buf), "dims %zu %zu %zu\n", params.dims.feature_dim,
                  params.dims.embed_dim, params.dims.latent_dim);
    out += buf;
    out += "types\t" + type_names[0] + "\t" + type_names[1] + "\t" + type_names[2] + "\n";
    for (int t = 0; t < 3; ++t) {
        write_values(out, block_name("encoder_weight", t).c_str(), params.dims.embed_dim,
                     params.dims.feature_dim, params.encoder[t].weight.data());
        write_values(out, block_name("encoder_bias", t).c_str(), 1, params.dims.embed_dim,
                     params.encoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) {
        write_values(out, block_name("decoder_weight", t).c_str(), params.dims.feature_dim,
                     params.dims.embed_dim, params.decoder[t].weight.data());
        write_values(out, block_name("decoder_bias", t).c_str(), 1, params.dims.feature_dim,
                     params.decoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) {
        write_values(out, block_name("joint_weight", t).c_str(), params.dims.latent_dim,
                     params.dims.embed_dim, params.joint[t].data());
    }
    write_values(out, "joint_bias", 1, params.dims.latent_dim, params.joint_bias);
    write_values(out, "output_weight", 1, params.dims.latent_dim, params.output.weight.data());
    write_values(out, "output_bias", 1, 1, params.output.bias);
    out += "end\n";
    atomic_write_text(path, out);
}

Snapshot load_snapshot(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open snapshot: " + path);
    std::string magic;
    if (!std::getline(in, magic)) throw FormatError("snapshot is empty: " + path);
    if (!magic.empty() && magic.back() == '\r') magic.pop_back();
    if (magic != kMagic) throw FormatError("bad snapshot magic in " + path);

    std::string tag;
    DhneDims dims;
    if (!(in >> tag >> dims.feature_dim >> dims.embed_dim >> dims.latent_dim) || tag != "dims") {
        throw FormatError("snapshot missing dims header");
    }
    Snapshot snap;
    if (!(in >> tag) || tag != "types") throw FormatError("snapshot missing type names");
    in >> std::ws;
    std::string names_line;
    if (!std::getline(in, names_line)) throw FormatError("snapshot missing type names");
    if (!names_line.empty() && names_line.back() == '\r') names_line.pop_back();
    {
        size_t start = 0;
        for (int t = 0; t < 3; ++t) {
            const size_t pos = names_line.find('\t', start);
            if (t < 2 && pos == std::string::npos) {
                throw FormatError("snapshot type names must be tab-separated");
            }
            snap.type_names[t] = names_line.substr(start, pos == std::string::npos
                                                              ? std::string::npos
                                                              : pos - start);
            start = pos + 1;
        }
    }

    snap.params = DhneParams::zeros(dims);
    DhneParams& p = snap.params;
    for (int t = 0; t < 3; ++t) {
        read_values(in, block_name("encoder_weight", t), dims.embed_dim, dims.feature_dim,
                    p.encoder[t].weight.data());
        read_values(in, block_name("encoder_bias", t), 1, dims.embed_dim, p.encoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) {
        read_values(in, block_name("decoder_weight", t), dims.feature_dim, dims.embed_dim,
                    p.decoder[t].weight.data());
        read_values(in, block_name("decoder_bias", t), 1, dims.feature_dim, p.decoder[t].bias);
    }
    for (int t = 0; t < 3; ++t) {
        read_values(in, block_name("joint_weight", t), dims.latent_dim, dims.embed_dim,
                    p.joint[t].data());
    }
    read_values(in, "joint_bias", 1, dims.latent_dim, p.joint_bias);
    read_values(in, "output_weight", 1, dims.latent_dim, p.output.weight.data());
    read_values(in, "output_bias", 1, 1, p.output.bias);
    if (!(in >> tag) || tag != "end") throw FormatError("snapshot missing end marker");
    return snap;
}

}  // namespace dhne
