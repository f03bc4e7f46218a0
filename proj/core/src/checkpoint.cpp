#include "kgcwalk/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace kgcwalk {

namespace {

constexpr char kMagic[8] = {'K', 'G', 'C', 'W', 'A', 'L', 'K', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
    char b[4];
    b[0] = static_cast<char>(v & 0xff);
    b[1] = static_cast<char>((v >> 8) & 0xff);
    b[2] = static_cast<char>((v >> 16) & 0xff);
    b[3] = static_cast<char>((v >> 24) & 0xff);
    out.write(b, 4);
}

void write_f64(std::ostream& out, double x) {
    const std::uint64_t v = std::bit_cast<std::uint64_t>(x);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(b, 8);
}

bool read_u32(std::istream& in, std::uint32_t& v) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

double read_f64(std::istream& in) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) {
        throw std::runtime_error("checkpoint truncated while reading values");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return std::bit_cast<double>(v);
}

std::string read_bytes(std::istream& in, std::uint32_t len, const char* what) {
    std::string s(len, '\0');
    if (!in.read(s.data(), len)) {
        throw std::runtime_error(std::string("checkpoint truncated while reading ") + what);
    }
    return s;
}

} // namespace

const CheckpointRecord* CheckpointData::find(const std::string& name) const {
    for (const auto& r : records) {
        if (r.name == name) return &r;
    }
    return nullptr;
}

void save_checkpoint(const ParamStore& store, const std::vector<std::string>& vocab_tokens,
                     const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open checkpoint for writing: " + path.string());
    }
    out.write(kMagic, sizeof(kMagic));
    for (ParamId id = 0; id < store.count(); ++id) {
        const std::string& name = store.name(id);
        write_u32(out, static_cast<std::uint32_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
        const auto dims = store.dims(id);
        write_u32(out, static_cast<std::uint32_t>(dims.size()));
        for (std::uint32_t d : dims) write_u32(out, d);
        for (double x : store.values(id)) write_f64(out, x);
    }
    if (!vocab_tokens.empty()) {
        write_u32(out, 0); // end of parameter records
        write_u32(out, static_cast<std::uint32_t>(vocab_tokens.size()));
        for (const std::string& tok : vocab_tokens) {
            write_u32(out, static_cast<std::uint32_t>(tok.size()));
            out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
        }
    }
    if (!out) {
        throw std::runtime_error("write failed for checkpoint: " + path.string());
    }
}

CheckpointData read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint: " + path.string());
    }
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) {
        throw std::runtime_error("not a checkpoint file (bad magic): " + path.string());
    }
    CheckpointData data;
    std::uint32_t name_len = 0;
    while (read_u32(in, name_len)) {
        if (name_len == 0) {
            // Vocabulary section follows.
            std::uint32_t count = 0;
            if (!read_u32(in, count)) {
                throw std::runtime_error("checkpoint truncated in vocabulary header");
            }
            data.vocab_tokens.reserve(count);
            for (std::uint32_t i = 0; i < count; ++i) {
                std::uint32_t tok_len = 0;
                if (!read_u32(in, tok_len)) {
                    throw std::runtime_error("checkpoint truncated in vocabulary");
                }
                data.vocab_tokens.push_back(read_bytes(in, tok_len, "vocabulary token"));
            }
            break;
        }
        CheckpointRecord rec;
        rec.name = read_bytes(in, name_len, "parameter name");
        std::uint32_t rank = 0;
        if (!read_u32(in, rank)) {
            throw std::runtime_error("checkpoint truncated while reading rank of " + rec.name);
        }
        std::size_t elems = 1;
        for (std::uint32_t r = 0; r < rank; ++r) {
            std::uint32_t d = 0;
            if (!read_u32(in, d)) {
                throw std::runtime_error("checkpoint truncated while reading dims of " + rec.name);
            }
            rec.dims.push_back(d);
            elems *= d;
        }
        rec.data.reserve(elems);
        for (std::size_t i = 0; i < elems; ++i) rec.data.push_back(read_f64(in));
        data.records.push_back(std::move(rec));
    }
    return data;
}

void load_into(ParamStore& store, const CheckpointData& data) {
    for (ParamId id = 0; id < store.count(); ++id) {
        const std::string& name = store.name(id);
        const CheckpointRecord* rec = data.find(name);
        if (rec == nullptr) {
            throw std::runtime_error("checkpoint missing parameter: " + name);
        }
        const auto want = store.dims(id);
        if (rec->dims != want) {
            std::ostringstream msg;
            msg << "checkpoint shape mismatch for " << name << ": file has (";
            for (std::size_t i = 0; i < rec->dims.size(); ++i) {
                msg << (i ? "x" : "") << rec->dims[i];
            }
            msg << "), model expects (";
            for (std::size_t i = 0; i < want.size(); ++i) msg << (i ? "x" : "") << want[i];
            msg << ")";
            throw std::runtime_error(msg.str());
        }
        auto v = store.values(id);
        std::copy(rec->data.begin(), rec->data.end(), v.begin());
    }
}

} // namespace kgcwalk
