#include "fdam/tensor_io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace fdam {

namespace {

constexpr char kMagic[4] = {'F', 'D', 'A', 'M'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kDtypeF64 = 0;
constexpr std::uint8_t kDtypeC128 = 1;
constexpr index_t kMaxRank = 8;

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64(std::string& out, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof bits);
    append_u64(out, bits);
}

std::string header(std::uint8_t dtype, const std::vector<index_t>& shape) {
    std::string out(kMagic, 4);
    out.push_back(static_cast<char>(kVersion));
    out.push_back(static_cast<char>(dtype));
    append_u64(out, static_cast<std::uint64_t>(shape.size()));
    for (index_t d : shape) append_u64(out, static_cast<std::uint64_t>(d));
    return out;
}

class Parser {
  public:
    Parser(std::string bytes, std::string path) : bytes_(std::move(bytes)), path_(std::move(path)) {}

    std::uint8_t u8(const char* what) {
        if (pos_ + 1 > bytes_.size()) fail(std::string("truncated header: missing ") + what);
        return static_cast<std::uint8_t>(bytes_[pos_++]);
    }

    std::uint64_t u64(const char* what) {
        if (pos_ + 8 > bytes_.size()) fail(std::string("truncated header: missing ") + what);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    double f64() {
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 8;
        double x;
        std::memcpy(&x, &bits, sizeof x);
        return x;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::runtime_error(path_ + ": " + msg);
    }

  private:
    std::string bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

// Parses header + shape; leaves the parser at the payload. Returns dtype.
std::uint8_t parse_header(Parser& p, std::vector<index_t>& shape) {
    char magic[4];
    for (char& c : magic) c = static_cast<char>(p.u8("magic"));
    if (std::memcmp(magic, kMagic, 4) != 0) p.fail("bad magic: expected \"FDAM\"");
    const std::uint8_t version = p.u8("version");
    if (version != kVersion)
        p.fail("unsupported version: " + std::to_string(version) + " (expected 1)");
    const std::uint8_t dtype = p.u8("dtype");
    if (dtype != kDtypeF64 && dtype != kDtypeC128)
        p.fail("unknown dtype byte: " + std::to_string(dtype));
    const std::uint64_t rank = p.u64("rank");
    if (rank > static_cast<std::uint64_t>(kMaxRank))
        p.fail("implausible rank " + std::to_string(rank));
    shape.clear();
    for (std::uint64_t i = 0; i < rank; ++i) {
        const std::uint64_t d = p.u64("extent");
        if (d == 0 || d > (1u << 24)) p.fail("implausible extent " + std::to_string(d));
        shape.push_back(static_cast<index_t>(d));
    }
    return dtype;
}

void check_payload(Parser& p, index_t numel, std::size_t bytes_per_scalar) {
    const std::size_t expected = static_cast<std::size_t>(numel) * bytes_per_scalar;
    if (p.remaining() != expected)
        p.fail("truncated payload: expected " + std::to_string(expected) + " bytes, got " +
               std::to_string(p.remaining()));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error(path + ": cannot open file");
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return bytes;
}

}  // namespace

void write_tensor(const std::string& path, const Tensor& t) {
    std::string out = header(kDtypeF64, t.shape());
    out.reserve(out.size() + static_cast<std::size_t>(t.numel()) * 8);
    for (index_t i = 0; i < t.numel(); ++i) append_f64(out, t[i]);
    write_text_file(path, out);
}

void write_tensor(const std::string& path, const ComplexTensor& t) {
    std::string out = header(kDtypeC128, t.shape());
    out.reserve(out.size() + static_cast<std::size_t>(t.numel()) * 16);
    for (index_t i = 0; i < t.numel(); ++i) {
        append_f64(out, t[i].real());
        append_f64(out, t[i].imag());
    }
    write_text_file(path, out);
}

Tensor read_tensor(const std::string& path) {
    Parser p(slurp(path), path);
    std::vector<index_t> shape;
    if (parse_header(p, shape) != kDtypeF64) p.fail("dtype is c128, expected f64");
    const index_t numel = shape_numel(shape);
    check_payload(p, numel, 8);
    Tensor t(shape);
    for (index_t i = 0; i < numel; ++i) t[i] = p.f64();
    return t;
}

ComplexTensor read_complex_tensor(const std::string& path) {
    Parser p(slurp(path), path);
    std::vector<index_t> shape;
    if (parse_header(p, shape) != kDtypeC128) p.fail("dtype is f64, expected c128");
    const index_t numel = shape_numel(shape);
    check_payload(p, numel, 16);
    ComplexTensor t(shape);
    for (index_t i = 0; i < numel; ++i) {
        const double re = p.f64();
        const double im = p.f64();
        t[i] = cdouble{re, im};
    }
    return t;
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv_matrix(const std::string& path, const Tensor& m) {
    require(m.rank() == 2, "write_csv_matrix: expected a rank-2 tensor");
    std::string out;
    for (index_t i = 0; i < m.dim(0); ++i) {
        for (index_t j = 0; j < m.dim(1); ++j) {
            if (j) out.push_back(',');
            out += format_double(m(i, j));
        }
        out.push_back('\n');
    }
    write_text_file(path, out);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error(path + ": write failed");
}

std::string read_text_file(const std::string& path) { return slurp(path); }

}  // namespace fdam
