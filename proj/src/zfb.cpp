#include "zsl/zfb.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "zsl/errors.hpp"

namespace zsl::zfb {
namespace {

constexpr char kMagicF32[4] = {'Z', 'F', 'B', '1'};
constexpr char kMagicF64[4] = {'Z', 'F', 'B', '8'};
constexpr char kMagicLabels[4] = {'Z', 'F', 'L', '1'};
constexpr std::size_t kHeader = 4 + 8 + 8;

template <typename U>
void put_le(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        out.push_back(static_cast<char>(static_cast<unsigned char>(v >> (8 * i))));
    }
}

template <typename U>
U get_le(const std::string& buf, std::size_t offset) {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        v |= static_cast<U>(static_cast<unsigned char>(buf[offset + i])) << (8 * i);
    }
    return v;
}

std::string fail_prefix(const std::filesystem::path& path, std::size_t offset) {
    std::ostringstream os;
    os << path.filename().string() << " @" << offset << ": ";
    return os.str();
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.filename().string() + ": cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void dump(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                  Precision precision) {
    const bool f32 = precision == Precision::Float32;
    const std::size_t elem = f32 ? 4 : 8;
    std::string bytes;
    bytes.reserve(kHeader + elem * static_cast<std::size_t>(m.size()));
    bytes.append(f32 ? kMagicF32 : kMagicF64, 4);
    put_le<std::uint64_t>(bytes, static_cast<std::uint64_t>(m.rows()));
    put_le<std::uint64_t>(bytes, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (f32) {
                put_le(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(m(r, c))));
            } else {
                put_le(bytes, std::bit_cast<std::uint64_t>(m(r, c)));
            }
        }
    }
    dump(path, bytes);
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
    const std::string buf = slurp(path);
    if (buf.size() < kHeader) {
        throw DataError(fail_prefix(path, buf.size()) + "truncated header");
    }
    bool f32;
    if (std::memcmp(buf.data(), kMagicF32, 4) == 0) {
        f32 = true;
    } else if (std::memcmp(buf.data(), kMagicF64, 4) == 0) {
        f32 = false;
    } else {
        throw DataError(fail_prefix(path, 0) + "magic bytes mismatch (expected ZFB1 or ZFB8)");
    }
    const auto rows = get_le<std::uint64_t>(buf, 4);
    const auto cols = get_le<std::uint64_t>(buf, 12);
    const std::size_t elem = f32 ? 4 : 8;
    const std::size_t expected = kHeader + rows * cols * elem;
    if (buf.size() != expected) {
        std::ostringstream os;
        os << "payload size mismatch for " << rows << "x" << cols << " (expected " << expected
           << " bytes, found " << buf.size() << ")";
        throw DataError(fail_prefix(path, std::min(buf.size(), expected)) + os.str());
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::size_t offset = kHeader;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c, offset += elem) {
            const double v = f32 ? static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(buf, offset)))
                                 : std::bit_cast<double>(get_le<std::uint64_t>(buf, offset));
            if (!std::isfinite(v)) {
                throw DataError(fail_prefix(path, offset) + "non-finite value");
            }
            m(r, c) = v;
        }
    }
    return m;
}

void write_labels(const std::filesystem::path& path, const std::vector<std::uint32_t>& labels) {
    std::string bytes;
    bytes.reserve(12 + 4 * labels.size());
    bytes.append(kMagicLabels, 4);
    put_le<std::uint64_t>(bytes, labels.size());
    for (auto l : labels) put_le(bytes, l);
    dump(path, bytes);
}

std::vector<std::uint32_t> read_labels(const std::filesystem::path& path) {
    const std::string buf = slurp(path);
    if (buf.size() < 12) throw DataError(fail_prefix(path, buf.size()) + "truncated header");
    if (std::memcmp(buf.data(), kMagicLabels, 4) != 0) {
        throw DataError(fail_prefix(path, 0) + "magic bytes mismatch (expected ZFL1)");
    }
    const auto count = get_le<std::uint64_t>(buf, 4);
    const std::size_t expected = 12 + 4 * count;
    if (buf.size() != expected) {
        std::ostringstream os;
        os << "payload size mismatch for " << count << " labels (expected " << expected
           << " bytes, found " << buf.size() << ")";
        throw DataError(fail_prefix(path, std::min(buf.size(), expected)) + os.str());
    }
    std::vector<std::uint32_t> labels(count);
    for (std::size_t i = 0; i < count; ++i) labels[i] = get_le<std::uint32_t>(buf, 12 + 4 * i);
    return labels;
}

}  // namespace zsl::zfb
