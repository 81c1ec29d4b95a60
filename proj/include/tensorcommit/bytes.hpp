#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tensorcommit/errors.hpp"

namespace tensorcommit {

using bytes = std::vector<std::uint8_t>;

// Little-endian writer for the wire formats.
class byte_writer {
public:
    void put_u8(std::uint8_t v) { buf_.push_back(v); }
    void put_u16(std::uint16_t v) { put_le(v, 2); }
    void put_u32(std::uint32_t v) { put_le(v, 4); }
    void put_u64(std::uint64_t v) { put_le(v, 8); }
    void put_bytes(std::span<const std::uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void put_magic(std::string_view m) { buf_.insert(buf_.end(), m.begin(), m.end()); }
    void put_blob(std::span<const std::uint8_t> b)
    {
        put_u32(static_cast<std::uint32_t>(b.size()));
        put_bytes(b);
    }

    /// Reserves `n` bytes at the tail and returns a span over them.
    std::span<std::uint8_t> grow(std::size_t n)
    {
        auto off = buf_.size();
        buf_.resize(off + n);
        return {buf_.data() + off, n};
    }

    const bytes& data() const& { return buf_; }
    bytes take() && { return std::move(buf_); }

private:
    void put_le(std::uint64_t v, int n)
    {
        for (int i = 0; i < n; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }

    bytes buf_;
};

// Bounds-checked little-endian reader. Every short read throws format_error.
class byte_reader {
public:
    explicit byte_reader(std::span<const std::uint8_t> in) : in_(in) {}

    std::uint8_t get_u8() { return static_cast<std::uint8_t>(get_le(1)); }
    std::uint16_t get_u16() { return static_cast<std::uint16_t>(get_le(2)); }
    std::uint32_t get_u32() { return static_cast<std::uint32_t>(get_le(4)); }
    std::uint64_t get_u64() { return get_le(8); }

    std::span<const std::uint8_t> get_bytes(std::size_t n)
    {
        need(n);
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }

    std::span<const std::uint8_t> get_blob() { return get_bytes(get_u32()); }

    void expect_magic(std::string_view m)
    {
        auto got = get_bytes(m.size());
        if (std::memcmp(got.data(), m.data(), m.size()) != 0)
            throw format_error("bad magic, expected '" + std::string(m) + "'");
    }

    std::size_t remaining() const { return in_.size() - pos_; }

    void expect_end() const
    {
        if (remaining() != 0) throw format_error("trailing bytes after record");
    }

private:
    void need(std::size_t n) const
    {
        if (in_.size() - pos_ < n) throw format_error("unexpected end of input");
    }

    std::uint64_t get_le(int n)
    {
        need(static_cast<std::size_t>(n));
        std::uint64_t v = 0;
        for (int i = 0; i < n; ++i) v |= std::uint64_t(in_[pos_ + i]) << (8 * i);
        pos_ += static_cast<std::size_t>(n);
        return v;
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
};

}  // namespace tensorcommit
