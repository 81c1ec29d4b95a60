#pragma once

#include "tensorcommit/protocol/session.hpp"

namespace tensorcommit::protocol {

inline constexpr std::uint8_t transcript_version = 1;

/// "TCTR" | version u8 | input digest (32) | u16 n, output values | root
/// commitment, u32 leaf count, u16 depth | u32 count, then per challenge:
/// u32 layer, opening blob (TCOP, carries the point) | u32 count, then per
/// revealed layer: u32 layer, commitment, proof blob (TCTP), u16 n, values |
/// verdict u8.
template <algebra::group_backend B>
bytes encode_transcript(const transcript<B>& tr)
{
    using scalar = typename B::scalar;
    byte_writer w;
    w.put_magic("TCTR");
    w.put_u8(transcript_version);
    w.put_bytes(tr.digest);
    w.put_u16(static_cast<std::uint16_t>(tr.output.size()));
    for (const auto& v : tr.output) v.to_bytes(w.grow(scalar::byte_size));
    B::encode(tr.root.commitment, w.grow(B::g1_bytes));
    w.put_u32(static_cast<std::uint32_t>(tr.root.leaf_count));
    w.put_u16(static_cast<std::uint16_t>(tr.root.depth));
    w.put_u32(static_cast<std::uint32_t>(tr.records.size()));
    for (const auto& r : tr.records) {
        w.put_u32(r.layer);
        w.put_blob(commit::encode_opening(r.opening));
    }
    w.put_u32(static_cast<std::uint32_t>(tr.reveals.size()));
    for (const auto& r : tr.reveals) {
        w.put_u32(r.layer);
        B::encode(r.commitment, w.grow(B::g1_bytes));
        w.put_blob(authtree::encode_proof(r.proof));
        w.put_u16(static_cast<std::uint16_t>(r.values.size()));
        for (const auto& v : r.values) v.to_bytes(w.grow(scalar::byte_size));
    }
    w.put_u8(static_cast<std::uint8_t>(tr.result));
    return std::move(w).take();
}

template <algebra::group_backend B>
transcript<B> decode_transcript(std::span<const std::uint8_t> in)
{
    using scalar = typename B::scalar;
    byte_reader r(in);
    r.expect_magic("TCTR");
    if (r.get_u8() != transcript_version) throw format_error("unsupported transcript version");
    auto field = [&] {
        auto x = scalar::from_bytes(r.get_bytes(scalar::byte_size));
        if (!x) throw format_error("transcript: non-canonical field element");
        return *x;
    };
    auto point = [&] {
        auto p = B::decode_g1(r.get_bytes(B::g1_bytes));
        if (!p) throw format_error("transcript: invalid group element");
        return *p;
    };
    transcript<B> tr;
    auto d = r.get_bytes(tr.digest.size());
    std::copy(d.begin(), d.end(), tr.digest.begin());
    const std::size_t n = r.get_u16();
    for (std::size_t i = 0; i < n; ++i) tr.output.push_back(field());
    tr.root.kind = authtree::tree_kind::terkle;
    tr.root.commitment = point();
    tr.root.leaf_count = r.get_u32();
    tr.root.depth = r.get_u16();
    const std::size_t nc = r.get_u32();
    for (std::size_t i = 0; i < nc; ++i) {
        challenge_record<B> rec;
        rec.layer = r.get_u32();
        rec.opening = commit::decode_opening<B>(r.get_blob());
        tr.records.push_back(std::move(rec));
    }
    const std::size_t nr = r.get_u32();
    for (std::size_t i = 0; i < nr; ++i) {
        layer_reveal<B> rv;
        rv.layer = r.get_u32();
        rv.commitment = point();
        rv.proof = authtree::decode_proof<B>(r.get_blob());
        const std::size_t nv = r.get_u16();
        for (std::size_t k = 0; k < nv; ++k) rv.values.push_back(field());
        tr.reveals.push_back(std::move(rv));
    }
    const auto v = r.get_u8();
    if (v > static_cast<std::uint8_t>(verdict::malformed) && v != static_cast<std::uint8_t>(verdict::pending))
        throw format_error("transcript: unknown verdict");
    tr.result = static_cast<verdict>(v);
    r.expect_end();
    return tr;
}

}  // namespace tensorcommit::protocol
