#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

namespace tensorcommit::algebra {

using digest256 = std::array<std::uint8_t, 32>;
using digest512 = std::array<std::uint8_t, 64>;

inline digest256 sha256(std::span<const std::uint8_t> data)
{
    digest256 out;
    SHA256(data.data(), data.size(), out.data());
    return out;
}

inline digest512 sha512(std::span<const std::uint8_t> data)
{
    digest512 out;
    SHA512(data.data(), data.size(), out.data());
    return out;
}

/// SHA-512 over `domain || data`.
inline digest512 sha512_tagged(std::string_view domain, std::span<const std::uint8_t> data)
{
    digest512 out;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha512(), nullptr);
    EVP_DigestUpdate(ctx, domain.data(), domain.size());
    EVP_DigestUpdate(ctx, data.data(), data.size());
    EVP_DigestFinal_ex(ctx, out.data(), nullptr);
    EVP_MD_CTX_free(ctx);
    return out;
}

inline digest512 hmac_sha512(std::span<const std::uint8_t> key, std::span<const std::uint8_t> msg)
{
    digest512 out;
    unsigned int len = 0;
    HMAC(EVP_sha512(), key.data(), static_cast<int>(key.size()), msg.data(), msg.size(), out.data(), &len);
    return out;
}

/// Maps arbitrary bytes to a field element: SHA-512 with a domain tag, then
/// wide reduction. Used wherever a group element has to live inside a field
/// tensor (child commitments in verkle/terkle nodes, layer commitments).
template <class F>
F hash_to_field(std::string_view domain, std::span<const std::uint8_t> data)
{
    auto d = sha512_tagged(domain, data);
    return F::from_bytes_wide(d);
}

}  // namespace tensorcommit::algebra
